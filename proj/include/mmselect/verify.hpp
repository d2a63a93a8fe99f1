#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mmselect/algorithms.hpp"
#include "mmselect/bounds.hpp"
#include "mmselect/experiments.hpp"
#include "mmselect/generators.hpp"

namespace mmselect {

struct VerifyOptions {
  std::size_t max_exhaustive = 8;
  std::vector<std::size_t> sizes{1000, 10000, 100000};
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::vector<AlgorithmId> algorithms = all_algorithms();
  // Flip the k-th comparison of every run; for mutation testing.
  std::optional<std::uint64_t> flip_at;
};

struct VerifyReport {
  std::uint64_t exhaustive_checks = 0;
  std::uint64_t randomized_checks = 0;
  std::uint64_t trace_checks = 0;  // runs whose trace invariants were checked
  std::uint64_t mismatches = 0;
  std::uint64_t violations = 0;
  std::string first_counterexample;

  bool passed() const { return mismatches == 0 && violations == 0; }
};

namespace detail {

inline std::string render_keys(const std::vector<std::int64_t>& keys) {
  std::ostringstream os;
  const std::size_t shown = std::min<std::size_t>(keys.size(), 16);
  for (std::size_t p = 0; p < shown; ++p) os << (p ? "," : "") << keys[p];
  if (shown < keys.size()) os << ",...(" << keys.size() << " keys)";
  return os.str();
}

inline void verify_one(const AlgorithmId& algo, const std::vector<std::int64_t>& keys,
                       std::size_t i, const Element<std::int64_t>& expected,
                       const VerifyOptions& opt, VerifyReport& out, const std::string& origin) {
  auto report = run(algo, make_sequence(keys), i, opt.flip_at);
  ++out.trace_checks;
  std::string problem;
  if (!(report.result == expected)) {
    ++out.mismatches;
    std::ostringstream os;
    os << "returned key " << report.result.key << " (origin " << report.result.origin
       << "), expected " << expected.key;
    problem = os.str();
  } else if (auto c = check_run(report); !c) {
    ++out.violations;
    problem = c.explanation;
  }
  if (!problem.empty() && out.first_counterexample.empty()) {
    out.first_counterexample = algo.name() + " on " + origin + " [" + render_keys(keys) +
                               "], i=" + std::to_string(i) + ": " + problem;
  }
}

}  // namespace detail

/// Oracle equivalence over (a) every permutation of 1..n for n up to
/// `max_exhaustive` and every i, and (b) `trials` seeded uniform inputs per
/// size with i cycling through the nine deciles; plus every trace invariant
/// of every run.
inline VerifyReport run_verify(const VerifyOptions& opt) {
  VerifyReport out;
  for (std::size_t n = 1; n <= opt.max_exhaustive; ++n) {
    auto perms = exhaustive_permutations(n);
    while (auto keys = perms.next()) {
      auto seq = make_sequence(*keys);
      for (std::size_t i = 1; i <= n; ++i) {
        const auto expected = sorting_oracle_select(SelectionRequest<std::int64_t>{seq, i});
        for (const auto& algo : opt.algorithms) {
          detail::verify_one(algo, *keys, i, expected, opt, out, "permutation");
          ++out.exhaustive_checks;
        }
      }
    }
  }
  for (std::size_t si = 0; si < opt.sizes.size(); ++si) {
    const std::size_t n = opt.sizes[si];
    for (std::size_t t = 0; t < opt.trials; ++t) {
      GeneratorSpec g{GeneratorKind::UniformPermutation, n, derive_seed(opt.seed, si, t)};
      auto keys = generate_keys(g);
      const std::size_t i = quantile_rank(n, 1 + t % 9);
      const auto expected =
          sorting_oracle_select(SelectionRequest<std::int64_t>{make_sequence(keys), i});
      for (const auto& algo : opt.algorithms) {
        detail::verify_one(algo, keys, i, expected, opt, out, to_string(g));
        ++out.randomized_checks;
      }
    }
  }
  return out;
}

inline void print_summary(std::ostream& os, const VerifyReport& r) {
  os << "exhaustive equivalence checks: " << r.exhaustive_checks << '\n'
     << "randomized equivalence checks: " << r.randomized_checks << '\n'
     << "trace invariant checks: " << r.trace_checks << '\n'
     << "mismatches: " << r.mismatches << '\n'
     << "invariant violations: " << r.violations << '\n';
  if (!r.first_counterexample.empty()) os << "first counterexample: " << r.first_counterexample << '\n';
  os << (r.passed() ? "PASS" : "FAIL") << '\n';
}

}  // namespace mmselect
