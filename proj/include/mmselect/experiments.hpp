#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmselect/algorithms.hpp"
#include "mmselect/bounds.hpp"
#include "mmselect/generators.hpp"
#include "mmselect/trace.hpp"

namespace mmselect {

enum class TargetKind { Middle, ExtremeLow, ExtremeHigh, QuantileSweep, Fixed };

/// How the target rank i is chosen from n.
struct TargetRule {
  TargetKind kind = TargetKind::Middle;
  std::size_t fixed = 1;  // Fixed only

  friend bool operator==(const TargetRule&, const TargetRule&) = default;
};

inline TargetRule parse_target(std::string_view s) {
  if (s == "middle") return {TargetKind::Middle};
  if (s == "low") return {TargetKind::ExtremeLow};
  if (s == "high") return {TargetKind::ExtremeHigh};
  if (s == "sweep") return {TargetKind::QuantileSweep};
  if (s.rfind("fixed:", 0) == 0) {
    return {TargetKind::Fixed, static_cast<std::size_t>(detail::parse_u64("fixed", s.substr(6)))};
  }
  throw std::invalid_argument("unknown target rule '" + std::string(s) + "'");
}

/// Rank round(q n) for q = tenths/10, rounding halves up, clamped to [1, n].
inline std::size_t quantile_rank(std::size_t n, std::size_t tenths) {
  std::size_t i = (tenths * n + 5) / 10;
  return std::clamp<std::size_t>(i, 1, n);
}

/// The (label, i) pairs a rule expands to at size n. The sweep yields the nine
/// deciles 0.1..0.9; every other rule yields one target.
inline std::vector<std::pair<std::string, std::size_t>> expand_targets(const TargetRule& r,
                                                                       std::size_t n) {
  switch (r.kind) {
    case TargetKind::Middle: return {{"middle", (n + 1) / 2}};
    case TargetKind::ExtremeLow: return {{"low", 1}};
    case TargetKind::ExtremeHigh: return {{"high", n}};
    case TargetKind::Fixed:
      if (r.fixed < 1 || r.fixed > n) throw std::out_of_range("rank out of bounds");
      return {{"fixed:" + std::to_string(r.fixed), r.fixed}};
    case TargetKind::QuantileSweep: {
      std::vector<std::pair<std::string, std::size_t>> out;
      for (std::size_t t = 1; t <= 9; ++t) {
        out.push_back({"q0." + std::to_string(t), quantile_rank(n, t)});
      }
      return out;
    }
  }
  return {};
}

struct ExperimentSpec {
  std::vector<AlgorithmId> algorithms;
  std::vector<std::size_t> sizes;
  TargetRule target;
  GeneratorSpec generator;  // n is overridden per cell, seed is the base seed
  std::size_t repetitions = 1;
  std::string output;  // CSV path, empty for none
};

/// Validates sizes/repetitions/algorithms; throws std::invalid_argument.
inline void validate(const ExperimentSpec& s) {
  if (s.algorithms.empty()) throw std::invalid_argument("experiment needs at least one algorithm");
  if (s.sizes.empty()) throw std::invalid_argument("experiment needs at least one size");
  if (s.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  for (std::size_t k = 0; k < s.sizes.size(); ++k) {
    if (s.sizes[k] == 0) throw std::invalid_argument("sizes must be >= 1");
    if (k > 0 && s.sizes[k] <= s.sizes[k - 1]) {
      throw std::invalid_argument("sizes must be strictly increasing");
    }
  }
}

struct ScalingRow {
  std::string algorithm;
  std::size_t n = 0;
  std::string target;
  std::size_t repetitions = 0;
  double mean_comparisons = 0;
  std::uint64_t max_comparisons = 0;
  double mean_comparisons_per_element = 0;
  double mean_max_depth = 0;
};

/// Input seed for repetition `rep` at size index `size_index`. Independent of
/// the algorithm, so every algorithm sees the same inputs.
inline std::uint64_t cell_seed(std::uint64_t base, std::size_t size_index, std::size_t rep) {
  return derive_seed(base, size_index, rep);
}

/// Runs every (algorithm, size, target, repetition) cell in that nesting
/// order and checks every run's trace invariants. Throws std::runtime_error
/// on the first violation.
inline std::vector<ScalingRow> run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  std::vector<ScalingRow> rows;
  for (const auto& algo : spec.algorithms) {
    for (std::size_t si = 0; si < spec.sizes.size(); ++si) {
      const std::size_t n = spec.sizes[si];
      // Inputs are shared by all targets of a cell.
      std::vector<Sequence<std::int64_t>> inputs;
      for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
        GeneratorSpec g = spec.generator;
        g.n = n;
        g.seed = cell_seed(spec.generator.seed, si, rep);
        inputs.push_back(generate(g));
      }
      for (const auto& [label, i] : expand_targets(spec.target, n)) {
        ScalingRow row{algo.name(), n, label, spec.repetitions};
        double cmp_sum = 0, depth_sum = 0;
        for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
          AlgorithmId a = algo;
          if (a.kind == AlgorithmKind::RandomizedQuickselect) {
            a.seed = derive_seed(algo.seed, si, rep);
          }
          auto report = run(a, inputs[rep], i);
          if (auto c = check_run(report); !c) {
            throw std::runtime_error("invariant violation: " + c.explanation);
          }
          cmp_sum += static_cast<double>(report.total_comparisons);
          depth_sum += static_cast<double>(report.max_depth);
          row.max_comparisons = std::max(row.max_comparisons, report.total_comparisons);
        }
        const double reps = static_cast<double>(spec.repetitions);
        row.mean_comparisons = cmp_sum / reps;
        row.mean_comparisons_per_element = row.mean_comparisons / static_cast<double>(n);
        row.mean_max_depth = depth_sum / reps;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

inline const char* scaling_csv_header() {
  return "algo,n,target,reps,mean_cmp,max_cmp,mean_cmp_per_elem,mean_depth";
}

inline void write_scaling_csv(std::ostream& os, const std::vector<ScalingRow>& rows) {
  os << scaling_csv_header() << '\n';
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%s,%zu,%.3f,%llu,%.6f,%.3f\n", r.algorithm.c_str(), r.n,
                  r.target.c_str(), r.repetitions, r.mean_comparisons,
                  static_cast<unsigned long long>(r.max_comparisons),
                  r.mean_comparisons_per_element, r.mean_max_depth);
    os << buf;
  }
}

// Growth fits
// -----------

struct LineFit {
  double slope = 0;
  double intercept = 0;
  std::vector<double> residuals;  // y - (slope x + intercept), one per point
};

/// Ordinary least squares of y on x; needs two distinct x values.
inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) mx += x[k], my += y[k];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit needs distinct sizes");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t k = 0; k < x.size(); ++k) f.residuals.push_back(y[k] - (f.slope * x[k] + f.intercept));
  return f;
}

/// Two fits over the rows of one algorithm and target:
///  - log_log: ln(mean comparisons) against ln n; the slope is the growth exponent.
///  - per_element: mean comparisons / n against ln n; the slope is the
///    per-element cost added per e-fold of n (0 for linear, 1/ln 2 for n log2 n).
/// The report carries no verdict.
struct GrowthFit {
  std::string algorithm;
  std::string target;
  std::vector<std::size_t> sizes;
  LineFit log_log;
  LineFit per_element;
};

inline GrowthFit growth_fit(const std::vector<ScalingRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("growth fit needs rows");
  std::vector<std::size_t> sizes;
  std::vector<double> ln_n, ln_cmp, per_elem;
  for (const auto& r : rows) {
    if (r.algorithm != rows[0].algorithm || r.target != rows[0].target) {
      throw std::invalid_argument("growth fit rows must share algorithm and target");
    }
    if (r.n == 0 || r.mean_comparisons <= 0) {
      throw std::invalid_argument("growth fit needs positive comparison counts");
    }
    sizes.push_back(r.n);
    ln_n.push_back(std::log(static_cast<double>(r.n)));
    ln_cmp.push_back(std::log(r.mean_comparisons));
    per_elem.push_back(r.mean_comparisons / static_cast<double>(r.n));
  }
  auto distinct = sizes;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 4 || distinct.back() < 100 * distinct.front()) {
    throw std::invalid_argument(
        "growth fit needs at least 4 distinct sizes spanning 2 orders of magnitude");
  }
  return {rows[0].algorithm, rows[0].target, sizes, least_squares(ln_n, ln_cmp),
          least_squares(ln_n, per_elem)};
}

/// One fit per (algorithm, target) group, in first-appearance order.
inline std::vector<GrowthFit> growth_fits(const std::vector<ScalingRow>& rows) {
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& r : rows) {
    std::pair k{r.algorithm, r.target};
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  std::vector<GrowthFit> fits;
  for (const auto& [a, t] : keys) {
    std::vector<ScalingRow> group;
    for (const auto& r : rows) {
      if (r.algorithm == a && r.target == t) group.push_back(r);
    }
    fits.push_back(growth_fit(group));
  }
  return fits;
}

inline nlohmann::json to_json(const LineFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"residuals", f.residuals}};
}

inline nlohmann::json to_json(const GrowthFit& f) {
  return {{"algo", f.algorithm},
          {"target", f.target},
          {"sizes", f.sizes},
          {"log_log", to_json(f.log_log)},
          {"per_element_vs_ln_n", to_json(f.per_element)}};
}

inline nlohmann::json to_json(const std::vector<GrowthFit>& fits) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& f : fits) out.push_back(to_json(f));
  return out;
}

/// Reads an experiment description:
///   {"algorithms": ["repeated3", ...], "sizes": [1000, ...], "target": "middle",
///    "generator": "uniform", "k": 8, "seed": 0, "repetitions": 5, "output": "out.csv"}
/// Only "algorithms" and "sizes" are required.
inline ExperimentSpec parse_experiment(const nlohmann::json& j) {
  ExperimentSpec s;
  const std::uint64_t seed = j.value("seed", std::uint64_t{0});
  for (const auto& a : j.at("algorithms")) {
    s.algorithms.push_back(AlgorithmId::parse(a.get<std::string>(), seed));
  }
  s.sizes = j.at("sizes").get<std::vector<std::size_t>>();
  s.target = parse_target(j.value("target", std::string("middle")));
  s.generator.kind = parse_kind(j.value("generator", std::string("uniform")));
  s.generator.k = j.value("k", std::uint64_t{1});
  s.generator.seed = seed;
  s.repetitions = j.value("repetitions", std::size_t{1});
  s.output = j.value("output", std::string());
  return s;
}

}  // namespace mmselect
