#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmselect/element.hpp"
#include "mmselect/random.hpp"

namespace mmselect {

enum class GeneratorKind { UniformPermutation, Sorted, Reversed, OrganPipe, FewDistinct, MedianKiller };

/// Deterministic input description, serialized as e.g. "uniform:n=1000:seed=42".
///
/// Kinds and their string names:
///   uniform    permutation of 1..n, Fisher-Yates driven by mt19937_64(seed)
///   sorted     1..n
///   reversed   n..1
///   organpipe  odd values ascending, then even values descending (1,3,5,6,4,2)
///   few        n draws from 1..k, mt19937_64(seed)
///   killer     best-effort adversary for small-group medians, see generate()
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::UniformPermutation;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t k = 1;  // FewDistinct only

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

inline std::string_view kind_name(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::UniformPermutation: return "uniform";
    case GeneratorKind::Sorted: return "sorted";
    case GeneratorKind::Reversed: return "reversed";
    case GeneratorKind::OrganPipe: return "organpipe";
    case GeneratorKind::FewDistinct: return "few";
    case GeneratorKind::MedianKiller: return "killer";
  }
  return "?";
}

inline GeneratorKind parse_kind(std::string_view s) {
  for (auto k : {GeneratorKind::UniformPermutation, GeneratorKind::Sorted, GeneratorKind::Reversed,
                 GeneratorKind::OrganPipe, GeneratorKind::FewDistinct, GeneratorKind::MedianKiller}) {
    if (kind_name(k) == s) return k;
  }
  throw std::invalid_argument("unknown generator '" + std::string(s) + "'");
}

inline bool uses_seed(GeneratorKind k) {
  return k == GeneratorKind::UniformPermutation || k == GeneratorKind::FewDistinct;
}

inline std::string to_string(const GeneratorSpec& g) {
  std::string s(kind_name(g.kind));
  s += ":n=" + std::to_string(g.n);
  if (g.kind == GeneratorKind::FewDistinct) s += ":k=" + std::to_string(g.k);
  if (uses_seed(g.kind)) s += ":seed=" + std::to_string(g.seed);
  return s;
}

namespace detail {

inline std::uint64_t parse_u64(std::string_view field, std::string_view v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
    throw std::invalid_argument("bad value for " + std::string(field) + ": '" + std::string(v) + "'");
  }
  return out;
}

}  // namespace detail

/// Parses "kind:n=..[:k=..][:seed=..]". Missing n is an error; seed defaults to 0.
inline GeneratorSpec parse_generator(std::string_view s) {
  GeneratorSpec g;
  auto next = [&s]() {
    auto colon = s.find(':');
    auto tok = s.substr(0, colon);
    s = colon == std::string_view::npos ? std::string_view{} : s.substr(colon + 1);
    return tok;
  };
  g.kind = parse_kind(next());
  bool have_n = false;
  while (!s.empty()) {
    auto tok = next();
    auto eq = tok.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("malformed generator field '" + std::string(tok) + "'");
    }
    auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "n") {
      g.n = detail::parse_u64(key, val);
      have_n = true;
    } else if (key == "seed") {
      g.seed = detail::parse_u64(key, val);
    } else if (key == "k") {
      g.k = detail::parse_u64(key, val);
    } else {
      throw std::invalid_argument("unknown generator field '" + std::string(key) + "'");
    }
  }
  if (!have_n) throw std::invalid_argument("generator spec needs n=");
  return g;
}

/// Shuffles in place: for p = n-1 down to 1, swap v[p] with v[uniform_below(p + 1)].
template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t p = v.size(); p > 1; --p) {
    std::swap(v[p - 1], v[uniform_below(rng, p)]);
  }
}

/// Keys of the sequence described by `spec`.
inline std::vector<std::int64_t> generate_keys(const GeneratorSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("generator needs n >= 1");
  const std::size_t n = spec.n;
  std::vector<std::int64_t> keys(n);
  switch (spec.kind) {
    case GeneratorKind::UniformPermutation: {
      std::iota(keys.begin(), keys.end(), 1);
      std::mt19937_64 rng(spec.seed);
      shuffle(keys, rng);
      break;
    }
    case GeneratorKind::Sorted:
      std::iota(keys.begin(), keys.end(), 1);
      break;
    case GeneratorKind::Reversed:
      for (std::size_t p = 0; p < n; ++p) keys[p] = static_cast<std::int64_t>(n - p);
      break;
    case GeneratorKind::OrganPipe: {
      std::size_t o = 0;
      for (std::size_t v = 1; v <= n; v += 2) keys[o++] = static_cast<std::int64_t>(v);
      for (std::size_t v = n % 2 == 0 ? n : n - 1; v >= 2; v -= 2) {
        keys[o++] = static_cast<std::int64_t>(v);
      }
      break;
    }
    case GeneratorKind::FewDistinct: {
      if (spec.k == 0) throw std::invalid_argument("few needs k >= 1");
      std::mt19937_64 rng(spec.seed);
      for (auto& key : keys) key = 1 + static_cast<std::int64_t>(uniform_below(rng, spec.k));
      break;
    }
    case GeneratorKind::MedianKiller: {
      // Values 1..h are "low", h+1..n "high", with h = n - floor(n/3). Output
      // runs of (low, low, high): every full triple has a low median, so the
      // medians of groups of three crowd the bottom of the range. Leftover
      // lows or highs follow in increasing order. Not a proven worst case.
      const std::size_t h = n - n / 3;
      std::size_t lo = 1, hi = h + 1, o = 0;
      while (o < n) {
        for (int t = 0; t < 2 && lo <= h; ++t) keys[o++] = static_cast<std::int64_t>(lo++);
        if (hi <= n) keys[o++] = static_cast<std::int64_t>(hi++);
      }
      break;
    }
  }
  return keys;
}

inline Sequence<std::int64_t> generate(const GeneratorSpec& spec) {
  return make_sequence(generate_keys(spec));
}

/// All permutations of 1..n in lexicographic order, n in [1, 9].
class PermutationStream {
 public:
  explicit PermutationStream(std::size_t n) : current_(n) {
    if (n > 9) throw std::out_of_range("exhaustive domain too large");
    if (n == 0) throw std::invalid_argument("exhaustive domain needs n >= 1");
    std::iota(current_.begin(), current_.end(), 1);
  }

  /// The next permutation, or nothing once all n! have been produced.
  std::optional<std::vector<std::int64_t>> next() {
    if (done_) return std::nullopt;
    auto out = current_;
    done_ = !std::next_permutation(current_.begin(), current_.end());
    return out;
  }

 private:
  std::vector<std::int64_t> current_;
  bool done_ = false;
};

inline PermutationStream exhaustive_permutations(std::size_t n) { return PermutationStream(n); }

}  // namespace mmselect
