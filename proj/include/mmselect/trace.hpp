#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "json.hpp"
#include "mmselect/element.hpp"

namespace mmselect {

enum class AlgorithmKind {
  Classic,
  RepeatedStep3,
  RepeatedStep4,
  ShiftingTarget4,
  Hybrid4,
  SortingOracle,
  RandomizedQuickselect,
};

/// Names one selection algorithm, including its parameters.
struct AlgorithmId {
  AlgorithmKind kind = AlgorithmKind::Classic;
  std::size_t group = 5;                       // Classic only
  MedianPolicy policy = MedianPolicy::Lower;   // Classic only
  std::uint64_t seed = 0;                      // RandomizedQuickselect only

  static constexpr AlgorithmId classic(std::size_t g, MedianPolicy p = MedianPolicy::Lower) {
    return {AlgorithmKind::Classic, g, p, 0};
  }
  static constexpr AlgorithmId repeated_step3() { return {AlgorithmKind::RepeatedStep3, 3}; }
  static constexpr AlgorithmId repeated_step4() { return {AlgorithmKind::RepeatedStep4, 4}; }
  static constexpr AlgorithmId shifting_target4() { return {AlgorithmKind::ShiftingTarget4, 4}; }
  static constexpr AlgorithmId hybrid4() { return {AlgorithmKind::Hybrid4, 4}; }
  static constexpr AlgorithmId sorting_oracle() { return {AlgorithmKind::SortingOracle, 0}; }
  static constexpr AlgorithmId quickselect(std::uint64_t seed) {
    return {AlgorithmKind::RandomizedQuickselect, 0, MedianPolicy::Lower, seed};
  }

  friend bool operator==(const AlgorithmId&, const AlgorithmId&) = default;

  /// Stable short name used by the CLI and all CSV/JSON output. The
  /// quickselect seed is not part of the name.
  std::string name() const {
    switch (kind) {
      case AlgorithmKind::Classic:
        return "classic" + std::to_string(group) + (policy == MedianPolicy::Upper ? "u" : "");
      case AlgorithmKind::RepeatedStep3: return "repeated3";
      case AlgorithmKind::RepeatedStep4: return "repeated4";
      case AlgorithmKind::ShiftingTarget4: return "shifting4";
      case AlgorithmKind::Hybrid4: return "hybrid4";
      case AlgorithmKind::SortingOracle: return "oracle";
      case AlgorithmKind::RandomizedQuickselect: return "quickselect";
    }
    return "?";
  }

  static AlgorithmId parse(std::string_view s, std::uint64_t seed = 0) {
    if (s == "repeated3") return repeated_step3();
    if (s == "repeated4") return repeated_step4();
    if (s == "shifting4") return shifting_target4();
    if (s == "hybrid4") return hybrid4();
    if (s == "oracle") return sorting_oracle();
    if (s == "quickselect") return quickselect(seed);
    if (s.size() >= 8 && s.substr(0, 7) == "classic") {
      char g = s[7];
      auto rest = s.substr(8);
      if ((g == '3' || g == '4' || g == '5') && (rest.empty() || rest == "u")) {
        return classic(static_cast<std::size_t>(g - '0'),
                       rest.empty() ? MedianPolicy::Lower : MedianPolicy::Upper);
      }
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(s) + "'");
  }
};

/// Every algorithm variant the library provides, in canonical order.
inline std::vector<AlgorithmId> all_algorithms(std::uint64_t quickselect_seed = 0) {
  using P = MedianPolicy;
  return {AlgorithmId::classic(3, P::Lower), AlgorithmId::classic(3, P::Upper),
          AlgorithmId::classic(4, P::Lower), AlgorithmId::classic(4, P::Upper),
          AlgorithmId::classic(5, P::Lower), AlgorithmId::classic(5, P::Upper),
          AlgorithmId::repeated_step3(),     AlgorithmId::repeated_step4(),
          AlgorithmId::shifting_target4(),   AlgorithmId::hybrid4(),
          AlgorithmId::quickselect(quickselect_seed), AlgorithmId::sorting_oracle()};
}

/// One partition iteration of the outer recursion.
///
/// `comparisons_delta` covers everything the iteration spent: median passes,
/// the pivot-finding recursion and the partition itself.
struct TraceEvent {
  std::size_t iteration_index = 0;
  std::size_t n = 0;
  std::size_t i = 0;
  AlgorithmId algorithm;
  std::optional<MedianPolicy> policy_used;
  std::size_t pivot_rank = 0;
  std::size_t size_a1 = 0;
  std::size_t size_a2 = 0;
  std::uint64_t comparisons_delta = 0;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

template <typename Key>
struct RunReport {
  AlgorithmId algorithm;
  std::size_t n = 0;  // original input size
  std::size_t i = 0;  // original target rank
  Element<Key> result;
  std::uint64_t total_comparisons = 0;
  // Comparisons of the terminal base-case sort (outside any TraceEvent).
  std::uint64_t base_case_comparisons = 0;
  std::size_t max_depth = 0;
  std::vector<TraceEvent> iterations;
  std::chrono::nanoseconds wall_time{0};  // informational
};

inline std::string policy_name(const std::optional<MedianPolicy>& p) {
  return p ? std::string(to_string(*p)) : std::string("none");
}

inline const char* trace_csv_header() { return "iter,n,i,algo,policy,pivot_rank,a1,a2,cmp_delta"; }

inline void write_trace_csv(std::ostream& os, const std::vector<TraceEvent>& events) {
  os << trace_csv_header() << '\n';
  for (const auto& e : events) {
    os << e.iteration_index << ',' << e.n << ',' << e.i << ',' << e.algorithm.name() << ','
       << policy_name(e.policy_used) << ',' << e.pivot_rank << ',' << e.size_a1 << ','
       << e.size_a2 << ',' << e.comparisons_delta << '\n';
  }
}

inline nlohmann::json to_json(const TraceEvent& e) {
  return {{"iter", e.iteration_index}, {"n", e.n},
          {"i", e.i},                  {"algo", e.algorithm.name()},
          {"policy", policy_name(e.policy_used)},
          {"pivot_rank", e.pivot_rank}, {"a1", e.size_a1},
          {"a2", e.size_a2},           {"cmp_delta", e.comparisons_delta}};
}

template <typename Key>
nlohmann::json to_json(const RunReport<Key>& r) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : r.iterations) events.push_back(to_json(e));
  nlohmann::json key;
  if constexpr (std::is_floating_point_v<Key>) {
    key = static_cast<double>(r.result.key);
  } else {
    key = r.result.key;
  }
  return {{"algo", r.algorithm.name()},
          {"n", r.n},
          {"i", r.i},
          {"result", key},
          {"result_origin", r.result.origin},
          {"total_comparisons", r.total_comparisons},
          {"base_case_comparisons", r.base_case_comparisons},
          {"max_depth", r.max_depth},
          {"wall_time_ns", r.wall_time.count()},
          {"iterations", std::move(events)}};
}

}  // namespace mmselect
