#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmselect/element.hpp"
#include "mmselect/trace.hpp"

namespace mmselect {

// Discard guarantees
// ------------------
// For a median-of-medians pivot m, call an element of A "provably <= m" when
// the comparisons made while choosing m force it below or equal to m, no
// matter how the remaining comparisons turn out. The bounds here are the
// exact worst-case sizes of the provably-<= and provably->= sets, m included,
// computed with every floor and every short remainder group accounted for.
//
// They are computed layer by layer. Every element of a layer carries a pair
// (below, above): how many input elements it provably dominates from below
// and from above, itself included. Inputs carry (1, 1). A group of size s
// whose median has rank r under the pass policy yields a median carrying
//   below = sum of the r smallest `below` weights of the group,
//   above = sum of the s - r + 1 smallest `above` weights of the group,
// since the adversary decides which members fall on either side. The pivot,
// of rank ceil(L/2) in the final layer of size L, then provably dominates the
// ceil(L/2) smallest `below` weights and the L - ceil(L/2) + 1 smallest
// `above` weights.
//
// Each layer has the shape "c copies of one weight, then at most one tail
// weight" (all full groups look alike; the remainder group sits at the end),
// so the computation is O(number of passes).

struct GroupingPass {
  std::size_t group;
  MedianPolicy policy;
};

/// Provably-dominated counts around the pivot for one iteration shape.
struct DiscardBound {
  std::uint64_t at_most = 0;   // elements provably <= pivot, pivot included
  std::uint64_t at_least = 0;  // elements provably >= pivot, pivot included
};

namespace detail {

struct Weight {
  std::uint64_t below;
  std::uint64_t above;
};

struct Layer {
  std::uint64_t full_count = 0;
  Weight full{1, 1};
  std::optional<Weight> tail;

  std::uint64_t size() const { return full_count + (tail ? 1 : 0); }
};

// Sum of the k smallest values among `count` copies of `v` plus an optional `t`.
inline std::uint64_t smallest_sum(std::uint64_t k, std::uint64_t count, std::uint64_t v,
                                  std::optional<std::uint64_t> t) {
  if (!t) return k * v;
  if (k == 0) return 0;
  if (*t <= v) return *t + (k - 1) * v;
  if (k <= count) return k * v;
  return count * v + *t;
}

inline Weight group_weight(std::uint64_t copies, Weight full, std::optional<Weight> tail,
                           MedianPolicy policy) {
  const std::uint64_t s = copies + (tail ? 1 : 0);
  const std::uint64_t r = median_rank(s, policy);
  std::optional<std::uint64_t> tb, ta;
  if (tail) tb = tail->below, ta = tail->above;
  return {smallest_sum(r, copies, full.below, tb), smallest_sum(s - r + 1, copies, full.above, ta)};
}

inline Layer next_layer(const Layer& in, const GroupingPass& pass) {
  const std::uint64_t g = pass.group;
  const std::uint64_t total = in.size();
  Layer out;
  if (!in.tail) {
    out.full_count = in.full_count / g;
    out.full = group_weight(g, in.full, std::nullopt, pass.policy);
    if (const std::uint64_t r = in.full_count % g; r != 0) {
      out.tail = group_weight(r, in.full, std::nullopt, pass.policy);
    }
    return out;
  }
  // The tail item lands in the last group together with the last few full items.
  const std::uint64_t last = total % g == 0 ? g : total % g;
  out.full_count = (total - last) / g;
  out.full = group_weight(g, in.full, std::nullopt, pass.policy);
  out.tail = group_weight(last - 1, in.full, in.tail, pass.policy);
  return out;
}

}  // namespace detail

/// Discard bound for one iteration that groups n elements by `passes` and
/// takes the rank-ceil(L/2) element of the final layer as pivot.
inline DiscardBound discard_bound(std::uint64_t n, std::span<const GroupingPass> passes) {
  if (n == 0) throw std::invalid_argument("empty input");
  detail::Layer layer{n, {1, 1}, std::nullopt};
  for (const auto& p : passes) layer = detail::next_layer(layer, p);
  const std::uint64_t size = layer.size();
  const std::uint64_t k = (size + 1) / 2;
  std::optional<std::uint64_t> tb, ta;
  if (layer.tail) tb = layer.tail->below, ta = layer.tail->above;
  return {detail::smallest_sum(k, layer.full_count, layer.full.below, tb),
          detail::smallest_sum(size - k + 1, layer.full_count, layer.full.above, ta)};
}

/// The grouping passes an event's iteration performed, or nothing when the
/// algorithm has no registered bound (oracle, quickselect).
inline std::optional<std::vector<GroupingPass>> registered_passes(const TraceEvent& e) {
  using P = MedianPolicy;
  const auto& a = e.algorithm;
  switch (a.kind) {
    case AlgorithmKind::Classic: return std::vector<GroupingPass>{{a.group, a.policy}};
    case AlgorithmKind::RepeatedStep3: return std::vector<GroupingPass>{{3, P::Lower}, {3, P::Lower}};
    case AlgorithmKind::RepeatedStep4: return std::vector<GroupingPass>{{4, P::Lower}, {4, P::Lower}};
    case AlgorithmKind::Hybrid4: return std::vector<GroupingPass>{{4, P::Lower}, {4, P::Upper}};
    case AlgorithmKind::ShiftingTarget4:
      if (!e.policy_used) return std::nullopt;
      return std::vector<GroupingPass>{{4, *e.policy_used}};
    default: return std::nullopt;
  }
}

/// Bound registered for the algorithm and iteration shape of `e`.
inline DiscardBound registered_bound(const TraceEvent& e) {
  auto passes = registered_passes(e);
  if (!passes) throw std::invalid_argument("no bound registered");
  return discard_bound(e.n, *passes);
}

struct CheckResult {
  bool pass = true;
  std::string explanation;

  explicit operator bool() const { return pass; }
  static CheckResult ok() { return {}; }
  static CheckResult fail(std::string why) { return {false, std::move(why)}; }
};

inline std::string describe(const TraceEvent& e) {
  std::ostringstream os;
  os << e.algorithm.name() << " iter " << e.iteration_index << " (n=" << e.n << ", i=" << e.i
     << ", pivot_rank=" << e.pivot_rank << ", a1=" << e.size_a1 << ", a2=" << e.size_a2 << ")";
  return os.str();
}

inline CheckResult check_structure(const TraceEvent& e) {
  if (e.size_a1 + e.size_a2 + 1 != e.n) {
    return CheckResult::fail(describe(e) + ": a1 + a2 + 1 != n");
  }
  if (e.pivot_rank != e.size_a1 + 1) {
    return CheckResult::fail(describe(e) + ": pivot_rank != a1 + 1");
  }
  if (e.i < 1 || e.i > e.n) return CheckResult::fail(describe(e) + ": i outside [1, n]");
  return CheckResult::ok();
}

/// Two-sided discard guarantee: pivot plus A1 must reach the provably-<=
/// count, pivot plus A2 the provably->= count.
inline CheckResult check_two_sided_bound(const TraceEvent& e, const DiscardBound& b) {
  if (auto s = check_structure(e); !s) return s;
  if (e.size_a1 + 1 < b.at_most) {
    return CheckResult::fail(describe(e) + ": a1 + 1 < " + std::to_string(b.at_most));
  }
  if (e.size_a2 + 1 < b.at_least) {
    return CheckResult::fail(describe(e) + ": a2 + 1 < " + std::to_string(b.at_least));
  }
  return CheckResult::ok();
}

inline CheckResult check_two_sided_bound(const TraceEvent& e) {
  return check_two_sided_bound(e, registered_bound(e));
}

// Shifting-target rank drift
// --------------------------
// Measure the target from the side the iteration's policy favours: j = i under
// Lower, j = n + 1 - i under Upper. Lower is chosen iff 2i <= n, so j never
// exceeds J = floor(n/2) (Lower) or ceil(n/2) (Upper). When the iteration
// keeps the far side, it discards t >= f elements on the near side, with f the
// near-side bound, and
//     j'/n' = (j - t)/(n - t) <= (J - f)/(n - f) =: B1.
// B1 is 1/3 when f = n/4 exactly; the floor slack is B1 - 1/3. The successor
// has j' <= floor(B1 n') <= n'/2, so it uses the same policy, and if it again
// keeps the far side with t' >= f' then
//     j''/n'' <= (floor(B1 n') - f')/(n' - f') =: B2,
// which is 1/9 when every division is exact.

/// Exact rational a/b with b > 0.
struct Ratio {
  std::uint64_t num;
  std::uint64_t den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

namespace detail {

inline std::uint64_t near_rank(const TraceEvent& e) {
  return *e.policy_used == MedianPolicy::Lower ? e.i : e.n + 1 - e.i;
}

// Whether the iteration discarded the side nearer its target.
inline bool kept_far_side(const TraceEvent& e) {
  return *e.policy_used == MedianPolicy::Lower ? e.pivot_rank < e.i : e.pivot_rank > e.i;
}

inline std::uint64_t near_bound(const TraceEvent& e) {
  auto b = discard_bound(e.n, std::vector<GroupingPass>{{4, *e.policy_used}});
  return *e.policy_used == MedianPolicy::Lower ? b.at_most : b.at_least;
}

inline std::uint64_t far_bound(const TraceEvent& e) {
  auto b = discard_bound(e.n, std::vector<GroupingPass>{{4, *e.policy_used}});
  return *e.policy_used == MedianPolicy::Lower ? b.at_least : b.at_most;
}

// Next (n, i) implied by an event that did not terminate.
inline std::pair<std::size_t, std::size_t> successor_state(const TraceEvent& e) {
  if (e.pivot_rank > e.i) return {e.size_a1, e.i};
  return {e.size_a2, e.i - e.pivot_rank};
}

}  // namespace detail

/// First drift bound B1 for an iteration of size n (see above).
inline Ratio drift_bound_first(const TraceEvent& e) {
  const std::uint64_t f = detail::near_bound(e);
  const std::uint64_t cap = *e.policy_used == MedianPolicy::Lower ? e.n / 2 : (e.n + 1) / 2;
  const std::uint64_t num = cap > f ? cap - f : 0;
  return {num, e.n - std::min<std::uint64_t>(f, e.n - 1)};
}

/// Second drift bound B2 given B1 and the successor iteration.
inline Ratio drift_bound_second(const Ratio& b1, const TraceEvent& next) {
  const std::uint64_t f = detail::near_bound(next);
  const std::uint64_t cap = b1.num * next.n / b1.den;
  const std::uint64_t num = cap > f ? cap - f : 0;
  return {num, next.n - std::min<std::uint64_t>(f, next.n - 1)};
}

/// Outer-quartile discard rule: when the near-side rank j satisfies 4j <= n,
/// the iteration either finds the target or discards the far side, at least
/// the far-side bound (3n/8 when exact). The pivot provably has rank at least
/// floor(n/4) from the near side, so it can never fall short of the target.
inline CheckResult check_outer_quartile(const TraceEvent& e) {
  if (e.algorithm.kind != AlgorithmKind::ShiftingTarget4 || !e.policy_used) {
    return CheckResult::fail(describe(e) + ": not a shifting-target event");
  }
  if (4 * detail::near_rank(e) > e.n || e.pivot_rank == e.i) return CheckResult::ok();
  if (detail::kept_far_side(e)) {
    return CheckResult::fail(describe(e) + ": outer-quartile iteration discarded the near side");
  }
  const std::uint64_t discarded = e.pivot_rank > e.i ? e.size_a2 + 1 : e.size_a1 + 1;
  if (discarded < detail::far_bound(e)) {
    return CheckResult::fail(describe(e) + ": outer-quartile discard " +
                             std::to_string(discarded) + " < " +
                             std::to_string(detail::far_bound(e)));
  }
  return CheckResult::ok();
}

/// Checks the shifting-target policy rule and the two drift bounds over the
/// consecutive outer iterations of one run.
inline CheckResult check_shifting_target_drift(std::span<const TraceEvent> events) {
  for (std::size_t k = 0; k < events.size(); ++k) {
    const auto& e = events[k];
    if (e.algorithm.kind != AlgorithmKind::ShiftingTarget4 || !e.policy_used) {
      throw std::invalid_argument("events are not from shifting4");
    }
    if (e.iteration_index != events[0].iteration_index + k) {
      throw std::invalid_argument("events are not consecutive");
    }
    if (k > 0) {
      const auto& prev = events[k - 1];
      if (prev.pivot_rank == prev.i || detail::successor_state(prev) != std::pair{e.n, e.i}) {
        throw std::invalid_argument("events are not consecutive");
      }
    }
    const MedianPolicy expected = 2 * e.i <= e.n ? MedianPolicy::Lower : MedianPolicy::Upper;
    if (*e.policy_used != expected) {
      return CheckResult::fail(describe(e) + ": policy does not follow the i <= n/2 rule");
    }
  }

  for (std::size_t k = 0; k + 1 < events.size(); ++k) {
    const auto& e = events[k];
    const std::uint64_t j = detail::near_rank(e);
    if (4 * j <= e.n || !detail::kept_far_side(e)) continue;  // not the middle regime
    const auto& e1 = events[k + 1];
    const Ratio b1 = drift_bound_first(e);
    if (e1.policy_used != e.policy_used) {
      return CheckResult::fail(describe(e1) + ": successor switched policy");
    }
    const std::uint64_t j1 = detail::near_rank(e1);
    if (j1 * b1.den > b1.num * e1.n) {
      std::ostringstream os;
      os << describe(e1) << ": drift " << j1 << "/" << e1.n << " exceeds " << b1.num << "/"
         << b1.den;
      return CheckResult::fail(os.str());
    }
    if (k + 2 >= events.size() || !detail::kept_far_side(e1)) continue;
    const auto& e2 = events[k + 2];
    const Ratio b2 = drift_bound_second(b1, e1);
    const std::uint64_t j2 = *e.policy_used == MedianPolicy::Lower ? e2.i : e2.n + 1 - e2.i;
    if (j2 * b2.den > b2.num * e2.n) {
      std::ostringstream os;
      os << describe(e2) << ": second drift " << j2 << "/" << e2.n << " exceeds " << b2.num
         << "/" << b2.den;
      return CheckResult::fail(os.str());
    }
  }
  return CheckResult::ok();
}

/// Total comparisons divided by the original input size.
template <typename Key>
double comparisons_per_element(const RunReport<Key>& r) {
  return r.n == 0 ? 0.0 : static_cast<double>(r.total_comparisons) / static_cast<double>(r.n);
}

/// Every trace invariant for one completed run. Returns the first violation.
template <typename Key>
CheckResult check_run(const RunReport<Key>& r) {
  std::uint64_t delta_sum = r.base_case_comparisons;
  std::size_t discarded_below = 0;
  std::size_t prev_n = r.n + 1;
  for (std::size_t k = 0; k < r.iterations.size(); ++k) {
    const auto& e = r.iterations[k];
    if (auto s = check_structure(e); !s) return s;
    if (e.iteration_index != k) return CheckResult::fail(describe(e) + ": iteration index gap");
    if (e.n >= prev_n) return CheckResult::fail(describe(e) + ": subproblem did not shrink");
    if (discarded_below + e.i != r.i) {
      return CheckResult::fail(describe(e) + ": rank not conserved");
    }
    if (registered_passes(e)) {
      if (auto b = check_two_sided_bound(e); !b) return b;
    }
    if (e.algorithm.kind == AlgorithmKind::ShiftingTarget4) {
      if (auto q = check_outer_quartile(e); !q) return q;
    }
    if (e.pivot_rank < e.i) discarded_below += e.pivot_rank;
    prev_n = e.n;
    delta_sum += e.comparisons_delta;
  }
  if (r.algorithm.kind == AlgorithmKind::ShiftingTarget4 && !r.iterations.empty()) {
    if (auto d = check_shifting_target_drift(r.iterations); !d) return d;
  }
  if (delta_sum != r.total_comparisons) {
    return CheckResult::fail(r.algorithm.name() + ": comparison deltas do not sum to total");
  }
  return CheckResult::ok();
}

}  // namespace mmselect
