#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mmselect/element.hpp"
#include "mmselect/primitives.hpp"
#include "mmselect/random.hpp"
#include "mmselect/trace.hpp"

namespace mmselect {

/// A sequence and a 1-indexed target rank.
template <typename Key>
struct SelectionRequest {
  Sequence<Key> sequence;
  std::size_t i = 1;
};

/// Per-run mutable state shared by the outer loop and the pivot recursion.
struct SelectContext {
  ComparisonCounter& counter;
  std::vector<TraceEvent>* trace = nullptr;  // outer iterations only
  std::uint64_t base_case_comparisons = 0;
  std::size_t max_depth = 0;
};

namespace detail {

inline void check_rank(std::size_t n, std::size_t i) {
  if (n == 0) throw std::invalid_argument("empty input");
  if (i < 1 || i > n) throw std::out_of_range("rank out of bounds");
}

constexpr std::size_t upper_half(std::size_t n) { return (n + 1) / 2; }

// A grouping-and-medians pass.
struct Pass {
  std::size_t group;
  MedianPolicy policy;
};

// Describes how one algorithm picks its pivot from the current sequence.
struct PivotPlan {
  std::size_t base_case_max;  // sort when n <= base_case_max
  Pass passes[2];
  std::size_t pass_count;
  std::optional<MedianPolicy> policy_used;
};

inline PivotPlan plan_for(const AlgorithmId& algo, std::size_t n, std::size_t i) {
  using P = MedianPolicy;
  switch (algo.kind) {
    case AlgorithmKind::Classic: {
      std::optional<P> used;
      if (algo.group % 2 == 0) used = algo.policy;
      return {algo.group, {{algo.group, algo.policy}, {}}, 1, used};
    }
    case AlgorithmKind::RepeatedStep3:
      // Two passes need at least g*g elements to be meaningful.
      return {8, {{3, P::Lower}, {3, P::Lower}}, 2, std::nullopt};
    case AlgorithmKind::RepeatedStep4:
      return {15, {{4, P::Lower}, {4, P::Lower}}, 2, P::Lower};
    case AlgorithmKind::Hybrid4:
      return {15, {{4, P::Lower}, {4, P::Upper}}, 2, std::nullopt};
    case AlgorithmKind::ShiftingTarget4: {
      P p = 2 * i <= n ? P::Lower : P::Upper;
      return {4, {{4, p}, {}}, 1, p};
    }
    default:
      throw std::logic_error("no pivot plan for " + algo.name());
  }
}

template <typename Key>
Element<Key> sort_and_pick(Sequence<Key>& a, std::size_t i, SelectContext& ctx, bool top) {
  std::uint64_t before = ctx.counter.count();
  insertion_sort(std::span<Element<Key>>(a), ctx.counter);
  if (top) ctx.base_case_comparisons += ctx.counter.count() - before;
  return a[i - 1];
}

// Records the iteration and narrows `a`/`i` to the side holding the target.
// Returns true when the pivot itself is the answer.
template <typename Key>
bool partition_step(Sequence<Key>& a, std::size_t& i, const Element<Key>& pivot,
                    SelectContext& ctx, bool top, std::size_t iteration, const AlgorithmId& algo,
                    std::optional<MedianPolicy> policy, std::uint64_t before) {
  const std::size_t n = a.size();
  auto parts = stable_partition(std::span<const Element<Key>>(a), pivot, ctx.counter);
  const std::size_t below = parts.below.size();
  if (top && ctx.trace) {
    ctx.trace->push_back({iteration, n, i, algo, policy, below + 1, below, parts.above.size(),
                          ctx.counter.count() - before});
  }
  if (below == i - 1) return true;
  if (below > i - 1) {
    a = std::move(parts.below);
  } else {
    i -= below + 1;
    a = std::move(parts.above);
  }
  return false;
}

// Median-of-medians family: Classic, RepeatedStep*, ShiftingTarget4, Hybrid4.
template <typename Key>
Element<Key> grouped_select(const AlgorithmId& algo, Sequence<Key> a, std::size_t i,
                            SelectContext& ctx, std::size_t depth, bool top) {
  ctx.max_depth = std::max(ctx.max_depth, depth);
  for (std::size_t iteration = 0;; ++iteration) {
    const std::size_t n = a.size();
    const PivotPlan plan = plan_for(algo, n, i);
    if (n <= plan.base_case_max) return sort_and_pick(a, i, ctx, top);

    const std::uint64_t before = ctx.counter.count();
    Sequence<Key> medians = medians_of_groups(std::span<const Element<Key>>(a),
                                              plan.passes[0].group, plan.passes[0].policy,
                                              ctx.counter);
    for (std::size_t p = 1; p < plan.pass_count; ++p) {
      medians = medians_of_groups(std::span<const Element<Key>>(medians), plan.passes[p].group,
                                  plan.passes[p].policy, ctx.counter);
    }
    if (medians.size() >= n) throw std::logic_error("pivot recursion did not shrink");
    const std::size_t target = upper_half(medians.size());
    const Element<Key> pivot =
        grouped_select(algo, std::move(medians), target, ctx, depth + 1, false);

    if (partition_step(a, i, pivot, ctx, top, iteration, algo, plan.policy_used, before)) {
      return pivot;
    }
  }
}

template <typename Key>
Element<Key> quickselect_loop(const AlgorithmId& algo, Sequence<Key> a, std::size_t i,
                              SelectContext& ctx) {
  std::mt19937_64 rng(algo.seed);
  for (std::size_t iteration = 0;; ++iteration) {
    if (a.size() == 1) return a[0];
    const std::uint64_t before = ctx.counter.count();
    const Element<Key> pivot = a[uniform_below(rng, a.size())];
    if (partition_step(a, i, pivot, ctx, true, iteration, algo, std::nullopt, before)) {
      return pivot;
    }
  }
}

}  // namespace detail

/// Runs `algo` on the request, appending one TraceEvent per outer iteration
/// to `ctx.trace` when set.
template <typename Key>
Element<Key> select(const AlgorithmId& algo, SelectionRequest<Key> req, SelectContext& ctx) {
  detail::check_rank(req.sequence.size(), req.i);
  switch (algo.kind) {
    case AlgorithmKind::SortingOracle: {
      std::uint64_t before = ctx.counter.count();
      merge_sort(std::span<Element<Key>>(req.sequence), ctx.counter);
      ctx.base_case_comparisons += ctx.counter.count() - before;
      return req.sequence[req.i - 1];
    }
    case AlgorithmKind::RandomizedQuickselect:
      return detail::quickselect_loop(algo, std::move(req.sequence), req.i, ctx);
    default:
      return detail::grouped_select(algo, std::move(req.sequence), req.i, ctx, 0, true);
  }
}

/// Runs `algo` with a fresh counter and returns the full report.
/// `flip_at` injects a comparison fault (see ComparisonCounter::flip_at).
template <typename Key>
RunReport<Key> run(const AlgorithmId& algo, Sequence<Key> sequence, std::size_t i,
                   std::optional<std::uint64_t> flip_at = std::nullopt) {
  RunReport<Key> report;
  report.algorithm = algo;
  report.n = sequence.size();
  report.i = i;
  ComparisonCounter counter;
  counter.flip_at(flip_at);
  SelectContext ctx{counter, &report.iterations};
  auto start = std::chrono::steady_clock::now();
  report.result = select(algo, SelectionRequest<Key>{std::move(sequence), i}, ctx);
  report.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  report.total_comparisons = counter.count();
  report.base_case_comparisons = ctx.base_case_comparisons;
  report.max_depth = ctx.max_depth;
  return report;
}

// Named entry points. Each returns the element of rank `req.i`.

template <typename Key>
Element<Key> classic_select(SelectionRequest<Key> req, std::size_t g, MedianPolicy policy,
                            SelectContext& ctx) {
  if (g < 3 || g > 5) throw std::invalid_argument("group size must be 3, 4 or 5");
  return select(AlgorithmId::classic(g, policy), std::move(req), ctx);
}

template <typename Key>
Element<Key> repeated_step_select_3(SelectionRequest<Key> req, SelectContext& ctx) {
  return select(AlgorithmId::repeated_step3(), std::move(req), ctx);
}

template <typename Key>
Element<Key> repeated_step_select_4(SelectionRequest<Key> req, SelectContext& ctx) {
  return select(AlgorithmId::repeated_step4(), std::move(req), ctx);
}

template <typename Key>
Element<Key> shifting_target_select_4(SelectionRequest<Key> req, SelectContext& ctx) {
  return select(AlgorithmId::shifting_target4(), std::move(req), ctx);
}

template <typename Key>
Element<Key> hybrid_select_4(SelectionRequest<Key> req, SelectContext& ctx) {
  return select(AlgorithmId::hybrid4(), std::move(req), ctx);
}

/// Ground truth: sorts a copy by (key, origin) and indexes it. Uncounted.
template <typename Key>
Element<Key> sorting_oracle_select(SelectionRequest<Key> req) {
  detail::check_rank(req.sequence.size(), req.i);
  std::sort(req.sequence.begin(), req.sequence.end(), ElementLess{});
  return req.sequence[req.i - 1];
}

template <typename Key>
Element<Key> randomized_quickselect(SelectionRequest<Key> req, std::uint64_t seed,
                                    SelectContext& ctx) {
  return select(AlgorithmId::quickselect(seed), std::move(req), ctx);
}

}  // namespace mmselect
