#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mmselect/element.hpp"

namespace mmselect {

/// Splits `s` into consecutive slices of `g` elements; the last slice holds
/// the remaining n mod g elements when g does not divide n.
template <typename Key>
std::vector<std::span<const Element<Key>>> form_groups(std::span<const Element<Key>> s,
                                                       std::size_t g) {
  if (g < 2) throw std::invalid_argument("group size must be at least 2");
  if (s.empty()) throw std::invalid_argument("empty input");
  std::vector<std::span<const Element<Key>>> groups;
  groups.reserve((s.size() + g - 1) / g);
  for (std::size_t b = 0; b < s.size(); b += g) {
    groups.push_back(s.subspan(b, std::min(g, s.size() - b)));
  }
  return groups;
}

namespace detail {

template <typename Key>
using Ref = const Element<Key>*;

template <typename Key>
std::pair<Ref<Key>, Ref<Key>> ordered(Ref<Key> a, Ref<Key> b, ComparisonCounter& c) {
  if (c.less(*a, *b)) return {a, b};
  return {b, a};
}

// Median of three, at most 3 comparisons.
template <typename Key>
Ref<Key> median3(Ref<Key> a, Ref<Key> b, Ref<Key> x, ComparisonCounter& c) {
  if (c.less(*a, *b)) {
    if (c.less(*b, *x)) return b;
    return c.less(*a, *x) ? x : a;
  }
  if (c.less(*a, *x)) return a;
  return c.less(*b, *x) ? x : b;
}

// Rank 2 (Lower) or rank 3 (Upper) of four, exactly 4 comparisons.
template <typename Key>
Ref<Key> median4(std::span<const Element<Key>> g, MedianPolicy policy, ComparisonCounter& c) {
  auto [lo1, hi1] = ordered<Key>(&g[0], &g[1], c);
  auto [lo2, hi2] = ordered<Key>(&g[2], &g[3], c);
  if (policy == MedianPolicy::Lower) {
    // The smaller of the two pair minima is the overall minimum; the second
    // smallest is its partner or the other pair's minimum.
    if (c.less(*lo1, *lo2)) return c.less(*hi1, *lo2) ? hi1 : lo2;
    return c.less(*hi2, *lo1) ? hi2 : lo1;
  }
  if (c.less(*hi1, *hi2)) return c.less(*hi1, *lo2) ? lo2 : hi1;
  return c.less(*hi2, *lo1) ? lo1 : hi2;
}

// Median of five, at most 6 comparisons.
template <typename Key>
Ref<Key> median5(std::span<const Element<Key>> g, ComparisonCounter& c) {
  auto [p_lo, p_hi] = ordered<Key>(&g[0], &g[1], c);
  auto [q_lo, q_hi] = ordered<Key>(&g[2], &g[3], c);
  // The smaller pair minimum lies below three elements, so it is below the
  // median; the median is then the second smallest of the other four.
  Ref<Key> x, y, u;
  if (c.less(*p_lo, *q_lo)) {
    x = q_lo, y = q_hi, u = p_hi;
  } else {
    x = p_lo, y = p_hi, u = q_hi;
  }
  auto [s, t] = ordered<Key>(u, &g[4], c);
  if (c.less(*x, *s)) return c.less(*y, *s) ? y : s;
  return c.less(*t, *x) ? t : x;
}

}  // namespace detail

/// Median of a group of at most five elements under `policy`, using at most
/// 0/1/3/4/6 comparisons for sizes 1/2/3/4/5.
template <typename Key>
Element<Key> group_median(std::span<const Element<Key>> group, MedianPolicy policy,
                          ComparisonCounter& counter) {
  switch (group.size()) {
    case 1:
      return group[0];
    case 2: {
      auto [lo, hi] = detail::ordered<Key>(&group[0], &group[1], counter);
      return policy == MedianPolicy::Lower ? *lo : *hi;
    }
    case 3:
      return *detail::median3<Key>(&group[0], &group[1], &group[2], counter);
    case 4:
      return *detail::median4<Key>(group, policy, counter);
    case 5:
      return *detail::median5<Key>(group, counter);
    case 0:
      throw std::invalid_argument("empty input");
    default:
      throw std::invalid_argument("group too large for small-median network");
  }
}

/// The sequence of group medians, one per group of `form_groups(s, g)`.
template <typename Key>
Sequence<Key> medians_of_groups(std::span<const Element<Key>> s, std::size_t g,
                                MedianPolicy policy, ComparisonCounter& counter) {
  Sequence<Key> out;
  out.reserve((s.size() + g - 1) / g);
  for (auto group : form_groups(s, g)) out.push_back(group_median(group, policy, counter));
  return out;
}

template <typename Key>
struct Partition {
  Sequence<Key> below;  // keys < pivot, input order
  Sequence<Key> above;  // keys > pivot, input order
};

/// Stable three-way split around `pivot`, which must be a member of `s`.
/// Costs exactly n - 1 comparisons.
template <typename Key>
Partition<Key> stable_partition(std::span<const Element<Key>> s, const Element<Key>& pivot,
                                ComparisonCounter& counter) {
  std::size_t at = s.size();
  for (std::size_t p = 0; p < s.size(); ++p) {
    if (s[p] == pivot) {
      at = p;
      break;
    }
  }
  if (at == s.size()) throw std::invalid_argument("pivot not in sequence");

  Partition<Key> out;
  for (std::size_t p = 0; p < s.size(); ++p) {
    if (p == at) continue;
    (counter.less(s[p], pivot) ? out.below : out.above).push_back(s[p]);
  }
  return out;
}

/// Straight insertion sort through the counter. Used for base cases.
template <typename Key>
void insertion_sort(std::span<Element<Key>> s, ComparisonCounter& counter) {
  for (std::size_t p = 1; p < s.size(); ++p) {
    Element<Key> v = s[p];
    std::size_t q = p;
    while (q > 0 && counter.less(v, s[q - 1])) {
      s[q] = s[q - 1];
      --q;
    }
    s[q] = v;
  }
}

/// Top-down merge sort through the counter. Its comparison count is fixed by
/// the input order alone, unlike library sorts.
template <typename Key>
void merge_sort(std::span<Element<Key>> s, ComparisonCounter& counter) {
  if (s.size() < 2) return;
  Sequence<Key> scratch(s.size());
  auto rec = [&](auto&& self, std::size_t lo, std::size_t hi) -> void {
    if (hi - lo < 2) return;
    std::size_t mid = lo + (hi - lo) / 2;
    self(self, lo, mid);
    self(self, mid, hi);
    std::size_t a = lo, b = mid, o = lo;
    while (a < mid && b < hi) scratch[o++] = counter.less(s[b], s[a]) ? s[b++] : s[a++];
    while (a < mid) scratch[o++] = s[a++];
    while (b < hi) scratch[o++] = s[b++];
    std::copy(scratch.begin() + lo, scratch.begin() + hi, s.begin() + lo);
  };
  rec(rec, 0, s.size());
}

}  // namespace mmselect
