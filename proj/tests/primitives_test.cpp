#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mmselect/generators.hpp"
#include "mmselect/primitives.hpp"

using namespace mmselect;

namespace {

using Seq = Sequence<std::int64_t>;
using Span = std::span<const Element<std::int64_t>>;

std::vector<std::int64_t> keys_of(const Seq& s) {
  std::vector<std::int64_t> out;
  for (const auto& e : s) out.push_back(e.key);
  return out;
}

Seq seq(std::vector<std::int64_t> keys) { return make_sequence(keys); }

std::int64_t median_key(std::vector<std::int64_t> keys, MedianPolicy p, std::uint64_t* cmps) {
  auto s = seq(keys);
  ComparisonCounter c;
  auto m = group_median(Span(s), p, c);
  if (cmps) *cmps = c.count();
  return m.key;
}

}  // namespace

TEST(FormGroups, ExactDivision) {
  auto s = seq({1, 2, 3, 4, 5, 6, 7, 8, 9});
  auto g = form_groups(Span(s), 3);
  ASSERT_EQ(g.size(), 3u);
  for (auto& grp : g) EXPECT_EQ(grp.size(), 3u);
}

TEST(FormGroups, RemainderGroupKeepsShortSize) {
  auto s = seq({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  auto g = form_groups(Span(s), 4);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].size(), 4u);
  EXPECT_EQ(g[1].size(), 4u);
  EXPECT_EQ(g[2].size(), 2u);
  EXPECT_EQ(g[2][0].key, 9);
}

TEST(FormGroups, SingleShortGroup) {
  auto s = seq({7, 8});
  auto g = form_groups(Span(s), 5);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].size(), 2u);
}

TEST(FormGroups, EmptyInputIsAnError) {
  Seq s;
  EXPECT_THROW(
      {
        try {
          form_groups(Span(s), 3);
        } catch (const std::invalid_argument& e) {
          EXPECT_STREQ(e.what(), "empty input");
          throw;
        }
      },
      std::invalid_argument);
}

TEST(FormGroups, ConcatenationEqualsInput) {
  for (std::size_t n = 1; n <= 40; ++n) {
    for (std::size_t g : {3u, 4u, 5u}) {
      auto s = generate({GeneratorKind::UniformPermutation, n, n});
      Seq joined;
      for (auto grp : form_groups(Span(s), g)) joined.insert(joined.end(), grp.begin(), grp.end());
      EXPECT_EQ(joined, s);
    }
  }
}

TEST(GroupMedian, ThreeElements) {
  std::uint64_t c = 0;
  EXPECT_EQ(median_key({3, 1, 2}, MedianPolicy::Lower, &c), 2);
  EXPECT_LE(c, 3u);
  EXPECT_EQ(median_key({3, 1, 2}, MedianPolicy::Upper, &c), 2);
}

TEST(GroupMedian, FiveElements) {
  std::uint64_t c = 0;
  EXPECT_EQ(median_key({9, 7, 8, 5, 6}, MedianPolicy::Lower, &c), 7);
  EXPECT_LE(c, 6u);
  EXPECT_EQ(median_key({9, 7, 8, 5, 6}, MedianPolicy::Upper, &c), 7);
  EXPECT_LE(c, 6u);
}

TEST(GroupMedian, FourElementsFollowPolicy) {
  EXPECT_EQ(median_key({4, 8, 2, 6}, MedianPolicy::Lower, nullptr), 4);
  EXPECT_EQ(median_key({4, 8, 2, 6}, MedianPolicy::Upper, nullptr), 6);
}

TEST(GroupMedian, SingletonCostsNothing) {
  std::uint64_t c = 99;
  EXPECT_EQ(median_key({5}, MedianPolicy::Lower, &c), 5);
  EXPECT_EQ(c, 0u);
}

TEST(GroupMedian, PairFollowsPolicy) {
  std::uint64_t c = 0;
  EXPECT_EQ(median_key({9, 4}, MedianPolicy::Lower, &c), 4);
  EXPECT_EQ(c, 1u);
  EXPECT_EQ(median_key({9, 4}, MedianPolicy::Upper, &c), 9);
}

TEST(GroupMedian, TooLargeGroup) {
  auto s = seq({1, 2, 3, 4, 5, 6});
  ComparisonCounter c;
  try {
    group_median(Span(s), MedianPolicy::Lower, c);
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "group too large for small-median network");
  }
}

// Every ordering of sizes 1..5 under both policies: correct rank, within budget.
TEST(GroupMedian, AllOrderingsWithinBudget) {
  const std::uint64_t budget[] = {0, 0, 1, 3, 4, 6};
  for (std::size_t k = 1; k <= 5; ++k) {
    for (auto p : {MedianPolicy::Lower, MedianPolicy::Upper}) {
      auto perms = exhaustive_permutations(k);
      while (auto keys = perms.next()) {
        std::uint64_t c = 0;
        auto got = median_key(*keys, p, &c);
        EXPECT_EQ(got, static_cast<std::int64_t>(median_rank(k, p)));
        EXPECT_LE(c, budget[k]);
      }
    }
  }
}

TEST(GroupMedian, DuplicateKeysUseOriginOrder) {
  // Keys all equal: order is by origin, so the median is the middle origin.
  auto s = seq({7, 7, 7});
  ComparisonCounter c;
  EXPECT_EQ(group_median(Span(s), MedianPolicy::Lower, c).origin, 1u);
}

TEST(MediansOfGroups, Triples) {
  auto s = seq({3, 1, 2, 9, 7, 8, 4, 6, 5});
  ComparisonCounter c;
  EXPECT_EQ(keys_of(medians_of_groups(Span(s), 3, MedianPolicy::Lower, c)),
            (std::vector<std::int64_t>{2, 8, 5}));
}

TEST(MediansOfGroups, QuadsByPolicy) {
  auto s = seq({1, 2, 3, 4, 5, 6, 7, 8});
  ComparisonCounter c;
  EXPECT_EQ(keys_of(medians_of_groups(Span(s), 4, MedianPolicy::Lower, c)),
            (std::vector<std::int64_t>{2, 6}));
  EXPECT_EQ(keys_of(medians_of_groups(Span(s), 4, MedianPolicy::Upper, c)),
            (std::vector<std::int64_t>{3, 7}));
}

TEST(MediansOfGroups, SeededQuadsMatchSortEachGroup) {
  std::mt19937_64 rng(2024);
  std::vector<std::int64_t> keys;
  while (keys.size() < 16) {
    auto k = static_cast<std::int64_t>(rng() % 1000);
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  auto s = seq(keys);
  ComparisonCounter c;
  auto got = keys_of(medians_of_groups(Span(s), 4, MedianPolicy::Lower, c));

  std::vector<std::int64_t> expected;
  for (std::size_t b = 0; b < 16; b += 4) {
    std::vector<std::int64_t> grp(keys.begin() + b, keys.begin() + b + 4);
    std::sort(grp.begin(), grp.end());
    expected.push_back(grp[1]);
  }
  EXPECT_EQ(got, expected);
}

TEST(MediansOfGroups, OutputLengthIsCeiling) {
  for (std::size_t n = 1; n <= 100; ++n) {
    auto s = generate({GeneratorKind::UniformPermutation, n, 5});
    for (std::size_t g : {3u, 4u, 5u}) {
      ComparisonCounter c;
      EXPECT_EQ(medians_of_groups(Span(s), g, MedianPolicy::Upper, c).size(), (n + g - 1) / g);
    }
  }
}

TEST(StablePartition, SmallExample) {
  auto s = seq({5, 2, 8, 6, 1});
  ComparisonCounter c;
  auto parts = stable_partition(Span(s), s[0], c);
  EXPECT_EQ(keys_of(parts.below), (std::vector<std::int64_t>{2, 1}));
  EXPECT_EQ(keys_of(parts.above), (std::vector<std::int64_t>{8, 6}));
  EXPECT_EQ(c.count(), 4u);
}

TEST(StablePartition, Singleton) {
  auto s = seq({1});
  ComparisonCounter c;
  auto parts = stable_partition(Span(s), s[0], c);
  EXPECT_TRUE(parts.below.empty());
  EXPECT_TRUE(parts.above.empty());
  EXPECT_EQ(c.count(), 0u);
}

TEST(StablePartition, PivotMustBePresent) {
  auto s = seq({1, 2, 3});
  ComparisonCounter c;
  Element<std::int64_t> stranger{2, 17};
  try {
    stable_partition(Span(s), stranger, c);
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "pivot not in sequence");
  }
}

TEST(StablePartition, TrueMedianOfThousand) {
  auto s = generate({GeneratorKind::UniformPermutation, 1000, 11});
  auto sorted = s;
  std::sort(sorted.begin(), sorted.end(), ElementLess{});
  const auto median = sorted[499];
  ComparisonCounter c;
  auto parts = stable_partition(Span(s), median, c);
  const auto smaller = std::count_if(s.begin(), s.end(), [&](auto& e) { return e.key < median.key; });
  EXPECT_EQ(parts.below.size(), static_cast<std::size_t>(smaller));
  EXPECT_EQ(parts.below.size(), 499u);
  EXPECT_EQ(parts.above.size(), 500u);
  EXPECT_EQ(c.count(), 999u);
}

// Multiset preservation and stability on random inputs, pivot at every position.
TEST(StablePartition, PreservesMultisetAndOrder) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 60;
    std::vector<std::int64_t> keys(n);
    for (auto& k : keys) k = static_cast<std::int64_t>(rng() % 20);  // duplicates on purpose
    auto s = seq(keys);
    const auto pivot = s[rng() % n];
    ComparisonCounter c;
    auto parts = stable_partition(Span(s), pivot, c);
    EXPECT_EQ(c.count(), n - 1);

    Seq all = parts.below;
    all.push_back(pivot);
    all.insert(all.end(), parts.above.begin(), parts.above.end());
    auto a = all, b = s;
    std::sort(a.begin(), a.end(), ElementLess{});
    std::sort(b.begin(), b.end(), ElementLess{});
    EXPECT_EQ(a, b);

    for (const auto* side : {&parts.below, &parts.above}) {
      for (std::size_t q = 1; q < side->size(); ++q) {
        EXPECT_LT((*side)[q - 1].origin, (*side)[q].origin);
      }
    }
    for (const auto& e : parts.below) EXPECT_TRUE(ElementLess{}(e, pivot));
    for (const auto& e : parts.above) EXPECT_TRUE(ElementLess{}(pivot, e));
  }
}

TEST(CountedSorts, SortAndCount) {
  for (std::size_t n : {0u, 1u, 2u, 7u, 100u, 1000u}) {
    auto s = n ? generate({GeneratorKind::UniformPermutation, n, 9}) : Seq{};
    auto a = s, b = s;
    ComparisonCounter ca, cb;
    insertion_sort(std::span<Element<std::int64_t>>(a), ca);
    merge_sort(std::span<Element<std::int64_t>>(b), cb);
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end(), ElementLess{}));
    EXPECT_EQ(a, b);
    if (n > 1) {
      EXPECT_LE(ca.count(), n * (n - 1) / 2);
      EXPECT_GE(ca.count(), n - 1);
    }
  }
}

TEST(ComparisonCounter, FlipInvertsOneComparison) {
  ComparisonCounter c;
  c.flip_at(2);
  Element<int> a{1, 0}, b{2, 1};
  EXPECT_TRUE(c.less(a, b));
  EXPECT_FALSE(c.less(a, b));
  EXPECT_TRUE(c.less(a, b));
  EXPECT_EQ(c.count(), 3u);
}
