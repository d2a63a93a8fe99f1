#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mmselect {

/// An input value together with its position in the original input.
///
/// Elements are ordered by (key, origin) lexicographically, so sequences with
/// duplicate keys still have a strict total order and every selection is
/// well defined.
template <typename Key>
struct Element {
  Key key{};
  std::size_t origin = 0;

  friend bool operator==(const Element&, const Element&) = default;
};

template <typename Key>
using Sequence = std::vector<Element<Key>>;

/// Builds a sequence whose origins are the positions of `keys`.
template <typename Key>
Sequence<Key> make_sequence(std::span<const Key> keys) {
  Sequence<Key> out;
  out.reserve(keys.size());
  for (std::size_t p = 0; p < keys.size(); ++p) out.push_back({keys[p], p});
  return out;
}

template <typename Key>
Sequence<Key> make_sequence(const std::vector<Key>& keys) {
  return make_sequence(std::span<const Key>(keys));
}

/// Which central element an even-sized group contributes.
/// Odd-sized groups have a single median and ignore the policy.
enum class MedianPolicy { Lower, Upper };

constexpr std::string_view to_string(MedianPolicy p) {
  return p == MedianPolicy::Lower ? "lower" : "upper";
}

/// 1-indexed rank of the median a group of `size` contributes under `policy`.
constexpr std::size_t median_rank(std::size_t size, MedianPolicy policy) {
  if (size % 2 == 1) return (size + 1) / 2;
  return policy == MedianPolicy::Lower ? size / 2 : size / 2 + 1;
}

/// Counts key comparisons. Every ordering decision made by the library goes
/// through `less`, so `count()` is the exact comparison cost of a run.
///
/// `flip_at(k)` inverts the outcome of the k-th comparison (1-indexed). It is a
/// fault-injection hook for checking that verification catches a broken
/// comparator.
class ComparisonCounter {
 public:
  template <typename Key>
  bool less(const Element<Key>& a, const Element<Key>& b) {
    bool r = a.key < b.key || (!(b.key < a.key) && a.origin < b.origin);
    ++count_;
    if (flip_at_ && count_ == *flip_at_) r = !r;
    return r;
  }

  std::uint64_t count() const { return count_; }
  void flip_at(std::optional<std::uint64_t> k) { flip_at_ = k; }

 private:
  std::uint64_t count_ = 0;
  std::optional<std::uint64_t> flip_at_;
};

/// Uncounted strict order on elements; for oracles and test code.
struct ElementLess {
  template <typename Key>
  bool operator()(const Element<Key>& a, const Element<Key>& b) const {
    return a.key < b.key || (!(b.key < a.key) && a.origin < b.origin);
  }
};

}  // namespace mmselect
