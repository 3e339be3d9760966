#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace khbound {

// Disjoint-set forest with path halving. Each class tracks its smallest
// member so the canonical representative of a class of lexicographically
// ordered items is the lexicographically least one.
class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), min_member_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    std::iota(min_member_.begin(), min_member_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns false when a and b were already in the same class.
  bool unite(std::size_t a, std::size_t b) {
    std::size_t ra = find(a), rb = find(b);
    if (ra == rb) return false;
    if (size_[ra] < size_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    size_[ra] += size_[rb];
    if (min_member_[rb] < min_member_[ra]) min_member_[ra] = min_member_[rb];
    return true;
  }

  std::size_t min_member(std::size_t x) { return min_member_[find(x)]; }

  std::size_t size() const { return parent_.size(); }

private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> min_member_;
};

}  // namespace khbound
