#pragma once

#include <numeric>
#include <utility>
#include <vector>

#include "gammalab/common.hpp"

namespace gammalab::detail {

struct UnionFind {
  std::vector<Elem> parent;

  explicit UnionFind(int n) : parent(std::size_t(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  Elem find(Elem x) {
    while (parent[std::size_t(x)] != x) {
      parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
      x = parent[std::size_t(x)];
    }
    return x;
  }

  // Keeps the smaller root so class numbering is reproducible.
  bool unite(Elem a, Elem b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[std::size_t(b)] = a;
    return true;
  }
};

}  // namespace gammalab::detail
