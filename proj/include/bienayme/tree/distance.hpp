#pragma once

#include <vector>

#include "bienayme/tree/plane_tree.hpp"

namespace bienayme::tree {

// Lowest common ancestors by Euler tour and a sparse table over depths:
// O(n log n) preprocessing, O(1) per query.
class DistanceOracle {
 public:
  explicit DistanceOracle(const PlaneTree& t);

  int lca(int u, int v) const;
  int distance(int u, int v) const;
  int depth(int v) const { return depth_[static_cast<std::size_t>(v)]; }
  int height() const { return height_; }

 private:
  int argmin(int a, int b) const;

  std::vector<int> depth_;
  std::vector<int> euler_;
  std::vector<int> first_;
  std::vector<std::vector<int>> table_;
  int height_ = 0;
};

}  // namespace bienayme::tree
