#include "bienayme/tree/distance.hpp"

#include <algorithm>
#include <bit>

namespace bienayme::tree {

DistanceOracle::DistanceOracle(const PlaneTree& t) {
  const int n = t.size();
  depth_ = height_function(t);
  height_ = *std::max_element(depth_.begin(), depth_.end());
  first_.assign(static_cast<std::size_t>(n), -1);
  euler_.reserve(static_cast<std::size_t>(2 * n - 1));
  // The Euler tour visits v, then after each child subtree returns to v.
  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  first_[0] = 0;
  euler_.push_back(0);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    const auto kids = t.children(v);
    if (next < kids.size()) {
      const int c = kids[next++];
      first_[static_cast<std::size_t>(c)] = static_cast<int>(euler_.size());
      euler_.push_back(c);
      stack.emplace_back(c, 0);
    } else {
      stack.pop_back();
      if (!stack.empty()) euler_.push_back(stack.back().first);
    }
  }
  const auto m = euler_.size();
  table_.push_back(euler_);
  for (std::size_t k = 1; (std::size_t{1} << k) <= m; ++k) {
    const auto& prev = table_.back();
    std::vector<int> row(m - (std::size_t{1} << k) + 1);
    const std::size_t half = std::size_t{1} << (k - 1);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = argmin(prev[i], prev[i + half]);
    table_.push_back(std::move(row));
  }
}

int DistanceOracle::argmin(int a, int b) const {
  return depth_[static_cast<std::size_t>(a)] <= depth_[static_cast<std::size_t>(b)] ? a : b;
}

int DistanceOracle::lca(int u, int v) const {
  auto l = static_cast<std::size_t>(first_[static_cast<std::size_t>(u)]);
  auto r = static_cast<std::size_t>(first_[static_cast<std::size_t>(v)]);
  if (l > r) std::swap(l, r);
  const auto k = static_cast<std::size_t>(std::bit_width(r - l + 1) - 1);
  return argmin(table_[k][l], table_[k][r + 1 - (std::size_t{1} << k)]);
}

int DistanceOracle::distance(int u, int v) const {
  return depth(u) + depth(v) - 2 * depth(lca(u, v));
}

}  // namespace bienayme::tree
