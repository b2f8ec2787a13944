#include "bienayme/tree/plane_tree.hpp"

#include <algorithm>
#include <string>

#include "bienayme/errors.hpp"

namespace bienayme::tree {

PlaneTree::PlaneTree() : PlaneTree(std::vector<int>{-1}) {}

PlaneTree::PlaneTree(std::vector<int> parent) : parent_(std::move(parent)) {
  const auto n = parent_.size();
  child_start_.assign(n + 1, 0);
  for (std::size_t v = 1; v < n; ++v) ++child_start_[static_cast<std::size_t>(parent_[v]) + 1];
  for (std::size_t v = 0; v < n; ++v) child_start_[v + 1] += child_start_[v];
  children_.resize(n > 0 ? n - 1 : 0);
  std::vector<int> fill(child_start_.begin(), child_start_.end() - 1);
  for (std::size_t v = 1; v < n; ++v)
    children_[static_cast<std::size_t>(fill[static_cast<std::size_t>(parent_[v])]++)] = static_cast<int>(v);
  subtree_end_.resize(n);
  for (std::size_t v = n; v-- > 0;) {
    const auto kids = children(static_cast<int>(v));
    subtree_end_[v] = kids.empty() ? static_cast<int>(v) + 1 : subtree_end_[static_cast<std::size_t>(kids.back())];
  }
}

PlaneTree PlaneTree::from_parents(std::vector<int> parent) {
  if (parent.empty() || parent[0] != -1)
    throw Error(ErrorKind::kInvalidArgument, "parent array must start with -1 for the root");
  std::vector<int> path{0};
  for (std::size_t i = 1; i < parent.size(); ++i) {
    const int p = parent[i];
    if (p < 0 || p >= static_cast<int>(i))
      throw Error(ErrorKind::kInvalidArgument, "parent[" + std::to_string(i) + "] out of range");
    while (!path.empty() && path.back() != p) path.pop_back();
    if (path.empty())
      throw Error(ErrorKind::kInvalidArgument, "parent array is not in depth-first order at vertex " +
                                                   std::to_string(i));
    path.push_back(static_cast<int>(i));
  }
  return PlaneTree(std::move(parent));
}

PlaneTree PlaneTree::from_outdegrees(std::span<const int> outdegrees) {
  if (outdegrees.empty()) throw Error(ErrorKind::kInvalidArgument, "empty outdegree list");
  std::vector<int> parent(outdegrees.size(), -1);
  std::vector<std::pair<int, int>> open;  // (vertex, children still to attach)
  for (std::size_t i = 0; i < outdegrees.size(); ++i) {
    if (outdegrees[i] < 0) throw Error(ErrorKind::kInvalidArgument, "negative outdegree");
    if (i > 0) {
      if (open.empty()) throw Error(ErrorKind::kInvalidArgument, "outdegree list closes early");
      parent[i] = open.back().first;
      if (--open.back().second == 0) open.pop_back();
    }
    if (outdegrees[i] > 0) open.emplace_back(static_cast<int>(i), outdegrees[i]);
  }
  if (!open.empty()) throw Error(ErrorKind::kInvalidArgument, "outdegree list leaves open slots");
  return PlaneTree(std::move(parent));
}

int PlaneTree::subtree_end(int v) const { return subtree_end_[static_cast<std::size_t>(v)]; }

MultitypeTree::MultitypeTree(PlaneTree s, std::vector<int> t) : shape(std::move(s)), types(std::move(t)) {
  if (static_cast<int>(types.size()) != shape.size())
    throw Error(ErrorKind::kInvalidArgument, "type array length differs from tree size");
  for (int ty : types)
    if (ty < 0) throw Error(ErrorKind::kInvalidArgument, "negative type label");
}

std::vector<int> contour_function(const PlaneTree& t) {
  const int n = t.size();
  std::vector<int> c;
  c.reserve(static_cast<std::size_t>(2 * n - 1));
  c.push_back(0);
  // Walking the DFS order: moving from v to v+1 climbs from depth(v) to
  // depth(parent(v+1)) and then steps down once.
  std::vector<int> depth(static_cast<std::size_t>(n), 0);
  for (int v = 1; v < n; ++v) {
    depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(t.parent(v))] + 1;
    int h = depth[static_cast<std::size_t>(v - 1)];
    const int target = depth[static_cast<std::size_t>(t.parent(v))];
    while (h > target) c.push_back(--h);
    c.push_back(h + 1);
  }
  for (int h = n > 0 ? depth[static_cast<std::size_t>(n - 1)] : 0; h > 0;) c.push_back(--h);
  return c;
}

std::vector<int> height_function(const PlaneTree& t) {
  std::vector<int> depth(static_cast<std::size_t>(t.size()), 0);
  for (int v = 1; v < t.size(); ++v)
    depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(t.parent(v))] + 1;
  return depth;
}

int height(const PlaneTree& t) {
  const auto h = height_function(t);
  return *std::max_element(h.begin(), h.end());
}

std::vector<std::int64_t> type_counts(const MultitypeTree& t, int num_types) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(num_types), 0);
  for (int ty : t.types) {
    if (ty >= num_types) throw Error(ErrorKind::kInvalidArgument, "type label exceeds number of types");
    ++counts[static_cast<std::size_t>(ty)];
  }
  return counts;
}

std::int64_t weighted_size(const MultitypeTree& t, std::span<const int> lambda) {
  std::int64_t total = 0;
  for (int ty : t.types) {
    if (ty >= static_cast<int>(lambda.size()))
      throw Error(ErrorKind::kInvalidArgument, "type label exceeds lambda length");
    total += lambda[static_cast<std::size_t>(ty)];
  }
  return total;
}

}  // namespace bienayme::tree
