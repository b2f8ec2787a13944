#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bienayme::tree {

// Plane tree stored in depth-first (lexicographic) order: vertex 0 is the
// root, parent[i] < i, and children lists are increasing.
class PlaneTree {
 public:
  PlaneTree();  // single vertex

  // parent[0] must be -1; throws InvalidArgument unless the array is a DFS
  // order parent array.
  static PlaneTree from_parents(std::vector<int> parent);
  // Outdegrees listed in DFS order (a Lukasiewicz word).
  static PlaneTree from_outdegrees(std::span<const int> outdegrees);

  int size() const { return static_cast<int>(parent_.size()); }
  int parent(int v) const { return parent_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& parents() const { return parent_; }
  std::span<const int> children(int v) const {
    const auto b = static_cast<std::size_t>(child_start_[static_cast<std::size_t>(v)]);
    const auto e = static_cast<std::size_t>(child_start_[static_cast<std::size_t>(v) + 1]);
    return {children_.data() + b, e - b};
  }
  int outdegree(int v) const {
    return child_start_[static_cast<std::size_t>(v) + 1] - child_start_[static_cast<std::size_t>(v)];
  }
  // One past the last vertex of the subtree rooted at v.
  int subtree_end(int v) const;

  bool operator==(const PlaneTree& other) const { return parent_ == other.parent_; }

 private:
  explicit PlaneTree(std::vector<int> parent);
  std::vector<int> parent_;
  std::vector<int> child_start_;
  std::vector<int> children_;
  std::vector<int> subtree_end_;
};

// Types are 0-based; type 0 is the root type.
struct MultitypeTree {
  PlaneTree shape;
  std::vector<int> types{0};

  MultitypeTree() = default;
  MultitypeTree(PlaneTree s, std::vector<int> t);

  int size() const { return shape.size(); }
  int type(int v) const { return types[static_cast<std::size_t>(v)]; }
  bool operator==(const MultitypeTree& other) const = default;
};

std::vector<int> contour_function(const PlaneTree& t);
std::vector<int> height_function(const PlaneTree& t);
int height(const PlaneTree& t);

std::vector<std::int64_t> type_counts(const MultitypeTree& t, int num_types);
std::int64_t weighted_size(const MultitypeTree& t, std::span<const int> lambda);

}  // namespace bienayme::tree
