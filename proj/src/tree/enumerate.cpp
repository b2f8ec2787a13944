#include "bienayme/tree/enumerate.hpp"

namespace bienayme::tree {

namespace {

void extend(std::vector<int>& word, int n, int open, std::vector<PlaneTree>& out) {
  const int placed = static_cast<int>(word.size());
  if (placed == n) {
    if (open == 0) out.push_back(PlaneTree::from_outdegrees(word));
    return;
  }
  if (open == 0) return;
  // open counts unfilled child slots; the remaining vertices must fill them.
  const int remaining = n - placed;
  for (int d = 0; open - 1 + d <= remaining - 1; ++d) {
    word.push_back(d);
    extend(word, n, open - 1 + d, out);
    word.pop_back();
  }
}

}  // namespace

std::vector<PlaneTree> plane_trees(int n) {
  std::vector<PlaneTree> out;
  if (n < 1) return out;
  std::vector<int> word;
  extend(word, n, 1, out);
  return out;
}

void for_each_multitype_tree(int max_vertices, int num_types,
                             const std::function<void(const MultitypeTree&)>& f) {
  for (int n = 1; n <= max_vertices; ++n) {
    for (const auto& shape : plane_trees(n)) {
      std::vector<int> types(static_cast<std::size_t>(n), 0);
      while (true) {
        f(MultitypeTree(shape, types));
        int i = n - 1;
        while (i >= 1 && types[static_cast<std::size_t>(i)] == num_types - 1) types[static_cast<std::size_t>(i--)] = 0;
        if (i < 1) break;
        ++types[static_cast<std::size_t>(i)];
      }
    }
  }
}

}  // namespace bienayme::tree
