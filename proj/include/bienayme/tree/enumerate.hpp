#pragma once

#include <functional>
#include <vector>

#include "bienayme/tree/plane_tree.hpp"

namespace bienayme::tree {

// All plane trees with exactly n vertices, in lexicographic order of their
// outdegree words.
std::vector<PlaneTree> plane_trees(int n);

// Calls f on every multitype tree with at most max_vertices vertices whose
// root has type 0 and whose other vertices take any of num_types types.
void for_each_multitype_tree(int max_vertices, int num_types,
                             const std::function<void(const MultitypeTree&)>& f);

}  // namespace bienayme::tree
