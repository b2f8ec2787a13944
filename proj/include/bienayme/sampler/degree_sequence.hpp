#pragma once

#include <span>
#include <vector>

#include "bienayme/sampler/rng.hpp"
#include "bienayme/tree/plane_tree.hpp"

namespace bienayme::sampler {

// For outdegrees with sum(d - 1) = -1, the unique index r such that the
// rotation starting at r is a Lukasiewicz word (all partial sums of d - 1
// stay >= 0 before the last step). Throws Inadmissible otherwise.
std::size_t cycle_lemma_rotation(std::span<const int> outdegrees);

// Applies the rotation in place.
void rotate_to_tree(std::vector<int>& outdegrees);

// Uniform plane tree with the given outdegree multiset.
tree::PlaneTree sample_degree_sequence_tree(std::vector<int> outdegrees, RngStream& rng);

}  // namespace bienayme::sampler
