#pragma once

#include <variant>
#include <vector>

#include "bienayme/sampler/bienayme_tree.hpp"
#include "bienayme/sampler/flat_law.hpp"
#include "bienayme/tree/plane_tree.hpp"

namespace bienayme::sampler {

struct MarkedFlatTree {
  tree::MultitypeTree tree;
  std::vector<int> spine;  // v_0 .. v_l, all type 0
  int mark = 0;
};

// Unconditioned flat tree: type-0 vertices draw profiles from the blob law.
std::variant<tree::MultitypeTree, Overflow> sample_flat_unconditioned(const FlatLaw& law, RngStream& rng,
                                                                      const SampleBudget& budget);

// Spine vertices v_0..v_{l-1} draw size-biased profiles (weight x_0 times the
// blob law), a uniform type-0 child continues the spine, and every other
// type-0 vertex (including the mark v_l) roots an independent flat tree.
std::variant<MarkedFlatTree, Overflow> sample_spine_tree(const FlatLaw& law, int ell, RngStream& rng,
                                                         const SampleBudget& budget);

}  // namespace bienayme::sampler
