#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "bienayme/kernel/offspring.hpp"
#include "bienayme/sampler/decoration.hpp"
#include "bienayme/sampler/flat_law.hpp"
#include "bienayme/sampler/rng.hpp"
#include "bienayme/tree/plane_tree.hpp"

namespace bienayme::sampler {

struct ExactOptions {
  FlatLawOptions flat_law;
  std::int64_t dp_limit = 8000;
  double truncation_tolerance = 1e-3;  // allowed expected number of truncated blobs
  std::size_t shape_limit = 4096;
  SampleBudget budget;
};

// Exact sampler for trees conditioned on #_lambda = n:
//   1. the number l of type-0 vertices and the multiset of their blob
//      profiles, from their joint conditional law;
//   2. a uniform permutation of the type-0 outdegrees rotated by the cycle
//      lemma into the flat tree's type-0 skeleton;
//   3. the other types attached as sorted leaves (the flat tree);
//   4. blow-up with decorations drawn conditionally on each profile.
// When every profile carries the same lambda weight, l = n / lambda_0 is
// fixed and stage 1 is a conditioned multinomial; otherwise stage 1 uses the
// law f of the weight of a flat subtree and its convolution powers, which
// needs n <= dp_limit.
class ExactSampler {
 public:
  ExactSampler(const kernel::OffspringFamily& family, std::int64_t n_max, const ExactOptions& opts = {});

  tree::MultitypeTree sample(std::int64_t n, RngStream& rng, SampleStats* stats = nullptr) const;
  // The flat tree of stage 3, before blow-up.
  tree::MultitypeTree sample_flat(std::int64_t n, RngStream& rng, SampleStats* stats = nullptr) const;

  // P(#_lambda T = n) under the truncated blob law (weight-table path only).
  double size_probability(std::int64_t n) const;

  bool fixed_count() const { return fixed_count_; }
  const FlatLaw& flat_law() const { return flat_; }
  const DecorationSampler& decorations() const { return decorations_; }
  const kernel::OffspringFamily& family() const { return family_; }

 private:
  // Profiles (type-0 vertices of the flat tree in DFS order).
  std::vector<const FlatLaw::Entry*> stage1(std::int64_t n, RngStream& rng, SampleStats* stats) const;
  std::vector<const FlatLaw::Entry*> stage1_fixed(std::int64_t n, RngStream& rng, SampleStats* stats) const;
  std::vector<const FlatLaw::Entry*> stage1_weights(std::int64_t n, RngStream& rng) const;
  // Stages 1 and 2: profiles in the DFS order of the type-0 skeleton.
  std::vector<const FlatLaw::Entry*> arrange(std::int64_t n, RngStream& rng, SampleStats* stats) const;
  void check_truncation(std::int64_t n) const;

  kernel::OffspringFamily family_;
  ExactOptions opts_;
  FlatLaw flat_;
  DecorationSampler decorations_;
  std::int64_t n_max_ = 0;
  bool fixed_count_ = false;
  double c1_ = 1.0;
  std::vector<std::int64_t> weight_;  // per flat-law entry: lambda_0 + sum_{i>0} lambda_i x_i

  // Fixed-count path: entries grouped by type-0 child count.
  std::vector<double> marginal0_;
  std::size_t last_degree_ = 0;
  std::vector<std::vector<const FlatLaw::Entry*>> by_degree_;
  std::vector<std::vector<double>> by_degree_cdf_;

  // Weight-table path: groups (c, s) and powers[c][r] = f^{*c}(r).
  struct Group {
    int children;
    std::int64_t weight;
    double prob;
    std::vector<const FlatLaw::Entry*> entries;
    std::vector<double> cdf;
  };
  std::vector<Group> groups_;
  std::vector<std::vector<double>> powers_;
};

// Flat tree whose type-0 vertices, in DFS order, carry the given profiles
// (a Lukasiewicz word in the type-0 counts); other types become sorted leaves.
tree::MultitypeTree build_flat_tree(const std::vector<const FlatLaw::Entry*>& order, int num_types);

tree::MultitypeTree sample_conditioned_exact(const kernel::OffspringFamily& family, std::int64_t n, RngStream& rng);

}  // namespace bienayme::sampler
