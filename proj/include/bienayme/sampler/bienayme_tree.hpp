#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "bienayme/kernel/offspring.hpp"
#include "bienayme/sampler/rng.hpp"
#include "bienayme/tree/plane_tree.hpp"

namespace bienayme::sampler {

// Per-type word draws by inverse CDF over the support.
class WordSampler {
 public:
  explicit WordSampler(const kernel::OffspringFamily& family);
  const kernel::Word& draw(int type, RngStream& rng) const;
  const kernel::OffspringFamily& family() const { return family_; }

 private:
  kernel::OffspringFamily family_;
  std::vector<std::vector<double>> cdf_;
};

struct Overflow {
  std::int64_t vertices = 0;
};

using Unconditioned = std::variant<tree::MultitypeTree, Overflow>;

Unconditioned sample_unconditioned(const WordSampler& words, int root_type, RngStream& rng,
                                   const SampleBudget& budget);

// Conditioned on #_lambda = n (lambda taken from the family). Throws
// Infeasible when the attempts run out and n is not a feasible size,
// BudgetExhausted otherwise.
tree::MultitypeTree sample_conditioned_rejection(const WordSampler& words, std::int64_t n, RngStream& rng,
                                                 const SampleBudget& budget, SampleStats* stats = nullptr);

// Conditioned on (#_i T)_{i in types} = targets; types are 0-based.
tree::MultitypeTree sample_by_type(const WordSampler& words, const std::vector<int>& types,
                                   const std::vector<std::int64_t>& targets, RngStream& rng,
                                   const SampleBudget& budget, SampleStats* stats = nullptr);

// A blob: the tree from a type-0 root stopped at type-0 descendants.
// Returns the profile (type-0 frontier count, then member counts of the
// other types), or nothing on overflow.
std::optional<kernel::Counts> sample_blob_profile(const WordSampler& words, RngStream& rng,
                                                  const SampleBudget& budget);

// P(T = t) under the unconditioned law rooted at t's root type.
double tree_probability(const kernel::OffspringFamily& family, const tree::MultitypeTree& t);

}  // namespace bienayme::sampler
