#pragma once

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "bienayme/kernel/offspring.hpp"
#include "bienayme/sampler/bienayme_tree.hpp"
#include "bienayme/sampler/rng.hpp"
#include "bienayme/tree/operations.hpp"

namespace bienayme::sampler {

// All blob shapes with a given profile and their unconditional
// probabilities (product of word probabilities over expanded vertices).
struct BlobTable {
  std::vector<tree::MultitypeTree> shapes;
  std::vector<double> probs;
  bool complete = true;  // false when enumeration hit the shape or work limit
};

BlobTable enumerate_blobs(const kernel::OffspringFamily& family, const kernel::Counts& profile,
                          std::size_t shape_limit);

// Draws alpha(v) conditionally on its profile. Exact tables are built on
// first use of a profile and shared between threads; profiles with more
// than shape_limit shapes (or too costly to enumerate) fall back to
// rejection from the blob law.
class DecorationSampler {
 public:
  explicit DecorationSampler(const kernel::OffspringFamily& family, std::size_t shape_limit = 4096);

  tree::MultitypeTree draw(const kernel::Counts& profile, RngStream& rng, const SampleBudget& budget) const;

  // A profile's table resolved once, for many draws without locking.
  struct Handle {
    const BlobTable* table = nullptr;
    const std::vector<double>* cdf = nullptr;
    kernel::Counts profile;
  };
  Handle handle(const kernel::Counts& profile) const;
  // Same law and stream use as draw(profile, ...); returns a reference into
  // the table, or into `owned` for shapes found by rejection.
  const tree::MultitypeTree& draw(const Handle& h, RngStream& rng, const SampleBudget& budget,
                                  std::deque<tree::MultitypeTree>& owned) const;

  // alpha for every type-0 vertex of a flat tree, in DFS rank order.
  tree::Decoration decorate(const tree::MultitypeTree& flat, RngStream& rng, const SampleBudget& budget) const;

  std::shared_ptr<const BlobTable> table(const kernel::Counts& profile) const;

 private:
  struct Cached {
    std::shared_ptr<const BlobTable> table;
    std::vector<double> cdf;
  };
  const Cached& cached(const kernel::Counts& profile) const;
  tree::MultitypeTree reject(const kernel::Counts& profile, RngStream& rng, const SampleBudget& budget) const;

  kernel::OffspringFamily family_;
  WordSampler words_;
  std::size_t shape_limit_;
  mutable std::mutex mutex_;
  mutable std::map<kernel::Counts, std::unique_ptr<Cached>> cache_;
};

}  // namespace bienayme::sampler
