#pragma once

#include <cstdint>
#include <vector>

#include "bienayme/kernel/offspring.hpp"
#include "bienayme/sampler/rng.hpp"

namespace bienayme::sampler {

struct FlatLawOptions {
  double coverage = 1.0 - 1e-9;
  int initial_cap = 64;   // largest profile total kept in the first pass
  int max_cap = 4096;
};

// The law of the blob profile of a type-0 vertex: (type-0 frontier count,
// then the number of blob members of each other type). Materialized by
// fixed-point iteration on the sub-blob profile laws, dropping profiles whose
// total exceeds a cap that is doubled until the retained mass reaches the
// requested coverage.
class FlatLaw {
 public:
  struct Entry {
    kernel::Counts profile;
    double prob = 0.0;
  };

  explicit FlatLaw(const kernel::OffspringFamily& family, const FlatLawOptions& opts = {});

  const std::vector<Entry>& entries() const { return entries_; }
  double coverage() const { return coverage_; }
  int cap() const { return cap_; }
  int num_types() const { return num_types_; }
  int max_type0_children() const { return max_type0_children_; }

  double mean(int type) const;
  double second_moment(int type) const;
  // P(profile[0] = d) over the retained mass (not renormalized).
  std::vector<double> type0_marginal() const;

  // Draws from the retained mass renormalized.
  const Entry& draw(RngStream& rng) const;

 private:
  int num_types_ = 0;
  int cap_ = 0;
  double coverage_ = 0.0;
  int max_type0_children_ = 0;
  std::vector<Entry> entries_;
  std::vector<double> cdf_;
};

}  // namespace bienayme::sampler
