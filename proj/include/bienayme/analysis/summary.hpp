#pragma once

#include <cstdint>
#include <vector>

#include "bienayme/analysis/stats.hpp"
#include "bienayme/tree/plane_tree.hpp"

namespace bienayme::analysis {

// Per-replicate quantities used by the verification suites.
struct TreeSummary {
  std::int64_t weighted_size = 0;  // #_lambda
  int size = 0;
  int height = 0;
  std::vector<std::int64_t> type_counts;
  std::vector<std::int64_t> reduced_degrees;  // N_d of the reduced tree
  int reduced_max_outdegree = 0;
  int flat_max_outdegree = 0;  // Delta_n
  int largest_blob = 0;        // Delta'_n, blob root plus non-type-1 members
};

TreeSummary summarize(const tree::MultitypeTree& t, const std::vector<int>& lambda);

struct ConcentrationOptions {
  double delta = 0.1;
  double min_pass_rate = 0.99;
  double se_multiplier = 4.0;
  double outdegree_log_factor = 20.0;  // C in C ln n
};

// Targets from the flattened blob law: c1 and P(xi~_1 = d), E[xi~_1^2].
struct ConcentrationTargets {
  double c1 = 1.0;
  std::vector<double> type0_pmf;
  double second_moment = 0.0;
};

// Items (i)-(iv): the #_1 window, per-degree frequencies, the logarithmic
// outdegree bound and the second-moment functional. Throws
// MixedConditioning when the replicates disagree on #_lambda and
// InsufficientData when there are none.
std::vector<StatReport> concentration_report(const std::vector<TreeSummary>& samples,
                                             const ConcentrationTargets& targets,
                                             const ConcentrationOptions& opts = {});

// Max outdegree and largest blob against ln n, and Delta' <= Delta + 1 on
// every replicate.
std::vector<StatReport> largest_blob_and_outdegree(const std::vector<TreeSummary>& samples,
                                                   double log_factor = 20.0);

}  // namespace bienayme::analysis
