#pragma once

#include <cstdint>
#include <vector>

namespace bienayme::analysis {

// P(max of the normalized Brownian excursion <= y), from the theta series in
// its two dual forms (each used where it converges fast). Terms are summed
// until they drop below tol.
double excursion_max_cdf(double y, double tol = 1e-12);

// Mean of the excursion maximum by integrating the survival function.
double excursion_max_mean(double tol = 1e-12);

struct WalkOracleOptions {
  std::int64_t excursions = 1'000'000;
  std::int64_t half_length = 5'000;  // bridge of m ups and m+1 downs
  std::uint64_t seed = 1;
  // Finite-length height correction: a Dyck path of length 2m has mean
  // height sqrt(pi m) - 3/2 + o(1).
  double shift = 1.5;
};

// Normalized heights (H + shift) / sqrt(2m) of uniform Dyck paths, each
// obtained from a uniform bridge by the cycle lemma (height = max - min of
// the bridge). Parallel over excursions; the serial variant is the
// reference.
std::vector<double> walk_excursion_heights(const WalkOracleOptions& opts, int threads);
std::vector<double> walk_excursion_heights_serial(const WalkOracleOptions& opts);

struct HeightGof {
  double ks = 0.0;
  std::int64_t replicates = 0;
  double threshold = 0.0;
  bool pass = false;
};

// KS distance between the law of (2 c_scal / sqrt(n)) H and that of twice
// the excursion maximum. Throws InsufficientData below min_replicates.
HeightGof crt_height_gof(const std::vector<int>& heights, std::int64_t n, double c_scal, double threshold,
                         std::int64_t min_replicates = 10000);

}  // namespace bienayme::analysis
