#pragma once

#include <cstdint>
#include <vector>

namespace bienayme::analysis {

// x_k against P^(H > x_k) with Wilson bands, and an envelope
// C e^{-c x^2/n} + C e^{-c x}.
struct TailCurve {
  std::int64_t n = 0;
  std::int64_t replicates = 0;
  std::vector<double> x;
  std::vector<double> survival;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> envelope;
  double C = 0.0;
  double c = 0.0;
  double fit_residual = 0.0;   // RMS of the log-survival residual on the fit region
  int fit_points = 0;          // grid points with at least min_exceedances
  bool dominates = false;      // envelope >= lo on the whole grid
  std::int64_t max_height = 0;

  double envelope_at(double xv) const;
};

struct TailOptions {
  int min_exceedances = 20;
  int min_replicates = 1000;
  double z = 1.96;
};

// Grid defaults to 0, 1, ..., max height + 1. The decay rate c minimizes the
// least-squares misfit of log survival on the fit region (with the best C for
// each c); C is then the smallest constant for which the envelope bounds the
// empirical survival there. Throws InsufficientData below min_replicates or
// when no grid point has enough exceedances.
TailCurve tail_curve(const std::vector<int>& heights, std::int64_t n, std::vector<double> grid = {},
                     const TailOptions& opts = {});

}  // namespace bienayme::analysis
