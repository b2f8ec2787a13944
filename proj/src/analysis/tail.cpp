#include "bienayme/analysis/tail.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bienayme/analysis/stats.hpp"
#include "bienayme/errors.hpp"

namespace bienayme::analysis {

namespace {

double shape(double x, double c, double n) { return std::exp(-c * x * x / n) + std::exp(-c * x); }

}  // namespace

double TailCurve::envelope_at(double xv) const { return C * shape(xv, c, static_cast<double>(n)); }

TailCurve tail_curve(const std::vector<int>& heights, std::int64_t n, std::vector<double> grid,
                     const TailOptions& opts) {
  const auto reps = static_cast<std::int64_t>(heights.size());
  if (reps < opts.min_replicates)
    throw Error(ErrorKind::kInsufficientData, std::to_string(reps) + " replicates, need " +
                                                  std::to_string(opts.min_replicates));
  std::vector<int> sorted = heights;
  std::sort(sorted.begin(), sorted.end());

  TailCurve tc;
  tc.n = n;
  tc.replicates = reps;
  tc.max_height = sorted.back();
  if (grid.empty())
    for (int x = 0; x <= sorted.back() + 1; ++x) grid.push_back(x);
  tc.x = grid;
  std::vector<std::int64_t> exceed;
  for (double x : grid) {
    const auto above = static_cast<std::int64_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x));
    exceed.push_back(above);
    const auto w = wilson_interval(above, reps, opts.z);
    tc.survival.push_back(static_cast<double>(above) / static_cast<double>(reps));
    tc.lo.push_back(w.lo);
    tc.hi.push_back(w.hi);
  }

  std::vector<std::size_t> fit;
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (exceed[k] >= opts.min_exceedances) fit.push_back(k);
  tc.fit_points = static_cast<int>(fit.size());
  if (tc.max_height == 0) {
    // Every replicate has height 0 (n = 1): the zero envelope is exact.
    tc.c = 1.0;
    tc.envelope.assign(grid.size(), 0.0);
    tc.dominates = true;
    return tc;
  }
  if (fit.empty()) throw Error(ErrorKind::kInsufficientData, "no grid point has enough exceedances");

  const double nd = static_cast<double>(n);
  auto misfit = [&](double c, double* log_c) {
    double mean = 0.0;
    for (auto k : fit) mean += std::log(tc.survival[k]) - std::log(shape(grid[k], c, nd));
    mean /= static_cast<double>(fit.size());
    double ss = 0.0;
    for (auto k : fit) {
      const double r = std::log(tc.survival[k]) - std::log(shape(grid[k], c, nd)) - mean;
      ss += r * r;
    }
    if (log_c) *log_c = mean;
    return std::sqrt(ss / static_cast<double>(fit.size()));
  };
  // Coarse log grid, then golden-section refinement around the best point.
  double best_c = 1e-4, best = misfit(best_c, nullptr);
  for (double lc = -4.0; lc <= 2.0; lc += 0.02) {
    const double m = misfit(std::pow(10.0, lc), nullptr);
    if (m < best) {
      best = m;
      best_c = std::pow(10.0, lc);
    }
  }
  double a = best_c / std::pow(10.0, 0.02), b = best_c * std::pow(10.0, 0.02);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 60; ++it) {
    const double x1 = b - g * (b - a), x2 = a + g * (b - a);
    if (misfit(x1, nullptr) < misfit(x2, nullptr)) b = x2;
    else a = x1;
  }
  tc.c = 0.5 * (a + b);
  tc.fit_residual = misfit(tc.c, nullptr);

  tc.C = 0.0;
  for (auto k : fit) tc.C = std::max(tc.C, tc.survival[k] / shape(grid[k], tc.c, nd));
  tc.dominates = tc.c > 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    tc.envelope.push_back(tc.envelope_at(grid[k]));
    if (tc.envelope.back() < tc.lo[k]) tc.dominates = false;
  }
  return tc;
}

}  // namespace bienayme::analysis
