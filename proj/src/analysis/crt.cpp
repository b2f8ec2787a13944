#include "bienayme/analysis/crt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bienayme/analysis/stats.hpp"
#include "bienayme/errors.hpp"
#include "bienayme/sampler/batch.hpp"

namespace bienayme::analysis {

namespace {

double large_y(double y, double tol) {
  double sum = 0.0;
  for (int k = 1; k < 10000; ++k) {
    const double k2y2 = static_cast<double>(k) * k * y * y;
    const double term = (4.0 * k2y2 - 1.0) * std::exp(-2.0 * k2y2);
    sum += term;
    if (std::abs(term) < tol && k2y2 > 1.0) break;
  }
  return 1.0 - 2.0 * sum;
}

double small_y(double y, double tol) {
  const double pi = std::numbers::pi;
  const double pre = std::sqrt(2.0) * std::pow(pi, 2.5) / (y * y * y);
  double sum = 0.0;
  for (int k = 1; k < 10000; ++k) {
    const double term = static_cast<double>(k) * k * std::exp(-pi * pi * k * k / (2.0 * y * y));
    sum += term;
    if (pre * term < tol) break;
  }
  return pre * sum;
}

double height_of_bridge(sampler::RngStream& rng, std::int64_t m) {
  std::int64_t ups = m, downs = m + 1;
  std::int64_t s = 0, lo = 0;
  std::int64_t max_before = 0, max_after = 0;
  auto& eng = rng.engine();
  // Sequential uniform bridge: P(up) = ups / (ups + downs). The Dyck path is
  // the rotation starting right after the first minimum.
  while (ups + downs > 0) {
    const auto left = static_cast<std::uint64_t>(ups + downs);
    if (eng() % left < static_cast<std::uint64_t>(ups)) {
      --ups;
      ++s;
      max_after = std::max(max_after, s);
    } else {
      --downs;
      --s;
      if (s < lo) {
        lo = s;
        max_before = std::max(max_before, max_after);
        max_after = s;
      }
    }
  }
  return static_cast<double>(std::max(max_after - lo, max_before - 1 - lo));
}

}  // namespace

double excursion_max_cdf(double y, double tol) {
  if (!(y > 0.0)) return 0.0;
  if (y > 50.0) return 1.0;
  return y >= 1.0 ? large_y(y, tol) : small_y(y, tol);
}

double excursion_max_mean(double tol) {
  // Simpson on [0, 12]; the survival beyond is below e^{-288}.
  const int steps = 24000;
  const double h = 12.0 / steps;
  double sum = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * (1.0 - excursion_max_cdf(i * h, tol));
  }
  return sum * h / 3.0;
}

std::vector<double> walk_excursion_heights(const WalkOracleOptions& opts, int threads) {
  const double scale = std::sqrt(2.0 * static_cast<double>(opts.half_length));
  return sampler::parallel_map(
      opts.excursions, opts.seed, 0,
      [&](sampler::RngStream& rng, std::int64_t) { return (height_of_bridge(rng, opts.half_length) + opts.shift) / scale; },
      threads);
}

std::vector<double> walk_excursion_heights_serial(const WalkOracleOptions& opts) {
  const double scale = std::sqrt(2.0 * static_cast<double>(opts.half_length));
  return sampler::serial_map(opts.excursions, opts.seed, 0, [&](sampler::RngStream& rng, std::int64_t) {
    return (height_of_bridge(rng, opts.half_length) + opts.shift) / scale;
  });
}

HeightGof crt_height_gof(const std::vector<int>& heights, std::int64_t n, double c_scal, double threshold,
                         std::int64_t min_replicates) {
  HeightGof g;
  g.replicates = static_cast<std::int64_t>(heights.size());
  g.threshold = threshold;
  if (g.replicates < min_replicates)
    throw Error(ErrorKind::kInsufficientData,
                std::to_string(g.replicates) + " replicates, need " + std::to_string(min_replicates));
  const double scale = 2.0 * c_scal / std::sqrt(static_cast<double>(n));
  std::vector<double> ys;
  ys.reserve(heights.size());
  for (int h : heights) ys.push_back(scale * h);
  g.ks = ks_statistic(std::move(ys), [](double y) { return excursion_max_cdf(y / 2.0); });
  g.pass = g.ks < threshold;
  return g;
}

}  // namespace bienayme::analysis
