#include "bienayme/analysis/contour.hpp"

#include <algorithm>
#include <cmath>

namespace bienayme::analysis {

std::vector<double> rescaled_contour(const tree::PlaneTree& t, double scale, int points) {
  const auto c = tree::contour_function(t);
  std::vector<double> out(static_cast<std::size_t>(points), 0.0);
  if (c.size() < 2 || points < 2) return out;
  const double last = static_cast<double>(c.size() - 1);
  for (int k = 0; k < points; ++k) {
    const double pos = last * k / (points - 1);
    const auto i = std::min(static_cast<std::size_t>(pos), c.size() - 2);
    const double frac = pos - static_cast<double>(i);
    out[static_cast<std::size_t>(k)] = scale * ((1.0 - frac) * c[i] + frac * c[i + 1]);
  }
  return out;
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

}  // namespace bienayme::analysis
