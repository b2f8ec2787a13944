#pragma once

#include <vector>

#include "bienayme/tree/plane_tree.hpp"

namespace bienayme::analysis {

// The contour function resampled on `points` uniform times in [0, 1] by
// linear interpolation and multiplied by scale.
std::vector<double> rescaled_contour(const tree::PlaneTree& t, double scale, int points = 1024);

double sup_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace bienayme::analysis
