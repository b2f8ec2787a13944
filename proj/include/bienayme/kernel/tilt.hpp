#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bienayme/kernel/offspring.hpp"

namespace bienayme::kernel {

// zeta_theta^(i)(w) proportional to zeta^(i)(w) * exp(sum_j theta_j #_j w).
OffspringFamily tilt(const OffspringFamily& family, std::span<const double> theta);

// phi_i(z) and the tilted mean matrix through the generating function:
// A^theta(i,j) = e^theta_j d_j phi_i(e^theta) / phi_i(e^theta). Evaluated on
// the original law, independently of tilt().
double generating_function(const OffspringLaw& law, std::span<const double> z);
Eigen::MatrixXd tilted_mean_formula(const OffspringFamily& family, std::span<const double> theta);

struct TiltSolverOptions {
  int max_newton_iters = 100;
  int max_starts = 16;
  double fd_step = 1e-6;
  double radius_tol = 1e-10;
  double direction_tol = 1e-8;
  std::uint64_t seed = 0x5eed;
};

struct TiltSolution {
  std::vector<double> theta;
  double radius = 0.0;
  Eigen::VectorXd left_vector;  // normalized so the first K entries sum to 1
  double direction_error = 0.0;
  int iterations = 0;
  int starts_used = 0;
};

// Finds theta such that the tilted family is critical and its left Perron
// vector restricted to `types` (0-based) is collinear with `direction`.
// Damped least-norm Gauss-Newton with a central-difference Jacobian and
// seeded multi-start. Throws DegenerateDirection or NoConvergence.
TiltSolution solve_tilt(const OffspringFamily& family, const std::vector<int>& types,
                        const std::vector<double>& direction, const TiltSolverOptions& opts = {});

}  // namespace bienayme::kernel
