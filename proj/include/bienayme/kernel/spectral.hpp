#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bienayme/kernel/offspring.hpp"

namespace bienayme::kernel {

enum class Criticality { kSubcritical, kCritical, kSupercritical };

const char* to_string(Criticality c);

struct PowerIterationOptions {
  int max_iters = 200;
  double tolerance = 1e-12;
  double critical_band = 1e-9;
  double subcritical_margin = 1e-10;
};

struct DominantPair {
  double value = 0.0;
  Eigen::VectorXd vector;  // nonnegative, unit max-norm
};

// Perron root and vector of a nonnegative square matrix. Iterates on A + I
// (which is aperiodic for any nonnegative A) after repeated squaring, so
// periodic matrices such as permutations converge. Throws NonConvergence when
// the Rayleigh-quotient test fails within max_iters.
DominantPair perron_right(const Eigen::MatrixXd& a, const PowerIterationOptions& opts = {});
DominantPair perron_left(const Eigen::MatrixXd& a, const PowerIterationOptions& opts = {});

// Strong connectivity of the positivity pattern (transitive closure).
bool pattern_irreducible(const Eigen::MatrixXd& a);

struct SpectralProfile {
  Eigen::MatrixXd mean_matrix;  // (K+K') x (K+K')
  int K = 0;
  int Kprime = 0;
  double radius = 0.0;              // spectral radius of the critical block M
  double subcritical_radius = 0.0;  // spectral radius of M' (0 when K' = 0)
  Criticality classification = Criticality::kSubcritical;
  bool irreducible_on_critical_block = false;
  bool subcritical_block_ok = true;
  bool block_triangular = true;  // no edges from subcritical types back into [K]

  Eigen::MatrixXd critical_block() const { return mean_matrix.topLeftCorner(K, K); }
};

// requireIrreducible = true throws ReducibleCriticalBlock when M is reducible.
SpectralProfile classify(const Eigen::MatrixXd& mean, int K, bool require_irreducible = false,
                         const PowerIterationOptions& opts = {});

struct PerronVectors {
  Eigen::VectorXd a;  // length K+K', sum of the first K entries is 1
  Eigen::VectorXd b;  // length K, sum_i a_i b_i = 1
  double left_residual = 0.0;
  double right_residual = 0.0;
};

// Left vector on the critical block by power iteration; on the subcritical
// block a' = a S (I - M')^{-1} by an LU solve. Throws NotCritical,
// ReducibleCriticalBlock or SingularSubcriticalBlock.
PerronVectors perron_vectors(const SpectralProfile& profile);

// Q^(i) for i < K, restricted to the critical types.
std::vector<Eigen::MatrixXd> q_matrices(const ProjectedLaw& mu, int K);

double sigma2(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
              const std::vector<Eigen::MatrixXd>& q);

enum class ScalingMode { kLinearCombination, kByType };

double scaling_constant(const OffspringFamily& family, ScalingMode mode);

struct FlattenedMoments {
  std::vector<double> means;  // E[xi~_i] = a_i / a_1 over all K+K' types
  double c1 = 0.0;            // sum_i lambda_i E[xi~_i]
};

FlattenedMoments flattened_moments(const OffspringFamily& family);

// Everything the inspect command prints, computed once.
struct FamilySummary {
  SpectralProfile profile;
  PerronVectors vectors;
  double sigma2 = 0.0;
  double c_scal = 0.0;
  double c_scal_by_type = 0.0;
  FlattenedMoments moments;
};

FamilySummary summarize(const OffspringFamily& family);

}  // namespace bienayme::kernel
