#include "bienayme/kernel/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bienayme/errors.hpp"

namespace bienayme::kernel {

const char* to_string(Criticality c) {
  switch (c) {
    case Criticality::kSubcritical: return "subcritical";
    case Criticality::kCritical: return "critical";
    case Criticality::kSupercritical: return "supercritical";
  }
  return "?";
}

namespace {

constexpr int kSquarings = 6;

DominantPair dominant(const Eigen::MatrixXd& a, const PowerIterationOptions& opts) {
  const auto n = a.rows();
  if (n == 0 || a.cols() != n) throw Error(ErrorKind::kInvalidArgument, "matrix must be square");
  if ((a.array() < 0.0).any()) throw Error(ErrorKind::kInvalidArgument, "matrix must be nonnegative");
  const Eigen::MatrixXd shifted = a + Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd power = shifted / shifted.maxCoeff();
  for (int s = 0; s < kSquarings; ++s) {
    power = power * power;
    power /= power.maxCoeff();
  }
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  double previous = -1.0;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    x = power * x;
    x /= x.cwiseAbs().maxCoeff();
    const Eigen::VectorXd bx = shifted * x;
    const double mu = bx.dot(x) / x.dot(x);
    const double residual = (bx - mu * x).cwiseAbs().maxCoeff();
    if (residual <= opts.tolerance * std::max(1.0, mu) &&
        std::abs(mu - previous) <= opts.tolerance * std::max(1.0, mu)) {
      return {mu - 1.0, x};
    }
    previous = mu;
  }
  throw Error(ErrorKind::kNonConvergence,
              "power iteration did not converge in " + std::to_string(opts.max_iters) + " iterations");
}

std::vector<std::vector<char>> closure(const Eigen::MatrixXd& a) {
  const auto n = static_cast<std::size_t>(a.rows());
  // reach[i][j]: a path of length >= 1 from i to j.
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      reach[i][j] = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;
  return reach;
}

// Max over strongly connected components, so reducible matrices with Jordan
// blocks at the top eigenvalue never reach the power iteration.
double component_radius(const Eigen::MatrixXd& a, const PowerIterationOptions& opts) {
  const auto n = static_cast<std::size_t>(a.rows());
  const auto reach = closure(a);
  std::vector<char> done(n, 0);
  double radius = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (done[i]) continue;
    std::vector<Eigen::Index> comp{static_cast<Eigen::Index>(i)};
    done[i] = 1;
    for (std::size_t j = i + 1; j < n; ++j)
      if (!done[j] && reach[i][j] && reach[j][i]) {
        comp.push_back(static_cast<Eigen::Index>(j));
        done[j] = 1;
      }
    if (!reach[i][i]) continue;
    const auto m = static_cast<Eigen::Index>(comp.size());
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < m; ++c) sub(r, c) = a(comp[static_cast<std::size_t>(r)], comp[static_cast<std::size_t>(c)]);
    radius = std::max(radius, dominant(sub, opts).value);
  }
  return radius;
}

}  // namespace

DominantPair perron_right(const Eigen::MatrixXd& a, const PowerIterationOptions& opts) {
  return dominant(a, opts);
}

DominantPair perron_left(const Eigen::MatrixXd& a, const PowerIterationOptions& opts) {
  return dominant(a.transpose(), opts);
}

bool pattern_irreducible(const Eigen::MatrixXd& a) {
  for (const auto& row : closure(a))
    for (char r : row)
      if (!r) return false;
  return true;
}

SpectralProfile classify(const Eigen::MatrixXd& mean, int K, bool require_irreducible,
                         const PowerIterationOptions& opts) {
  if (K < 1 || K > mean.rows() || mean.rows() != mean.cols())
    throw Error(ErrorKind::kInvalidArgument, "bad critical block size");
  SpectralProfile p;
  p.mean_matrix = mean;
  p.K = K;
  p.Kprime = static_cast<int>(mean.rows()) - K;
  const Eigen::MatrixXd m = mean.topLeftCorner(K, K);
  p.irreducible_on_critical_block = pattern_irreducible(m);
  if (require_irreducible && !p.irreducible_on_critical_block)
    throw Error(ErrorKind::kReducibleCriticalBlock, "critical block of the mean matrix is reducible");
  p.radius = component_radius(m, opts);
  if (p.Kprime > 0) {
    p.subcritical_radius = component_radius(mean.bottomRightCorner(p.Kprime, p.Kprime), opts);
    p.subcritical_block_ok = p.subcritical_radius < 1.0 - opts.subcritical_margin;
    p.block_triangular = (mean.bottomLeftCorner(p.Kprime, K).array() == 0.0).all();
  }
  if (p.radius < 1.0 - opts.critical_band)
    p.classification = Criticality::kSubcritical;
  else if (p.radius > 1.0 + opts.critical_band)
    p.classification = Criticality::kSupercritical;
  else
    p.classification = Criticality::kCritical;
  return p;
}

PerronVectors perron_vectors(const SpectralProfile& profile) {
  if (profile.classification != Criticality::kCritical)
    throw Error(ErrorKind::kNotCritical, std::string("family is ") + to_string(profile.classification) +
                                             " (rho = " + std::to_string(profile.radius) + ")");
  if (!profile.irreducible_on_critical_block)
    throw Error(ErrorKind::kReducibleCriticalBlock, "critical block is reducible");
  if (!profile.block_triangular)
    throw Error(ErrorKind::kInvalidArgument, "subcritical types must not produce critical types");
  if (!profile.subcritical_block_ok)
    throw Error(ErrorKind::kSingularSubcriticalBlock,
                "subcritical block has spectral radius " + std::to_string(profile.subcritical_radius));
  const int K = profile.K;
  const int Kp = profile.Kprime;
  const Eigen::MatrixXd m = profile.critical_block();

  PerronVectors out;
  Eigen::VectorXd left = perron_left(m).vector;
  left /= left.sum();
  Eigen::VectorXd right = perron_right(m).vector;
  right /= left.dot(right);

  out.a = Eigen::VectorXd::Zero(K + Kp);
  out.a.head(K) = left;
  if (Kp > 0) {
    const Eigen::MatrixXd s = profile.mean_matrix.topRightCorner(K, Kp);
    const Eigen::MatrixXd i_minus = Eigen::MatrixXd::Identity(Kp, Kp) -
                                    profile.mean_matrix.bottomRightCorner(Kp, Kp);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(i_minus.transpose());
    if (!lu.isInvertible() || lu.rcond() < 1e-12)
      throw Error(ErrorKind::kSingularSubcriticalBlock, "I - M' is numerically singular");
    const Eigen::VectorXd rhs = (left.transpose() * s).transpose();
    out.a.tail(Kp) = lu.solve(rhs);
  }
  out.b = right;
  out.left_residual =
      (out.a.transpose() * profile.mean_matrix - out.a.transpose()).cwiseAbs().maxCoeff();
  out.right_residual = (m * right - right).cwiseAbs().maxCoeff();
  return out;
}

std::vector<Eigen::MatrixXd> q_matrices(const ProjectedLaw& mu, int K) {
  std::vector<Eigen::MatrixXd> q;
  for (int i = 0; i < K; ++i) {
    Eigen::MatrixXd qi = Eigen::MatrixXd::Zero(K, K);
    for (const auto& [z, p] : mu.per_type.at(static_cast<std::size_t>(i))) {
      for (int j = 0; j < K; ++j) {
        const double zj = z[static_cast<std::size_t>(j)];
        for (int k = 0; k < K; ++k) {
          const double zk = z[static_cast<std::size_t>(k)];
          qi(j, k) += p * (j == k ? zj * (zj - 1.0) : zj * zk);
        }
      }
    }
    q.push_back(std::move(qi));
  }
  return q;
}

double sigma2(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
              const std::vector<Eigen::MatrixXd>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += a(static_cast<Eigen::Index>(i)) * b.dot(q[i] * b);
  return s;
}

FamilySummary summarize(const OffspringFamily& family) {
  FamilySummary s;
  s.profile = classify(mean_matrix(family), family.K(), /*require_irreducible=*/true);
  s.vectors = perron_vectors(s.profile);
  s.sigma2 = sigma2(s.vectors.a, s.vectors.b, q_matrices(projection(family), family.K()));
  const double sigma = std::sqrt(std::max(0.0, s.sigma2));
  double weighted = 0.0;
  for (int i = 0; i < family.num_types(); ++i)
    weighted += family.lambda()[static_cast<std::size_t>(i)] * s.vectors.a(i);
  s.c_scal = 0.5 * sigma * std::sqrt(weighted);
  s.c_scal_by_type = 0.5 * sigma;
  const double a1 = s.vectors.a(0);
  for (int i = 0; i < family.num_types(); ++i) s.moments.means.push_back(s.vectors.a(i) / a1);
  for (int i = 0; i < family.num_types(); ++i)
    s.moments.c1 += family.lambda()[static_cast<std::size_t>(i)] * s.moments.means[static_cast<std::size_t>(i)];
  return s;
}

double scaling_constant(const OffspringFamily& family, ScalingMode mode) {
  const auto s = summarize(family);
  return mode == ScalingMode::kByType ? s.c_scal_by_type : s.c_scal;
}

FlattenedMoments flattened_moments(const OffspringFamily& family) {
  return summarize(family).moments;
}

}  // namespace bienayme::kernel
