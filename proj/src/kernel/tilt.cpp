#include "bienayme/kernel/tilt.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bienayme/errors.hpp"
#include "bienayme/kernel/spectral.hpp"

namespace bienayme::kernel {

namespace {

double log_weight(const Word& word, std::span<const double> theta) {
  double s = 0.0;
  for (int symbol : word) s += theta[static_cast<std::size_t>(symbol)];
  return s;
}

void check_theta(const OffspringFamily& family, std::span<const double> theta) {
  if (theta.size() != static_cast<std::size_t>(family.num_types()))
    throw Error(ErrorKind::kInvalidArgument, "theta must have one entry per type");
  for (double t : theta)
    if (!std::isfinite(t)) throw Error(ErrorKind::kInvalidArgument, "theta must be finite");
}

}  // namespace

OffspringFamily tilt(const OffspringFamily& family, std::span<const double> theta) {
  check_theta(family, theta);
  std::vector<OffspringLaw> laws;
  for (const auto& law : family.laws()) {
    double shift = -INFINITY;
    for (const auto& e : law.support()) shift = std::max(shift, log_weight(e.word, theta));
    std::vector<WordProb> support;
    double total = 0.0;
    for (const auto& e : law.support()) {
      const double p = e.prob * std::exp(log_weight(e.word, theta) - shift);
      support.push_back({e.word, p});
      total += p;
    }
    for (auto& e : support) e.prob /= total;
    laws.emplace_back(std::move(support), law.tail_mass_bound());
  }
  return OffspringFamily(family.K(), family.Kprime(), std::move(laws), family.lambda());
}

double generating_function(const OffspringLaw& law, std::span<const double> z) {
  double phi = 0.0;
  for (const auto& e : law.support()) {
    double term = e.prob;
    for (int symbol : e.word) term *= z[static_cast<std::size_t>(symbol)];
    phi += term;
  }
  return phi;
}

Eigen::MatrixXd tilted_mean_formula(const OffspringFamily& family, std::span<const double> theta) {
  check_theta(family, theta);
  const int n = family.num_types();
  std::vector<double> z(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) z[static_cast<std::size_t>(j)] = std::exp(theta[static_cast<std::size_t>(j)]);
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& law = family.law(i);
    const double phi = generating_function(law, z);
    for (int j = 0; j < n; ++j) {
      // d phi / d z_j = sum_w zeta(w) #_j w z^{counts - e_j}
      double dphi = 0.0;
      for (const auto& e : law.support()) {
        const int c = static_cast<int>(std::count(e.word.begin(), e.word.end(), j));
        if (c == 0) continue;
        double term = e.prob * c;
        bool skipped = false;
        for (int symbol : e.word) {
          if (symbol == j && !skipped) {
            skipped = true;
            continue;
          }
          term *= z[static_cast<std::size_t>(symbol)];
        }
        dphi += term;
      }
      out(i, j) = z[static_cast<std::size_t>(j)] * dphi / phi;
    }
  }
  return out;
}

namespace {

struct Residual {
  Eigen::VectorXd r;
  double radius = 0.0;
  Eigen::VectorXd left;
  double direction_error = 0.0;
  bool ok = false;
};

Residual evaluate(const OffspringFamily& family, const std::vector<int>& types,
                  const Eigen::VectorXd& target, const Eigen::VectorXd& theta) {
  Residual out;
  const auto n = theta.size();
  for (Eigen::Index i = 0; i < n; ++i)
    if (!std::isfinite(theta(i)) || std::abs(theta(i)) > 700.0) return out;
  const std::vector<double> th(theta.data(), theta.data() + n);
  const Eigen::MatrixXd a = tilted_mean_formula(family, th);
  if (!a.allFinite()) return out;
  try {
    out.radius = perron_right(a.topLeftCorner(family.K(), family.K())).value;
    Eigen::VectorXd left = perron_left(a).vector;
    const double head = left.head(family.K()).sum();
    if (!(head > 0.0)) return out;
    out.left = left / head;
  } catch (const Error&) {
    return out;
  }
  const auto m = static_cast<Eigen::Index>(types.size());
  Eigen::VectorXd restricted(m);
  for (Eigen::Index k = 0; k < m; ++k) restricted(k) = out.left(types[static_cast<std::size_t>(k)]);
  const double total = restricted.sum();
  if (!(total > 0.0)) return out;
  restricted /= total;
  out.r.resize(1 + m);
  out.r(0) = out.radius - 1.0;
  out.r.tail(m) = restricted - target;
  out.direction_error = ((restricted - target).array() / target.array()).abs().maxCoeff();
  out.ok = true;
  return out;
}

}  // namespace

TiltSolution solve_tilt(const OffspringFamily& family, const std::vector<int>& types,
                        const std::vector<double>& direction, const TiltSolverOptions& opts) {
  if (types.empty() || types.size() != direction.size())
    throw Error(ErrorKind::kInvalidArgument, "direction must have one entry per conditioned type");
  for (int t : types)
    if (t < 0 || t >= family.num_types())
      throw Error(ErrorKind::kInvalidArgument, "conditioned type out of range");
  for (double y : direction)
    if (!(y > 0.0) || !std::isfinite(y))
      throw Error(ErrorKind::kDegenerateDirection, "target direction must be strictly positive");

  const auto m = static_cast<Eigen::Index>(types.size());
  const Eigen::Index n = family.num_types();
  Eigen::VectorXd target(m);
  for (Eigen::Index k = 0; k < m; ++k) target(k) = direction[static_cast<std::size_t>(k)];
  target /= target.sum();

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double best_norm = INFINITY;
  Residual best;

  auto converged = [&](const Residual& r) {
    return r.ok && std::abs(r.radius - 1.0) < opts.radius_tol && r.direction_error < opts.direction_tol;
  };

  int total_iters = 0;
  for (int start = 0; start < opts.max_starts; ++start) {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
    if (start > 0)
      for (Eigen::Index j = 0; j < n; ++j) theta(j) = normal(rng);
    Residual current = evaluate(family, types, target, theta);
    if (!current.ok) continue;
    for (int iter = 0; iter < opts.max_newton_iters; ++iter, ++total_iters) {
      if (converged(current)) {
        TiltSolution sol;
        sol.theta.assign(theta.data(), theta.data() + n);
        sol.radius = current.radius;
        sol.left_vector = current.left;
        sol.direction_error = current.direction_error;
        sol.iterations = total_iters;
        sol.starts_used = start + 1;
        return sol;
      }
      Eigen::MatrixXd jac(current.r.size(), n);
      bool jac_ok = true;
      for (Eigen::Index j = 0; j < n && jac_ok; ++j) {
        Eigen::VectorXd plus = theta, minus = theta;
        plus(j) += opts.fd_step;
        minus(j) -= opts.fd_step;
        const Residual rp = evaluate(family, types, target, plus);
        const Residual rm = evaluate(family, types, target, minus);
        if (!rp.ok || !rm.ok) {
          jac_ok = false;
          break;
        }
        jac.col(j) = (rp.r - rm.r) / (2.0 * opts.fd_step);
      }
      if (!jac_ok) break;
      const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-current.r);
      if (!step.allFinite()) break;
      const double norm0 = current.r.norm();
      double scale = 1.0;
      bool improved = false;
      for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
        const Eigen::VectorXd trial = theta + scale * step;
        Residual next = evaluate(family, types, target, trial);
        if (next.ok && next.r.norm() < norm0) {
          theta = trial;
          current = std::move(next);
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    if (current.ok && current.r.norm() < best_norm) {
      best_norm = current.r.norm();
      best = current;
    }
  }
  std::ostringstream msg;
  msg << "tilt solver failed after " << opts.max_starts << " starts; best residual norm " << best_norm;
  if (best.ok) msg << " (rho = " << best.radius << ", direction error = " << best.direction_error << ")";
  throw Error(ErrorKind::kNoConvergence, msg.str());
}

}  // namespace bienayme::kernel
