#include "bienayme/analysis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/math/special_functions/gamma.hpp>

#include "bienayme/errors.hpp"

namespace bienayme::analysis {

void write_reports_csv(std::ostream& out, const std::vector<StatReport>& reports) {
  out << "statistic,estimate,se,target,pass\n";
  for (const auto& r : reports)
    out << r.name << ',' << r.estimate << ',' << r.se << ',' << r.target << ',' << (r.pass ? 1 : 0) << '\n';
}

MeanSe mean_se(const std::vector<double>& xs) {
  if (xs.empty()) throw Error(ErrorKind::kInsufficientData, "no replicates");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double chi_square_sf(double statistic, double dof) {
  if (dof <= 0.0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

ChiSquare chi_square_gof(const std::vector<std::int64_t>& observed, const std::vector<double>& probs,
                         double min_expected) {
  if (observed.size() != probs.size()) throw Error(ErrorKind::kInvalidArgument, "category count mismatch");
  std::int64_t total = 0;
  for (auto o : observed) total += o;
  if (total == 0) throw Error(ErrorKind::kInsufficientData, "no observations");
  double psum = 0.0;
  for (double p : probs) psum += p;
  // Sort categories by expected count and pool the small ones together.
  std::vector<std::size_t> idx(probs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return probs[a] < probs[b]; });
  std::vector<std::pair<double, double>> bins;  // (observed, expected)
  double po = 0.0, pe = 0.0;
  for (std::size_t i : idx) {
    const double e = static_cast<double>(total) * probs[i] / psum;
    if (e < min_expected || pe > 0.0) {
      po += static_cast<double>(observed[i]);
      pe += e;
      if (pe >= min_expected) {
        bins.emplace_back(po, pe);
        po = pe = 0.0;
      }
    } else {
      bins.emplace_back(static_cast<double>(observed[i]), e);
    }
  }
  if (pe > 0.0 || po > 0.0) {
    if (bins.empty())
      bins.emplace_back(po, pe);
    else {
      bins.back().first += po;
      bins.back().second += pe;
    }
  }
  ChiSquare out;
  out.bins = static_cast<int>(bins.size());
  for (const auto& [o, e] : bins) {
    if (e <= 0.0) {
      if (o > 0.0) out.statistic = INFINITY;
      continue;
    }
    out.statistic += (o - e) * (o - e) / e;
  }
  out.dof = out.bins - 1;
  out.p_value = std::isfinite(out.statistic) ? chi_square_sf(out.statistic, out.dof) : 0.0;
  return out;
}

ChiSquare chi_square_two_sample(const std::map<std::string, std::int64_t>& a,
                                const std::map<std::string, std::int64_t>& b, double min_expected) {
  std::set<std::string> keys;
  for (const auto& [k, v] : a) keys.insert(k);
  for (const auto& [k, v] : b) keys.insert(k);
  double na = 0.0, nb = 0.0;
  for (const auto& [k, v] : a) na += static_cast<double>(v);
  for (const auto& [k, v] : b) nb += static_cast<double>(v);
  if (na == 0.0 || nb == 0.0) throw Error(ErrorKind::kInsufficientData, "empty sample");
  struct Cell {
    double a, b;
  };
  std::vector<Cell> cells;
  for (const auto& k : keys) {
    auto ia = a.find(k);
    auto ib = b.find(k);
    cells.push_back({ia == a.end() ? 0.0 : static_cast<double>(ia->second),
                     ib == b.end() ? 0.0 : static_cast<double>(ib->second)});
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) { return x.a + x.b < y.a + y.b; });
  const double fa = na / (na + nb), fb = nb / (na + nb);
  auto small = [&](const Cell& c) { return (c.a + c.b) * std::min(fa, fb) < min_expected; };
  std::vector<Cell> bins;
  Cell pool{0.0, 0.0};
  for (const auto& c : cells) {
    if (small(c) || pool.a + pool.b > 0.0) {
      pool.a += c.a;
      pool.b += c.b;
      if (!small(pool)) {
        bins.push_back(pool);
        pool = {0.0, 0.0};
      }
    } else {
      bins.push_back(c);
    }
  }
  if (pool.a + pool.b > 0.0) {
    if (bins.empty())
      bins.push_back(pool);
    else {
      bins.back().a += pool.a;
      bins.back().b += pool.b;
    }
  }
  ChiSquare out;
  out.bins = static_cast<int>(bins.size());
  for (const auto& c : bins) {
    const double t = c.a + c.b;
    const double ea = t * fa, eb = t * fb;
    out.statistic += (c.a - ea) * (c.a - ea) / ea + (c.b - eb) * (c.b - eb) / eb;
  }
  out.dof = out.bins - 1;
  out.p_value = chi_square_sf(out.statistic, out.dof);
  return out;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(ErrorKind::kInsufficientData, "no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  // Walk over groups of tied values; the empirical CDF jumps from first/n to
  // (last+1)/n at each group.
  for (std::size_t first = 0; first < samples.size();) {
    std::size_t last = first;
    while (last + 1 < samples.size() && samples[last + 1] == samples[first]) ++last;
    const double f = cdf(samples[first]);
    d = std::max({d, std::abs(static_cast<double>(last + 1) / n - f), std::abs(f - static_cast<double>(first) / n)});
    first = last + 1;
  }
  return d;
}

double lattice_cdf_discrepancy(std::vector<double> samples, double half_step,
                               const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(ErrorKind::kInsufficientData, "no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = cdf(samples.front() - half_step);
  for (std::size_t first = 0; first < samples.size();) {
    std::size_t last = first;
    while (last + 1 < samples.size() && samples[last + 1] == samples[first]) ++last;
    d = std::max(d, std::abs(static_cast<double>(last + 1) / n - cdf(samples[first] + half_step)));
    first = last + 1;
  }
  return d;
}

double total_variation(const std::map<std::string, std::int64_t>& a, const std::map<std::string, std::int64_t>& b) {
  double na = 0.0, nb = 0.0;
  for (const auto& [k, v] : a) na += static_cast<double>(v);
  for (const auto& [k, v] : b) nb += static_cast<double>(v);
  if (na == 0.0 || nb == 0.0) throw Error(ErrorKind::kInsufficientData, "empty sample");
  double tv = 0.0;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    tv += std::abs(static_cast<double>(v) / na - (it == b.end() ? 0.0 : static_cast<double>(it->second) / nb));
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) tv += static_cast<double>(v) / nb;
  return tv / 2.0;
}

}  // namespace bienayme::analysis
