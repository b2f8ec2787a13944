#include "bienayme/analysis/summary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bienayme/errors.hpp"
#include "bienayme/tree/operations.hpp"

namespace bienayme::analysis {

TreeSummary summarize(const tree::MultitypeTree& t, const std::vector<int>& lambda) {
  TreeSummary s;
  const int k = static_cast<int>(lambda.size());
  s.size = t.size();
  s.height = tree::height(t.shape);
  s.type_counts = tree::type_counts(t, k);
  s.weighted_size = tree::weighted_size(t, lambda);

  const auto b = tree::blobs(t);
  std::vector<int> frontier(static_cast<std::size_t>(t.size()), 0);
  std::vector<int> members(static_cast<std::size_t>(t.size()), 0);
  for (int v = 1; v < t.size(); ++v) {
    const auto uv = static_cast<std::size_t>(v);
    if (t.types[uv] == 0)
      ++frontier[static_cast<std::size_t>(b.owner[static_cast<std::size_t>(t.shape.parent(v))])];
    else
      ++members[static_cast<std::size_t>(b.owner[uv])];
  }
  for (int x : b.roots) {
    const auto ux = static_cast<std::size_t>(x);
    const auto d = static_cast<std::size_t>(frontier[ux]);
    if (s.reduced_degrees.size() <= d) s.reduced_degrees.resize(d + 1, 0);
    ++s.reduced_degrees[d];
    s.reduced_max_outdegree = std::max(s.reduced_max_outdegree, frontier[ux]);
    s.flat_max_outdegree = std::max(s.flat_max_outdegree, frontier[ux] + members[ux]);
    s.largest_blob = std::max(s.largest_blob, 1 + members[ux]);
  }
  return s;
}

namespace {

std::int64_t common_n(const std::vector<TreeSummary>& samples) {
  if (samples.empty()) throw Error(ErrorKind::kInsufficientData, "no replicates");
  const auto n = samples.front().weighted_size;
  for (const auto& s : samples)
    if (s.weighted_size != n)
      throw Error(ErrorKind::kMixedConditioning,
                  "replicates conditioned on " + std::to_string(n) + " and " + std::to_string(s.weighted_size));
  return n;
}

StatReport banded(std::string name, const std::vector<double>& xs, double target, double se_mult, double allowance) {
  const auto m = mean_se(xs);
  StatReport r;
  r.name = std::move(name);
  r.estimate = m.mean;
  r.se = m.se;
  r.replicates = static_cast<std::int64_t>(xs.size());
  r.target = target;
  r.band = se_mult * m.se + allowance;
  r.pass = std::abs(m.mean - target) <= r.band;
  return r;
}

}  // namespace

std::vector<StatReport> concentration_report(const std::vector<TreeSummary>& samples,
                                             const ConcentrationTargets& targets,
                                             const ConcentrationOptions& opts) {
  const auto n = common_n(samples);
  const double nd = static_cast<double>(n);
  const auto reps = static_cast<std::int64_t>(samples.size());
  std::vector<StatReport> out;

  // (i)
  const double window = std::pow(nd, 0.5 + opts.delta);
  std::int64_t inside = 0;
  for (const auto& s : samples)
    inside += std::abs(static_cast<double>(s.type_counts[0]) - nd / targets.c1) <= window;
  StatReport first;
  first.name = "type1_count_window_rate";
  first.estimate = static_cast<double>(inside) / static_cast<double>(reps);
  const auto wi = wilson_interval(inside, reps);
  first.se = (wi.hi - wi.lo) / (2.0 * 1.96);
  first.replicates = reps;
  first.target = 1.0;
  first.band = 1.0 - opts.min_pass_rate;
  first.pass = first.estimate >= opts.min_pass_rate;
  out.push_back(first);

  // (ii) N_d / n against P(xi~_1 = d) / c1. Counts move in steps of 1, so a
  // lattice allowance of 2 target / n is added to the SE band.
  std::size_t dmax = targets.type0_pmf.size();
  for (const auto& s : samples) dmax = std::max(dmax, s.reduced_degrees.size());
  for (std::size_t d = 0; d < dmax; ++d) {
    const double target = d < targets.type0_pmf.size() ? targets.type0_pmf[d] / targets.c1 : 0.0;
    std::vector<double> xs;
    xs.reserve(samples.size());
    bool seen = false;
    for (const auto& s : samples) {
      const double v = d < s.reduced_degrees.size() ? static_cast<double>(s.reduced_degrees[d]) : 0.0;
      seen = seen || v > 0;
      xs.push_back(v / nd);
    }
    if (!seen && target < 1e-6) continue;
    out.push_back(banded("reduced_degree_freq_d" + std::to_string(d), xs, target, opts.se_multiplier,
                         2.0 * target / nd));
  }

  // (iii)
  const double bound = opts.outdegree_log_factor * std::log(nd);
  int worst = 0;
  std::int64_t ok = 0;
  for (const auto& s : samples) {
    worst = std::max(worst, s.reduced_max_outdegree);
    ok += s.reduced_max_outdegree <= bound;
  }
  StatReport third;
  third.name = "reduced_max_outdegree";
  third.estimate = worst;
  third.replicates = reps;
  third.target = bound;
  third.pass = ok == reps;
  out.push_back(third);

  // (iv) c1 sum d^2 N_d / n against E[xi~_1^2].
  std::vector<double> xs;
  for (const auto& s : samples) {
    double acc = 0.0;
    for (std::size_t d = 0; d < s.reduced_degrees.size(); ++d)
      acc += static_cast<double>(d * d) * static_cast<double>(s.reduced_degrees[d]);
    xs.push_back(targets.c1 * acc / nd);
  }
  out.push_back(banded("second_moment_functional", xs, targets.second_moment, opts.se_multiplier,
                       2.0 * targets.second_moment / nd));
  return out;
}

std::vector<StatReport> largest_blob_and_outdegree(const std::vector<TreeSummary>& samples, double log_factor) {
  const auto n = common_n(samples);
  const double ln = std::log(static_cast<double>(std::max<std::int64_t>(n, 2)));
  const auto reps = static_cast<std::int64_t>(samples.size());
  std::vector<double> delta, blob;
  std::int64_t ordered = 0, bounded = 0;
  for (const auto& s : samples) {
    delta.push_back(s.flat_max_outdegree / ln);
    blob.push_back(s.largest_blob / ln);
    ordered += s.largest_blob <= s.flat_max_outdegree + 1;
    bounded += s.flat_max_outdegree <= log_factor * ln;
  }
  std::vector<StatReport> out;
  auto ratio = [&](const char* name, const std::vector<double>& xs, bool pass) {
    const auto m = mean_se(xs);
    StatReport r;
    r.name = name;
    r.estimate = m.mean;
    r.se = m.se;
    r.replicates = reps;
    r.target = log_factor;
    r.pass = pass;
    out.push_back(r);
  };
  ratio("max_outdegree_over_log_n", delta, bounded == reps);
  ratio("largest_blob_over_log_n", blob, true);
  StatReport r;
  r.name = "blob_bounded_by_outdegree_rate";
  r.estimate = static_cast<double>(ordered) / static_cast<double>(reps);
  r.replicates = reps;
  r.target = 1.0;
  r.pass = ordered == reps;
  out.push_back(r);
  return out;
}

}  // namespace bienayme::analysis
