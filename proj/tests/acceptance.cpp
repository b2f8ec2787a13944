// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance [criterion ...]     (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bienayme/analysis/crt.hpp"
#include "bienayme/analysis/feasibility.hpp"
#include "bienayme/analysis/stats.hpp"
#include "bienayme/analysis/summary.hpp"
#include "bienayme/analysis/tail.hpp"
#include "bienayme/errors.hpp"
#include "bienayme/kernel/family_io.hpp"
#include "bienayme/kernel/spectral.hpp"
#include "bienayme/kernel/tilt.hpp"
#include "bienayme/sampler/batch.hpp"
#include "bienayme/sampler/bienayme_tree.hpp"
#include "bienayme/sampler/degree_sequence.hpp"
#include "bienayme/sampler/exact.hpp"
#include "bienayme/sampler/flat_law.hpp"
#include "bienayme/tree/enumerate.hpp"
#include "bienayme/tree/io.hpp"
#include "bienayme/tree/operations.hpp"

using namespace bienayme;

namespace {

// Pinned tolerances and sizes.
constexpr double kConstTol = 1e-12;
constexpr double kPerronTol = 1e-10;
constexpr double kScalTol = 1e-9;
constexpr double kPMin = 1e-3;
constexpr int kRoundTripVertices = 8;
constexpr int kCycleSamples = 30000;
constexpr int kRotationLists = 10000;
constexpr int kExactVsRejection = 100000;
constexpr int kBlobSims = 100000;
constexpr double kSeMult = 4.0;
constexpr std::int64_t kConcN = 2000;
constexpr int kConcReps = 1000;
constexpr double kDelta = 0.1;
constexpr double kMinWindowRate = 0.99;
constexpr double kLogFactor = 20.0;
constexpr std::int64_t kTailN = 1000;
constexpr int kTailReps = 10000;
constexpr std::int64_t kGofN = 100000;
constexpr int kGofReps = 20000;
constexpr double kKsMonotype = 0.03;
constexpr double kKsTwoType = 0.05;
constexpr std::int64_t kOracleExcursions = 1000000;
constexpr std::int64_t kOracleHalfLength = 5000;
constexpr double kOracleTol = 0.005;
constexpr double kTiltTol = 1e-12;
constexpr double kSolveTol = 1e-8;
constexpr int kTvSamples = 100000;
constexpr double kTvTol = 0.02;
constexpr int kFeasibleVertices = 12;

const std::string kPresets = BIENAYME_PRESET_DIR;

kernel::OffspringFamily preset(const std::string& name) { return kernel::load_family(kPresets + "/" + name + ".json"); }

int threads() { return sampler::worker_threads(); }

struct Result {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::int64_t nearest_feasible(const kernel::OffspringFamily& f, std::int64_t n) {
  const auto fs = analysis::feasible_sizes(f, 256);
  for (std::int64_t d = 0;; ++d) {
    if (fs.contains(n - d)) return n - d;
    if (fs.contains(n + d)) return n + d;
  }
}

std::vector<tree::MultitypeTree> exact_batch(const kernel::OffspringFamily& f, std::int64_t n, int reps,
                                             std::uint64_t seed) {
  sampler::SampleRequest req;
  req.n = n;
  sampler::BatchSampler s(f, req);
  std::vector<tree::MultitypeTree> out;
  out.reserve(static_cast<std::size_t>(reps));
  for (auto& r : sampler::sample_batch(s, reps, seed, 0, threads())) out.push_back(std::move(*r.tree));
  return out;
}

// 1. Constants.
void crit1(Result& r) {
  const auto bin = kernel::summarize(preset("binary"));
  r.check(std::abs(bin.sigma2 - 1.0) <= kConstTol, "binary sigma^2");
  r.check(std::abs(bin.vectors.a(0) - 1.0) <= kConstTol, "binary a");
  r.check(std::abs(bin.c_scal - 0.5) <= kConstTol, "binary c_scal");
  const auto pois = kernel::summarize(preset("poisson_reducible"));
  r.check(std::abs(pois.vectors.a(0) - 1.0) <= kPerronTol && std::abs(pois.vectors.a(1) - 2.0) <= kPerronTol,
          "poisson a");
  r.check(std::abs(pois.c_scal - std::sqrt(3.0) / 2.0) <= kScalTol, "poisson c_scal");
  r.detail << std::setprecision(15) << "binary sigma2=" << bin.sigma2 << " c_scal=" << bin.c_scal
           << "; poisson a=(" << pois.vectors.a(0) << "," << pois.vectors.a(1) << ") c_scal=" << pois.c_scal;
}

// 2. Structural round trips.
void crit2(Result& r) {
  std::int64_t trees = 0, failures = 0;
  tree::for_each_multitype_tree(kRoundTripVertices, 2, [&](const tree::MultitypeTree& t) {
    ++trees;
    const auto f = tree::flatten(t);
    bool ok = tree::type_counts(f.flat, 2) == tree::type_counts(t, 2);
    ok = ok && tree::reduce(f.flat) == tree::reduce(t);
    ok = ok && tree::blow_up(f.flat, f.decoration).tree == t;
    failures += !ok;
  });
  r.check(failures == 0, "round trips");
  r.detail << trees << " trees, " << failures << " failures";
}

// 3. Cycle lemma.
void crit3(Result& r) {
  sampler::RngStream rng(3, 0);
  std::map<std::vector<int>, std::int64_t> counts;
  for (int i = 0; i < kCycleSamples; ++i) ++counts[sampler::sample_degree_sequence_tree({2, 1, 0, 0}, rng).parents()];
  std::set<std::vector<int>> all;
  for (const auto& t : tree::plane_trees(4)) {
    std::vector<int> d;
    for (int v = 0; v < t.size(); ++v) d.push_back(t.outdegree(v));
    std::sort(d.begin(), d.end());
    if (d == std::vector<int>{0, 0, 1, 2}) all.insert(t.parents());
  }
  std::vector<std::int64_t> obs;
  for (const auto& p : all) obs.push_back(counts.count(p) ? counts[p] : 0);
  const bool closed = counts.size() == all.size();
  const auto chi = analysis::chi_square_gof(obs, std::vector<double>(all.size(), 1.0 / static_cast<double>(all.size())));
  r.check(all.size() == 3 && closed, "support");
  r.check(chi.p_value > kPMin, "chi-square");

  std::mt19937_64 gen(33);
  std::int64_t exceptions = 0;
  for (int trial = 0; trial < kRotationLists; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 60);
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n - 1; ++k) ++deg[gen() % static_cast<std::size_t>(n)];
    int valid = 0;
    for (int s = 0; s < n; ++s) {
      long sum = 0;
      bool ok = true;
      for (int i = 0; i < n; ++i) {
        sum += deg[static_cast<std::size_t>((s + i) % n)] - 1;
        if (sum < 0 && i + 1 < n) ok = false;
      }
      valid += ok && sum == -1;
    }
    exceptions += valid != 1;
    try {
      const auto idx = sampler::cycle_lemma_rotation(deg);
      std::vector<int> rot(deg.begin() + static_cast<std::ptrdiff_t>(idx), deg.end());
      rot.insert(rot.end(), deg.begin(), deg.begin() + static_cast<std::ptrdiff_t>(idx));
      tree::PlaneTree::from_outdegrees(rot);
    } catch (const Error&) {
      ++exceptions;
    }
  }
  r.check(exceptions == 0, "rotation uniqueness");
  r.detail << "chi2=" << chi.statistic << " p=" << chi.p_value << "; " << kRotationLists << " lists, " << exceptions
           << " exceptions";
}

// 4. Exact vs rejection.
void crit4(Result& r) {
  double worst = 1.0;
  int tests = 0;
  for (const char* name : {"binary", "two_type"}) {
    const auto fam = preset(name);
    const auto fs = analysis::feasible_sizes(fam, 9);
    for (std::int64_t n = 1; n <= 9; ++n) {
      if (!fs.contains(n)) continue;
      ++tests;
      sampler::SampleRequest req;
      req.n = n;
      req.method = sampler::Method::kExact;
      sampler::BatchSampler ex(fam, req);
      req.method = sampler::Method::kRejection;
      sampler::BatchSampler rej(fam, req);
      std::map<std::string, std::int64_t> a, b;
      for (auto& x : sampler::sample_batch(ex, kExactVsRejection, 40 + static_cast<std::uint64_t>(n), 0, threads()))
        ++a[tree::to_text(*x.tree)];
      for (auto& x : sampler::sample_batch(rej, kExactVsRejection, 40 + static_cast<std::uint64_t>(n),
                                           kExactVsRejection, threads()))
        ++b[tree::to_text(*x.tree)];
      const auto chi = analysis::chi_square_two_sample(a, b);
      worst = std::min(worst, chi.p_value);
      if (chi.p_value <= kPMin) r.check(false, std::string(name) + " n=" + std::to_string(n));
    }
  }
  r.detail << tests << " (family, n) pairs, min p=" << worst;
}

// 5. Flattened means.
void crit5(Result& r) {
  for (const char* name : {"two_type", "poisson_reducible"}) {
    const auto fam = preset(name);
    const auto s = kernel::summarize(fam);
    sampler::WordSampler words(fam);
    sampler::SampleBudget budget;
    auto profiles = sampler::parallel_map(
        kBlobSims, 5, 0,
        [&](sampler::RngStream& rng, std::int64_t) { return sampler::sample_blob_profile(words, rng, budget); },
        threads());
    for (int i = 0; i < fam.num_types(); ++i) {
      std::vector<double> xs;
      for (const auto& p : profiles)
        if (p) xs.push_back((*p)[static_cast<std::size_t>(i)]);
      const auto m = analysis::mean_se(xs);
      const double target = s.vectors.a(i) / s.vectors.a(0);
      r.check(std::abs(m.mean - target) <= kSeMult * m.se, std::string(name) + " type " + std::to_string(i + 1));
      r.detail << name << " E[xi~_" << i + 1 << "]=" << m.mean << "+-" << m.se << " (target " << target << "); ";
    }
  }
}

// 6. Concentration.
void crit6(Result& r) {
  for (const char* name : {"binary", "two_type"}) {
    const auto fam = preset(name);
    const auto n = nearest_feasible(fam, kConcN);
    const auto trees = exact_batch(fam, n, kConcReps, 6);
    std::vector<analysis::TreeSummary> sums;
    for (const auto& t : trees) sums.push_back(analysis::summarize(t, fam.lambda()));
    sampler::FlatLaw law(fam);
    analysis::ConcentrationTargets targets;
    targets.c1 = kernel::summarize(fam).moments.c1;
    for (double p : law.type0_marginal()) targets.type0_pmf.push_back(p / law.coverage());
    targets.second_moment = law.second_moment(0);
    analysis::ConcentrationOptions opts;
    opts.delta = kDelta;
    opts.min_pass_rate = kMinWindowRate;
    opts.se_multiplier = kSeMult;
    opts.outdegree_log_factor = kLogFactor;
    auto reports = analysis::concentration_report(sums, targets, opts);
    auto blobs = analysis::largest_blob_and_outdegree(sums, kLogFactor);
    reports.insert(reports.end(), blobs.begin(), blobs.end());
    int failed = 0;
    for (const auto& x : reports) {
      if (!x.pass) {
        ++failed;
        r.check(false, std::string(name) + " " + x.name);
      }
    }
    r.detail << name << " n=" << n << ": " << reports.size() - static_cast<std::size_t>(failed) << "/" << reports.size()
             << " reports pass; ";
  }
}

// 7. Tail envelope.
void crit7(Result& r) {
  for (const char* name : {"binary", "two_type"}) {
    const auto fam = preset(name);
    const auto n = nearest_feasible(fam, kTailN);
    const auto trees = exact_batch(fam, n, kTailReps, 7);
    std::vector<int> heights;
    std::int64_t over = 0;
    for (const auto& t : trees) {
      heights.push_back(tree::height(t.shape));
      over += heights.back() > n;
    }
    const auto tc = analysis::tail_curve(heights, n);
    r.check(tc.dominates, std::string(name) + " envelope");
    r.check(over == 0, std::string(name) + " H <= n");
    r.detail << name << " n=" << n << ": C=" << tc.C << " c=" << tc.c << " fit points=" << tc.fit_points
             << " max H=" << tc.max_height << "; ";
  }
}

// 8. Height law against the excursion maximum.
void crit8(Result& r) {
  analysis::WalkOracleOptions w;
  w.excursions = kOracleExcursions;
  w.half_length = kOracleHalfLength;
  w.seed = 8;
  const auto walk = analysis::walk_excursion_heights(w, threads());
  const double half_step = 0.5 / std::sqrt(2.0 * static_cast<double>(kOracleHalfLength));
  const double oracle = analysis::lattice_cdf_discrepancy(walk, half_step,
                                                          [](double y) { return analysis::excursion_max_cdf(y); });
  r.check(oracle < kOracleTol, "oracle");
  r.detail << "oracle sup=" << oracle << "; ";

  struct Case {
    const char* name;
    std::vector<int> lambda;
    double threshold;
  };
  for (const Case& c : {Case{"binary", {1}, kKsMonotype}, Case{"two_type", {1, 0}, kKsTwoType}}) {
    const auto fam = preset(c.name).with_lambda(c.lambda);
    const auto n = nearest_feasible(fam, kGofN);
    const double c_scal = kernel::summarize(fam).c_scal;
    sampler::SampleRequest req;
    req.n = n;
    sampler::BatchSampler s(fam, req);
    const auto heights = sampler::parallel_map(
        kGofReps, 80, 0, [&](sampler::RngStream& rng, std::int64_t) { return tree::height(s.draw(rng).tree->shape); },
        threads());
    const auto g = analysis::crt_height_gof(heights, n, c_scal, c.threshold, kGofReps);
    r.check(g.pass, c.name);
    r.detail << c.name << " n=" << n << " KS=" << g.ks << " (< " << c.threshold << "); ";
  }
}

// 9. Tilting.
void crit9(Result& r) {
  const auto two = preset("two_type");
  const std::vector<double> zero(2, 0.0);
  const auto same = kernel::tilt(two, zero);
  double id = 0.0;
  for (int i = 0; i < two.num_types(); ++i)
    for (const auto& wp : two.law(i).support()) id = std::max(id, std::abs(same.law(i).prob_of(wp.word) - wp.prob));
  r.check(id <= kTiltTol, "identity");

  std::mt19937_64 gen(9);
  std::normal_distribution<double> normal(0.0, 0.7);
  double worst = 0.0;
  for (const char* name : {"two_type", "poisson_reducible", "binary"}) {
    const auto fam = preset(name);
    for (int k = 0; k < 34; ++k) {
      std::vector<double> theta;
      for (int i = 0; i < fam.num_types(); ++i) theta.push_back(normal(gen));
      const Eigen::MatrixXd diff = kernel::mean_matrix(kernel::tilt(fam, theta)) - kernel::tilted_mean_formula(fam, theta);
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
  }
  r.check(worst <= kTiltTol, "mean formula");

  const auto sol = kernel::solve_tilt(preset("poisson2"), {0}, {1.0});
  r.check(std::abs(sol.theta[0] + std::log(2.0)) <= kSolveTol, "Poisson(2) solve");

  sampler::WordSampler base(two);
  const std::vector<double> theta{0.4, -0.3};
  sampler::WordSampler tilted(kernel::tilt(two, theta));
  sampler::SampleBudget budget;
  const std::vector<int> types{0, 1};
  const std::vector<std::int64_t> targets{5, 3};
  auto draw = [&](const sampler::WordSampler& w, std::uint64_t first) {
    std::map<std::string, std::int64_t> counts;
    for (auto& k : sampler::parallel_map(
             kTvSamples, 9, first,
             [&](sampler::RngStream& rng, std::int64_t) {
               return tree::to_text(sampler::sample_by_type(w, types, targets, rng, budget));
             },
             threads()))
      ++counts[k];
    return counts;
  };
  const auto a = draw(base, 0);
  const auto b = draw(tilted, kTvSamples);
  const double tv = analysis::total_variation(a, b);
  r.check(tv < kTvTol, "tilt invariance");
  r.detail << "identity err=" << id << " formula err=" << worst << " theta=" << std::setprecision(12) << sol.theta[0]
           << std::setprecision(6) << " TV=" << tv << " over " << std::max(a.size(), b.size()) << " trees";
}

// 10. Feasibility lattice.
void crit10(Result& r) {
  for (const char* name : {"binary", "ternary", "two_type", "poisson_reducible", "poisson2"}) {
    const auto fam = preset(name);
    const auto dp = analysis::feasible_sizes(fam, kFeasibleVertices);
    const auto brute = analysis::feasible_sizes_bruteforce(fam, kFeasibleVertices);
    int mismatches = 0;
    for (int n = 0; n <= kFeasibleVertices; ++n) mismatches += dp.contains(n) != (brute.count(n) > 0);
    r.check(mismatches == 0, name);
    const auto wide = analysis::feasible_sizes(fam, 64);
    r.detail << name << " d=" << wide.period << " offset=" << wide.offset << "; ";
  }
  r.check(analysis::feasible_sizes(preset("binary"), 64).period == 2, "binary period");
  r.check(analysis::feasible_sizes(preset("ternary"), 64).period == 1, "ternary period");
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<void(Result&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "constants", 1.0, crit1},
      {2, "structural round trips", 30.0, crit2},
      {3, "cycle-lemma uniformity", 10.0, crit3},
      {4, "exact vs rejection", 300.0, crit4},
      {5, "flattened means", 60.0, crit5},
      {6, "concentration", 600.0, crit6},
      {7, "tail envelope", 900.0, crit7},
      {8, "height law vs excursion maximum", 3600.0, crit8},
      {9, "tilting", 120.0, crit9},
      {10, "feasibility lattice", 30.0, crit10},
  };
  std::set<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.insert(std::atoi(argv[i]));

  std::cout << "threads: " << threads() << std::endl;
  bool ok = true;
  for (const auto& c : all) {
    if (!chosen.empty() && !chosen.count(c.id)) continue;
    Result r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(r);
    } catch (const std::exception& e) {
      r.check(false, e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.check(secs <= c.budget_seconds, "runtime");
    ok = ok && r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << "): " << r.detail.str()
              << " [" << std::fixed << std::setprecision(1) << secs << " s / " << c.budget_seconds << " s]"
              << std::defaultfloat << std::setprecision(6) << std::endl;
  }
  return ok ? 0 : 1;
}
