#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bienayme/analysis/contour.hpp"
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
#include "bienayme/sampler/flat_law.hpp"
#include "bienayme/tree/io.hpp"
#include "bienayme/tree/operations.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bienayme;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kFailed = 1, kConfig = 2, kInfeasible = 3, kBudget = 4, kSolver = 5 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::kInfeasible: return kInfeasible;
    case ErrorKind::kBudgetExhausted:
    case ErrorKind::kTruncationTooCoarse: return kBudget;
    case ErrorKind::kNoConvergence:
    case ErrorKind::kDegenerateDirection:
    case ErrorKind::kNonConvergence: return kSolver;
    default: return kConfig;
  }
}

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

template <class T>
std::vector<T> parse_csv(const std::string& text, const char* flag) {
  std::vector<T> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !is.eof())
      throw Error(ErrorKind::kConfig, std::string(flag) + ": cannot parse '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> one_based_types(const std::string& text, int num_types, const char* flag) {
  std::vector<int> out;
  for (int t : parse_csv<int>(text, flag)) {
    if (t < 1 || t > num_types)
      throw Error(ErrorKind::kConfig, std::string(flag) + ": type " + std::to_string(t) + " out of range");
    out.push_back(t - 1);
  }
  return out;
}

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json mat_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
  return a;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kConfig, "--out: cannot create '" + dir + "': " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::kConfig, "cannot write '" + path.string() + "'");
  return f;
}

struct Common {
  std::string family_path;
  std::string lambda;
  std::string out;

  kernel::OffspringFamily load() const {
    if (family_path.empty()) throw Error(ErrorKind::kConfig, "--family is required");
    auto f = kernel::load_family(family_path);
    if (!lambda.empty()) {
      auto l = parse_csv<int>(lambda, "--lambda");
      if (static_cast<int>(l.size()) != f.num_types())
        throw Error(ErrorKind::kConfig, "--lambda: expected " + std::to_string(f.num_types()) + " entries");
      f = f.with_lambda(std::move(l));
    }
    return f;
  }
};

// Feasibility of n from the lattice over [0, 256]; beyond that the periodic
// extension is used when it was detected, otherwise n is not rejected here.
enum class Feasible { kYes, kNo, kUnknown };

Feasible check_feasible(const kernel::OffspringFamily& f, std::int64_t n) {
  const auto fs = analysis::feasible_sizes(f, std::min<std::int64_t>(n, 256));
  if (n <= fs.N) return fs.contains(n) ? Feasible::kYes : Feasible::kNo;
  if (fs.periodic_tail) return fs.contains(n) ? Feasible::kYes : Feasible::kNo;
  return Feasible::kUnknown;
}

// ---- inspect ---------------------------------------------------------------

int cmd_inspect(const Common& c, bool as_json) {
  const auto family = c.load();
  const auto s = kernel::summarize(family);
  json j;
  j["K"] = family.K();
  j["Kprime"] = family.Kprime();
  j["lambda"] = family.lambda();
  j["family_hash"] = hex(kernel::family_hash(family));
  j["mean_matrix"] = mat_json(s.profile.mean_matrix);
  j["rho"] = s.profile.radius;
  j["subcritical_rho"] = s.profile.subcritical_radius;
  j["classification"] = kernel::to_string(s.profile.classification);
  j["a"] = vec_json(s.vectors.a);
  j["b"] = vec_json(s.vectors.b);
  j["sigma2"] = s.sigma2;
  j["c_scal"] = s.c_scal;
  j["c_scal_by_type"] = s.c_scal_by_type;
  j["flattened_means"] = s.moments.means;
  j["c1"] = s.moments.c1;
  if (as_json) {
    std::cout << std::setprecision(17) << j.dump(2) << "\n";
  } else {
    std::cout << std::setprecision(12);
    std::cout << "K = " << family.K() << ", K' = " << family.Kprime() << "\n";
    std::cout << "mean matrix:\n" << s.profile.mean_matrix << "\n";
    std::cout << "rho = " << s.profile.radius << " (" << kernel::to_string(s.profile.classification) << ")\n";
    if (family.Kprime() > 0) std::cout << "rho' = " << s.profile.subcritical_radius << "\n";
    std::cout << "a = " << s.vectors.a.transpose() << "\n";
    std::cout << "b = " << s.vectors.b.transpose() << "\n";
    std::cout << "sigma^2 = " << s.sigma2 << "\n";
    std::cout << "c_scal = " << s.c_scal << "\n";
    std::cout << "c_scal (by type) = " << s.c_scal_by_type << "\n";
    std::cout << "E[xi~] =";
    for (double m : s.moments.means) std::cout << " " << m;
    std::cout << "\nc1 = " << s.moments.c1 << "\n";
  }
  if (!c.out.empty()) {
    ensure_dir(c.out);
    open_out(fs::path(c.out) / "inspect.json") << std::setprecision(17) << j.dump(2) << "\n";
  }
  return kOk;
}

// ---- sample ----------------------------------------------------------------

struct SampleArgs {
  std::int64_t n = 0;
  std::int64_t replicates = 1;
  std::uint64_t seed = 1;
  std::string method = "exact";
  std::string types;
  std::string targets;
  int root_type = 1;
  int ell = 0;
  std::int64_t max_vertices = 1'000'000;
  std::int64_t max_attempts = 10'000'000;
  bool force = false;
  bool text = false;
  std::string replay;
};

sampler::SampleRequest make_request(const kernel::OffspringFamily& family, const SampleArgs& a) {
  sampler::SampleRequest r;
  r.method = sampler::parse_method(a.method);
  r.n = a.n;
  r.budget.max_vertices = a.max_vertices;
  r.budget.max_attempts = a.max_attempts;
  if (a.replicates < 1) throw Error(ErrorKind::kConfig, "--replicates must be positive");
  if (a.max_vertices < 1 || a.max_attempts < 1) throw Error(ErrorKind::kConfig, "budgets must be positive");
  switch (r.method) {
    case sampler::Method::kRejection:
    case sampler::Method::kExact:
      if (a.n < 1 && r.method == sampler::Method::kExact) throw Error(ErrorKind::kConfig, "--n must be positive");
      if (a.n < 0) throw Error(ErrorKind::kConfig, "--n must be nonnegative");
      if (!a.force && check_feasible(family, a.n) == Feasible::kNo)
        throw Error(ErrorKind::kInfeasible, "no tree has #_lambda = " + std::to_string(a.n) + " (use --force to try anyway)");
      break;
    case sampler::Method::kByType: {
      r.types = one_based_types(a.types, family.num_types(), "--types");
      r.targets = parse_csv<std::int64_t>(a.targets, "--targets");
      if (r.types.empty() || r.types.size() != r.targets.size())
        throw Error(ErrorKind::kConfig, "--types and --targets must have the same nonzero length");
      break;
    }
    case sampler::Method::kUnconditioned:
      if (a.root_type < 1 || a.root_type > family.num_types()) throw Error(ErrorKind::kConfig, "--root-type out of range");
      r.root_type = a.root_type - 1;
      break;
    case sampler::Method::kSpine:
      if (a.ell < 0) throw Error(ErrorKind::kConfig, "--ell must be nonnegative");
      r.ell = a.ell;
      break;
  }
  return r;
}

// Reads the parameters of a previous run back from its manifest.
void apply_manifest(const std::string& path, Common& c, SampleArgs& a, kernel::OffspringFamily& family) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "--replay: cannot open '" + path + "'");
  json m;
  try {
    in >> m;
    family = kernel::family_from_json(m.at("family"));
    a.method = m.at("method").get<std::string>();
    a.n = m.at("n").get<std::int64_t>();
    a.replicates = m.at("replicates").get<std::int64_t>();
    a.seed = m.at("seed").get<std::uint64_t>();
    a.types = m.value("types", "");
    a.targets = m.value("targets", "");
    a.root_type = m.value("root_type", 1);
    a.ell = m.value("ell", 0);
    a.max_vertices = m.at("budget").at("max_vertices").get<std::int64_t>();
    a.max_attempts = m.at("budget").at("max_attempts").get<std::int64_t>();
    a.force = m.value("force", false);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, "--replay: " + std::string(e.what()));
  }
  c.family_path = m.value("family_path", "");
}

int cmd_sample(Common c, SampleArgs a) {
  kernel::OffspringFamily family;
  if (!a.replay.empty())
    apply_manifest(a.replay, c, a, family);
  else
    family = c.load();
  if (c.out.empty()) throw Error(ErrorKind::kConfig, "--out is required");
  const auto request = make_request(family, a);
  ensure_dir(c.out);

  const auto t0 = std::chrono::steady_clock::now();
  sampler::BatchSampler batch(family, request);
  const auto reps = sampler::sample_batch(batch, a.replicates, a.seed, 0, sampler::worker_threads());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  auto bin = open_out(fs::path(c.out) / "trees.bin");
  std::ofstream txt;
  if (a.text) txt = open_out(fs::path(c.out) / "trees.txt");
  std::int64_t attempts = 0, overflows = 0, written = 0;
  json overflow_streams = json::array(), marks = json::array();
  for (std::size_t i = 0; i < reps.size(); ++i) {
    attempts += reps[i].stats.attempts;
    overflows += reps[i].stats.overflows;
    if (!reps[i].tree) {
      overflow_streams.push_back(i);
      continue;
    }
    tree::write_binary(bin, *reps[i].tree);
    if (a.text) txt << tree::to_text(*reps[i].tree) << "\n";
    if (request.method == sampler::Method::kSpine) marks.push_back(reps[i].mark);
    ++written;
  }

  json m;
  m["tool"] = "bienayme";
  m["version"] = kVersion;
  m["command"] = "sample";
  m["family_path"] = c.family_path;
  m["family"] = kernel::family_to_json(family);
  m["family_hash"] = hex(kernel::family_hash(family));
  m["lambda"] = family.lambda();
  m["method"] = a.method;
  m["n"] = a.n;
  m["types"] = a.types;
  m["targets"] = a.targets;
  m["root_type"] = a.root_type;
  m["ell"] = a.ell;
  m["force"] = a.force;
  m["seed"] = a.seed;
  m["stream_first"] = 0;
  m["stream_last"] = a.replicates - 1;
  m["replicates"] = a.replicates;
  m["budget"] = {{"max_vertices", a.max_vertices}, {"max_attempts", a.max_attempts}};
  m["trees_written"] = written;
  m["attempts"] = attempts;
  m["overflows"] = overflows;
  m["overflow_streams"] = overflow_streams;
  if (request.method == sampler::Method::kSpine) m["marks"] = marks;
  m["outputs"] = a.text ? json{"trees.bin", "trees.txt"} : json{"trees.bin"};
  open_out(fs::path(c.out) / "manifest.json") << m.dump(2) << "\n";
  std::cerr << "wrote " << written << " trees to " << c.out << " in " << std::fixed << std::setprecision(2) << secs
            << " s\n";
  return kOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::int64_t n = 0;
  std::int64_t replicates = 1000;
  std::uint64_t seed = 1;
  std::string method = "exact";
  std::string batch;
  std::string suites = "concentration,tail,gof,blobs";
  double delta = 0.1;
  double log_factor = 20.0;
  double ks_threshold = 0.03;
  int contours = 8;
  std::int64_t gof_min_replicates = 10000;
  std::int64_t tail_min_replicates = 1000;
};

struct SuiteLine {
  std::string suite;
  std::string check;
  bool pass;
  std::string detail;
};

int cmd_verify(const Common& c, const VerifyArgs& v) {
  const auto family = c.load();
  if (c.out.empty()) throw Error(ErrorKind::kConfig, "--out is required");
  const auto suites = parse_csv<std::string>(v.suites, "--suites");
  for (const auto& s : suites)
    if (s != "concentration" && s != "tail" && s != "gof" && s != "blobs")
      throw Error(ErrorKind::kConfig, "--suites: unknown suite '" + s + "'");
  auto wants = [&](const char* s) { return std::find(suites.begin(), suites.end(), s) != suites.end(); };
  const auto fam_summary = kernel::summarize(family);
  // Thresholds are fixed before any tree is looked at.
  if (wants("gof") && v.replicates < v.gof_min_replicates && v.batch.empty())
    throw Error(ErrorKind::kInsufficientData, "gof suite needs at least " + std::to_string(v.gof_min_replicates) +
                                                  " replicates, got " + std::to_string(v.replicates));
  if (wants("tail") && v.replicates < v.tail_min_replicates && v.batch.empty())
    throw Error(ErrorKind::kInsufficientData, "tail suite needs at least " + std::to_string(v.tail_min_replicates) +
                                                  " replicates, got " + std::to_string(v.replicates));
  ensure_dir(c.out);

  std::vector<tree::MultitypeTree> trees;
  if (!v.batch.empty()) {
    std::ifstream in(v.batch, std::ios::binary);
    if (!in) throw Error(ErrorKind::kConfig, "--batch: cannot open '" + v.batch + "'");
    while (auto t = tree::read_binary(in)) trees.push_back(std::move(*t));
  } else {
    SampleArgs a;
    a.n = v.n;
    a.method = v.method;
    const auto request = make_request(family, a);
    if (request.method != sampler::Method::kExact && request.method != sampler::Method::kRejection)
      throw Error(ErrorKind::kConfig, "--method must be exact or rejection for verify");
    sampler::BatchSampler batch(family, request);
    for (auto& r : sampler::sample_batch(batch, v.replicates, v.seed, 0, sampler::worker_threads()))
      trees.push_back(std::move(*r.tree));
  }
  if (trees.empty()) throw Error(ErrorKind::kInsufficientData, "no trees");

  std::vector<analysis::TreeSummary> summaries;
  std::vector<int> heights;
  for (const auto& t : trees) {
    summaries.push_back(analysis::summarize(t, family.lambda()));
    heights.push_back(summaries.back().height);
  }
  const auto n = summaries.front().weighted_size;

  std::vector<SuiteLine> lines;
  std::vector<analysis::StatReport> reports;
  if (wants("concentration")) {
    sampler::FlatLaw law(family);
    analysis::ConcentrationTargets targets;
    targets.c1 = fam_summary.moments.c1;
    for (double p : law.type0_marginal()) targets.type0_pmf.push_back(p / law.coverage());
    targets.second_moment = law.second_moment(0);
    analysis::ConcentrationOptions opts;
    opts.delta = v.delta;
    opts.outdegree_log_factor = v.log_factor;
    auto r = analysis::concentration_report(summaries, targets, opts);
    for (const auto& x : r) lines.push_back({"concentration", x.name, x.pass, ""});
    reports.insert(reports.end(), r.begin(), r.end());
  }
  if (wants("blobs")) {
    auto r = analysis::largest_blob_and_outdegree(summaries, v.log_factor);
    for (const auto& x : r) lines.push_back({"blobs", x.name, x.pass, ""});
    reports.insert(reports.end(), r.begin(), r.end());
  }
  if (!reports.empty()) {
    auto f = open_out(fs::path(c.out) / "concentration.csv");
    analysis::write_reports_csv(f, reports);
  }
  if (wants("tail")) {
    analysis::TailOptions to;
    to.min_replicates = static_cast<int>(v.tail_min_replicates);
    auto tc = analysis::tail_curve(heights, n, {}, to);
    auto f = open_out(fs::path(c.out) / "tail.csv");
    f << "x,survival,lo,hi,envelope\n" << std::setprecision(10);
    for (std::size_t k = 0; k < tc.x.size(); ++k)
      f << tc.x[k] << "," << tc.survival[k] << "," << tc.lo[k] << "," << tc.hi[k] << "," << tc.envelope[k] << "\n";
    std::ostringstream d;
    d << "C=" << tc.C << " c=" << tc.c << " rms=" << tc.fit_residual;
    lines.push_back({"tail", "envelope_dominates", tc.dominates, d.str()});
    const bool positive = std::all_of(family.lambda().begin(), family.lambda().end(), [](int l) { return l > 0; });
    if (positive) {
      const bool ok = std::all_of(heights.begin(), heights.end(), [&](int h) { return h <= n; });
      lines.push_back({"tail", "height_at_most_n", ok, "max H=" + std::to_string(tc.max_height)});
    }
  }
  if (wants("gof")) {
    auto g = analysis::crt_height_gof(heights, n, fam_summary.c_scal, v.ks_threshold, v.gof_min_replicates);
    std::ostringstream d;
    d << "KS=" << g.ks << " threshold=" << g.threshold;
    lines.push_back({"gof", "crt_height_ks", g.pass, d.str()});
    auto f = open_out(fs::path(c.out) / "gof.csv");
    f << "statistic,estimate,replicates,threshold,pass\n"
      << "crt_height_ks," << g.ks << "," << g.replicates << "," << g.threshold << "," << (g.pass ? 1 : 0) << "\n";
  }
  if (v.contours > 0) {
    auto f = open_out(fs::path(c.out) / "contour.csv");
    f << "grid_index,value,replicate_id,tree\n" << std::setprecision(8);
    const double sn = std::sqrt(static_cast<double>(n));
    const auto count = std::min<std::size_t>(trees.size(), static_cast<std::size_t>(std::max(v.contours, 0)));
    for (std::size_t r = 0; r < count; ++r) {
      auto orig = analysis::rescaled_contour(trees[r].shape, 2.0 * fam_summary.c_scal / sn);
      auto red = analysis::rescaled_contour(tree::reduce(trees[r]), std::sqrt(fam_summary.moments.c1) / sn);
      for (std::size_t k = 0; k < orig.size(); ++k) f << k << "," << orig[k] << "," << r << ",original\n";
      for (std::size_t k = 0; k < red.size(); ++k) f << k << "," << red[k] << "," << r << ",reduced\n";
    }
  }

  bool all = true;
  auto f = open_out(fs::path(c.out) / "summary.csv");
  f << "suite,check,pass,detail\n";
  for (const auto& l : lines) {
    all = all && l.pass;
    f << l.suite << "," << l.check << "," << (l.pass ? "PASS" : "FAIL") << "," << l.detail << "\n";
    std::cout << (l.pass ? "PASS " : "FAIL ") << l.suite << "/" << l.check << (l.detail.empty() ? "" : "  ")
              << l.detail << "\n";
  }
  json m;
  m["tool"] = "bienayme";
  m["version"] = kVersion;
  m["command"] = "verify";
  m["family_path"] = c.family_path;
  m["family"] = kernel::family_to_json(family);
  m["family_hash"] = hex(kernel::family_hash(family));
  m["n"] = n;
  m["seed"] = v.seed;
  m["replicates"] = trees.size();
  m["batch"] = v.batch;
  m["method"] = v.method;
  m["bands"] = {{"delta", v.delta},
                {"outdegree_log_factor", v.log_factor},
                {"se_multiplier", 4.0},
                {"ks_threshold", v.ks_threshold},
                {"gof_min_replicates", v.gof_min_replicates},
                {"tail_min_replicates", v.tail_min_replicates}};
  m["all_pass"] = all;
  open_out(fs::path(c.out) / "manifest.json") << m.dump(2) << "\n";
  return all ? kOk : kFailed;
}

// ---- tilt ------------------------------------------------------------------

int cmd_tilt(const Common& c, const std::string& direction, const std::string& types_csv) {
  const auto family = c.load();
  const auto dir = parse_csv<double>(direction, "--direction");
  if (dir.empty()) throw Error(ErrorKind::kConfig, "--direction is required");
  std::vector<int> types;
  if (types_csv.empty())
    for (int i = 0; i < static_cast<int>(dir.size()); ++i) types.push_back(i);
  else
    types = one_based_types(types_csv, family.num_types(), "--types");
  if (types.size() != dir.size()) throw Error(ErrorKind::kConfig, "--types and --direction differ in length");

  const auto sol = kernel::solve_tilt(family, types, dir);
  const auto tilted = kernel::tilt(family, sol.theta);
  const auto profile = kernel::classify(kernel::mean_matrix(tilted), tilted.K());
  std::cout << std::setprecision(12) << "theta =";
  for (double t : sol.theta) std::cout << " " << t;
  std::cout << "\ntilted rho = " << profile.radius << "\n";
  std::cout << "tilted a = " << sol.left_vector.transpose() << "\n";
  std::cout << "direction error = " << sol.direction_error << "\n";
  if (std::abs(profile.radius - 1.0) > 1e-10)
    throw Error(ErrorKind::kNoConvergence, "tilted spectral radius " + std::to_string(profile.radius) + " is not 1");
  if (!c.out.empty()) {
    fs::path p(c.out);
    if (p.has_parent_path()) ensure_dir(p.parent_path().string());
    kernel::save_family(tilted, c.out);
    std::cout << "wrote " << c.out << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multitype Bienayme trees: inspect, sample, verify, tilt"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  auto add_common = [&](CLI::App* sub, bool out_required) {
    sub->add_option("--family", common.family_path, "Family file (JSON)")->required();
    sub->add_option("--lambda", common.lambda, "Size weights, comma separated");
    auto* o = sub->add_option("--out", common.out, "Output directory (tilt: output family file)");
    if (out_required) o->required();
  };

  auto* inspect = app.add_subcommand("inspect", "Spectral data and scaling constants of a family");
  add_common(inspect, false);
  bool as_json = false;
  inspect->add_flag("--json", as_json, "Print JSON instead of text");

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Sample a batch of trees");
  sample->add_option("--family", common.family_path, "Family file (JSON)");
  sample->add_option("--lambda", common.lambda, "Size weights, comma separated");
  sample->add_option("--out", common.out, "Output directory")->required();
  sample->add_option("--n", sa.n, "Conditioning size #_lambda");
  sample->add_option("--replicates", sa.replicates, "Number of trees");
  sample->add_option("--seed", sa.seed, "Master seed");
  sample->add_option("--method", sa.method, "rejection|exact|by-type|unconditioned|spine");
  sample->add_option("--types", sa.types, "by-type: conditioned types (1-based), comma separated");
  sample->add_option("--targets", sa.targets, "by-type: target counts, comma separated");
  sample->add_option("--root-type", sa.root_type, "unconditioned: root type (1-based)");
  sample->add_option("--ell", sa.ell, "spine: spine length");
  sample->add_option("--max-vertices", sa.max_vertices, "Budget: vertices per attempt");
  sample->add_option("--max-attempts", sa.max_attempts, "Budget: attempts per tree");
  sample->add_option("--replay", sa.replay, "Rerun the configuration stored in a manifest");
  sample->add_flag("--force", sa.force, "Skip the feasibility check");
  sample->add_flag("--text", sa.text, "Also write trees.txt");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run verification suites on a batch");
  add_common(verify, true);
  verify->add_option("--n", va.n, "Conditioning size (inline sampling)");
  verify->add_option("--replicates", va.replicates, "Replicates (inline sampling)");
  verify->add_option("--seed", va.seed, "Master seed");
  verify->add_option("--method", va.method, "exact|rejection");
  verify->add_option("--batch", va.batch, "Existing trees.bin instead of inline sampling");
  verify->add_option("--suites", va.suites, "concentration,tail,gof,blobs");
  verify->add_option("--delta", va.delta, "Window exponent offset for the type-1 count");
  verify->add_option("--log-factor", va.log_factor, "C in the C ln n outdegree bound");
  verify->add_option("--ks-threshold", va.ks_threshold, "KS acceptance threshold");
  verify->add_option("--contours", va.contours, "Number of rescaled contours to export");

  std::string direction, tilt_types;
  auto* tiltc = app.add_subcommand("tilt", "Solve for a critical exponential tilt");
  add_common(tiltc, false);
  tiltc->add_option("--direction", direction, "Target direction, comma separated")->required();
  tiltc->add_option("--types", tilt_types, "Types the direction refers to (1-based)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*inspect) return cmd_inspect(common, as_json);
    if (*sample) return cmd_sample(common, sa);
    if (*verify) return cmd_verify(common, va);
    if (*tiltc) return cmd_tilt(common, direction, tilt_types);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kOk;
}
