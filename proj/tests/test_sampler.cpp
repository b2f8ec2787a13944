#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "bienayme/analysis/feasibility.hpp"
#include "bienayme/analysis/stats.hpp"
#include "bienayme/errors.hpp"
#include "bienayme/kernel/family_io.hpp"
#include "bienayme/sampler/batch.hpp"
#include "bienayme/sampler/bienayme_tree.hpp"
#include "bienayme/sampler/decoration.hpp"
#include "bienayme/sampler/degree_sequence.hpp"
#include "bienayme/sampler/exact.hpp"
#include "bienayme/sampler/flat_law.hpp"
#include "bienayme/sampler/spine.hpp"
#include "bienayme/tree/enumerate.hpp"
#include "bienayme/tree/io.hpp"
#include "bienayme/tree/operations.hpp"

using namespace bienayme;
using namespace bienayme::sampler;

namespace {

kernel::OffspringFamily preset(const std::string& name) {
  return kernel::load_family(std::string(BIENAYME_PRESET_DIR) + "/" + name + ".json");
}

std::int64_t weighted(const kernel::OffspringFamily& f, const tree::MultitypeTree& t) {
  std::int64_t s = 0;
  for (int ty : t.types) s += f.lambda()[static_cast<std::size_t>(ty)];
  return s;
}

bool lukasiewicz(const std::vector<int>& d) {
  long s = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    s += d[i] - 1;
    if (s < 0 && i + 1 < d.size()) return false;
  }
  return s == -1;
}

}  // namespace

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  const auto x = a.engine()();
  CHECK(x == b.engine()());
  CHECK(x != c.engine()());
  CHECK(x != d.engine()());
}

TEST_CASE("unconditioned trees") {
  SampleBudget budget;
  budget.max_vertices = 100000;

  kernel::OffspringFamily leaf(1, 0, {kernel::OffspringLaw({{{}, 1.0}})}, {1});
  WordSampler leaves(leaf);
  RngStream rng(1, 0);
  for (int i = 0; i < 10; ++i) {
    auto out = sample_unconditioned(leaves, 0, rng, budget);
    REQUIRE(std::holds_alternative<tree::MultitypeTree>(out));
    CHECK(std::get<tree::MultitypeTree>(out).size() == 1);
  }

  WordSampler binary(preset("binary"));
  const int reps = 40000;
  int ones = 0, threes = 0;
  for (int i = 0; i < reps; ++i) {
    auto out = sample_unconditioned(binary, 0, rng, budget);
    if (auto* t = std::get_if<tree::MultitypeTree>(&out)) {
      ones += t->size() == 1;
      threes += t->size() == 3;
    }
  }
  const double p1 = static_cast<double>(ones) / reps, p3 = static_cast<double>(threes) / reps;
  CHECK(std::abs(p1 - 0.5) < 4 * std::sqrt(0.25 / reps));
  CHECK(std::abs(p3 - 0.125) < 4 * std::sqrt(0.125 * 0.875 / reps));

  WordSampler poisson(preset("poisson_reducible"));
  for (int i = 0; i < 200; ++i) {
    auto out = sample_unconditioned(poisson, 1, rng, budget);
    if (auto* t = std::get_if<tree::MultitypeTree>(&out))
      CHECK(std::all_of(t->types.begin(), t->types.end(), [](int ty) { return ty == 1; }));
  }
}

TEST_CASE("overflow is reported, not resampled") {
  SampleBudget tiny;
  tiny.max_vertices = 3;
  WordSampler binary(preset("binary"));
  RngStream rng(2, 0);
  int overflows = 0;
  for (int i = 0; i < 2000; ++i) {
    auto out = sample_unconditioned(binary, 0, rng, tiny);
    if (auto* o = std::get_if<Overflow>(&out)) {
      ++overflows;
      CHECK(o->vertices > 3);
    } else {
      CHECK(std::get<tree::MultitypeTree>(out).size() <= 3);
    }
  }
  CHECK(overflows > 0);
}

TEST_CASE("rejection conditioning") {
  auto fam = preset("binary");
  WordSampler words(fam);
  RngStream rng(3, 0);
  SampleBudget budget;
  for (int i = 0; i < 50; ++i) {
    auto t = sample_conditioned_rejection(words, 3, rng, budget);
    CHECK(t.shape.parents() == std::vector<int>{-1, 0, 0});
  }
  CHECK(sample_conditioned_rejection(words, 1, rng, budget).size() == 1);

  SampleBudget few;
  few.max_attempts = 1000;
  try {
    sample_conditioned_rejection(words, 2, rng, few);
    FAIL("expected Infeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInfeasible);
  }

  auto two = preset("two_type");
  WordSampler two_words(two);
  SampleStats stats;
  const auto feasible = analysis::feasible_sizes(two, 12);
  CHECK_FALSE(feasible.contains(2));
  for (int n = 1; n <= 12; ++n) {
    if (!feasible.contains(n)) continue;
    auto t = sample_conditioned_rejection(two_words, n, rng, budget, &stats);
    CHECK(weighted(two, t) == n);
  }
  CHECK(stats.attempts >= 10);
}

TEST_CASE("cycle lemma") {
  // {2,0,0}: of the three cyclic arrangements exactly one is a tree.
  std::vector<int> d{0, 2, 0};
  int valid = 0;
  for (int r = 0; r < 3; ++r) {
    std::vector<int> rot(d.begin() + r, d.end());
    rot.insert(rot.end(), d.begin(), d.begin() + r);
    valid += lukasiewicz(rot);
  }
  CHECK(valid == 1);
  CHECK(cycle_lemma_rotation(d) == 1);
  CHECK_THROWS_AS(cycle_lemma_rotation(std::vector<int>{1, 1}), Error);

  RngStream rng(4, 0);
  CHECK(sample_degree_sequence_tree({0}, rng).size() == 1);
  for (int i = 0; i < 20; ++i)
    CHECK(sample_degree_sequence_tree({0, 2, 0}, rng).parents() == std::vector<int>{-1, 0, 0});

  // Exactly one valid rotation, and the sampler preserves the multiset.
  std::mt19937_64 gen(11);
  int failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 40);
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n - 1; ++k) ++deg[gen() % static_cast<std::size_t>(n)];
    int count = 0;
    for (int r = 0; r < n; ++r) {
      std::vector<int> rot(deg.begin() + r, deg.end());
      rot.insert(rot.end(), deg.begin(), deg.begin() + r);
      count += lukasiewicz(rot);
    }
    if (count != 1) ++failures;
    auto t = sample_degree_sequence_tree(deg, rng);
    std::vector<int> out;
    for (int v = 0; v < t.size(); ++v) out.push_back(t.outdegree(v));
    std::sort(out.begin(), out.end());
    std::sort(deg.begin(), deg.end());
    if (out != deg) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("degree sequence {2,1,0,0} is uniform over its three trees") {
  RngStream rng(5, 0);
  std::map<std::vector<int>, std::int64_t> counts;
  const int reps = 30000;
  for (int i = 0; i < reps; ++i) ++counts[sample_degree_sequence_tree({2, 1, 0, 0}, rng).parents()];
  REQUIRE(counts.size() == 3);
  std::vector<std::int64_t> obs;
  for (auto& [k, c] : counts) obs.push_back(c);
  auto chi = analysis::chi_square_gof(obs, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(chi.p_value > 1e-3);
}

TEST_CASE("exact sampler: binary n=5 is uniform over two trees") {
  auto fam = preset("binary");
  ExactSampler exact(fam, 100);
  CHECK(exact.fixed_count());
  RngStream rng(6, 0);
  std::map<std::vector<int>, std::int64_t> counts;
  for (int i = 0; i < 20000; ++i) {
    auto t = exact.sample(5, rng);
    REQUIRE(t.size() == 5);
    ++counts[t.shape.parents()];
  }
  REQUIRE(counts.size() == 2);
  std::vector<std::int64_t> obs;
  for (auto& [k, c] : counts) obs.push_back(c);
  CHECK(analysis::chi_square_gof(obs, {0.5, 0.5}).p_value > 1e-3);
  CHECK_THROWS_AS(exact.sample(4, rng), Error);
}

TEST_CASE("exact and rejection agree on small sizes") {
  for (const char* name : {"binary", "two_type"}) {
    auto fam = preset(name);
    ExactSampler exact(fam, 9);
    WordSampler words(fam);
    RngStream rng(7, 0);
    SampleBudget budget;
    const auto feasible = analysis::feasible_sizes(fam, 9);
    for (int n = 1; n <= 9; ++n) {
      if (!feasible.contains(n)) continue;
      std::map<std::string, std::int64_t> a, b;
      for (int i = 0; i < 5000; ++i) {
        auto te = exact.sample(n, rng);
        CHECK(weighted(fam, te) == n);
        ++a[tree::to_text(te)];
        ++b[tree::to_text(sample_conditioned_rejection(words, n, rng, budget))];
      }
      auto chi = analysis::chi_square_two_sample(a, b);
      INFO(name << " n=" << n);
      CHECK(chi.p_value > 1e-3);
    }
  }
}

TEST_CASE("fused blow-up matches the staged construction") {
  for (const char* name : {"two_type", "poisson_reducible"}) {
    auto fam = preset(name);
    ExactSampler exact(fam, 301);
    SampleBudget budget;
    const auto feasible = analysis::feasible_sizes(fam, 301);
    for (int i = 0; i < 30; ++i) {
      const std::int64_t n = feasible.contains(301) ? 301 : 300;
      RngStream a(12, static_cast<std::uint64_t>(i)), b(12, static_cast<std::uint64_t>(i));
      auto fused = exact.sample(n, a);
      auto flat = exact.sample_flat(n, b);
      auto staged = tree::blow_up(flat, exact.decorations().decorate(flat, b, budget)).tree;
      CHECK(fused == staged);
      CHECK(tree::flatten(fused).flat == flat);
    }
  }
}

TEST_CASE("size probabilities match enumeration") {
  auto fam = preset("two_type");
  ExactSampler exact(fam, 12);
  CHECK_FALSE(exact.fixed_count());
  std::map<std::int64_t, double> brute;
  tree::for_each_multitype_tree(8, 2, [&](const tree::MultitypeTree& t) {
    brute[weighted(fam, t)] += tree_probability(fam, t);
  });
  for (int n = 1; n <= 8; ++n) CHECK(exact.size_probability(n) == doctest::Approx(brute[n]).epsilon(1e-9));
}

TEST_CASE("conditioning by type counts") {
  auto bin = preset("binary");
  WordSampler words(bin);
  RngStream rng(8, 0);
  SampleBudget budget;
  for (int i = 0; i < 20; ++i)
    CHECK(sample_by_type(words, {0}, {3}, rng, budget).shape.parents() == std::vector<int>{-1, 0, 0});

  WordSampler two(preset("two_type"));
  for (int i = 0; i < 200; ++i) {
    auto t = sample_by_type(two, {1}, {0}, rng, budget);
    CHECK(std::count(t.types.begin(), t.types.end(), 1) == 0);
  }
}

TEST_CASE("flat law moments") {
  FlatLaw two(preset("two_type"));
  CHECK(two.coverage() >= 1.0 - 1e-9);
  CHECK(two.mean(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(two.mean(1) == doctest::Approx(0.75).epsilon(1e-6));

  FlatLaw pois(preset("poisson_reducible"));
  CHECK(pois.coverage() >= 1.0 - 1e-9);
  CHECK(pois.mean(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(pois.mean(1) == doctest::Approx(2.0).epsilon(1e-6));

  FlatLaw bin(preset("binary"));
  CHECK(bin.entries().size() == 2);
  CHECK(bin.second_moment(0) == doctest::Approx(2.0));
}

TEST_CASE("decorations") {
  auto fam = preset("two_type");
  DecorationSampler deco(fam);
  RngStream rng(9, 0);
  SampleBudget budget;

  auto single = deco.table({1, 1});
  CHECK(single->shapes.size() == 1);

  auto table = deco.table({2, 2});
  REQUIRE(table->shapes.size() == 3);
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < table->shapes.size(); ++k) index[tree::to_text(table->shapes[k])] = k;
  std::vector<std::int64_t> obs(3, 0);
  for (int i = 0; i < 30000; ++i) {
    auto t = deco.draw({2, 2}, rng, budget);
    auto it = index.find(tree::to_text(t));
    REQUIRE(it != index.end());
    ++obs[it->second];
  }
  const double total = std::accumulate(table->probs.begin(), table->probs.end(), 0.0);
  std::vector<double> probs;
  for (double p : table->probs) probs.push_back(p / total);
  CHECK(analysis::chi_square_gof(obs, probs).p_value > 1e-3);

  // Monotype: every blob is a star and blow-up is the identity.
  auto bin = preset("binary");
  ExactSampler exact(bin, 51);
  for (int i = 0; i < 20; ++i) {
    auto flat = exact.sample_flat(51, rng);
    auto alpha = exact.decorations().decorate(flat, rng, budget);
    for (const auto& blob : alpha) CHECK(blob.shape.outdegree(0) == blob.size() - 1);
    CHECK(tree::blow_up(flat, alpha).tree == flat);
  }
}

TEST_CASE("spine trees") {
  FlatLaw bin(preset("binary"));
  RngStream rng(10, 0);
  SampleBudget budget;
  budget.max_vertices = 100000;

  for (int i = 0; i < 50; ++i) {
    auto out = sample_spine_tree(bin, 0, rng, budget);
    if (auto* m = std::get_if<MarkedFlatTree>(&out)) {
      CHECK(m->mark == 0);
      CHECK(m->spine == std::vector<int>{0});
    }
  }

  FlatLaw two(preset("two_type"));
  for (int ell : {1, 3, 6}) {
    for (int i = 0; i < 50; ++i) {
      auto out = sample_spine_tree(two, ell, rng, budget);
      auto* m = std::get_if<MarkedFlatTree>(&out);
      if (!m) continue;
      REQUIRE(m->spine.size() == static_cast<std::size_t>(ell + 1));
      CHECK(m->spine.back() == m->mark);
      for (std::size_t k = 0; k < m->spine.size(); ++k) {
        CHECK(m->tree.types[static_cast<std::size_t>(m->spine[k])] == 0);
        if (k > 0) CHECK(m->tree.shape.parent(m->spine[k]) == m->spine[k - 1]);
      }
    }
  }

  // P(spine tree = (tau, v)) = P(flat tree = tau) for each v at height 1.
  auto fam = preset("binary");
  std::map<std::string, double> expected;
  double covered = 0.0;
  tree::for_each_multitype_tree(5, 1, [&](const tree::MultitypeTree& t) {
    for (int v : t.shape.children(0)) {
      const double p = tree_probability(fam, t);
      expected[tree::to_text(t) + " @" + std::to_string(v)] = p;
      covered += p;
    }
  });
  CHECK(covered == doctest::Approx(0.375));
  const int reps = 40000;
  std::map<std::string, std::int64_t> seen;
  std::int64_t other = 0;
  for (int i = 0; i < reps; ++i) {
    auto out = sample_spine_tree(bin, 1, rng, budget);
    auto* m = std::get_if<MarkedFlatTree>(&out);
    if (!m) {
      ++other;
      continue;
    }
    auto key = tree::to_text(m->tree) + " @" + std::to_string(m->mark);
    if (expected.count(key)) ++seen[key];
    else ++other;
  }
  std::vector<std::int64_t> obs;
  std::vector<double> probs;
  for (auto& [k, p] : expected) {
    obs.push_back(seen[k]);
    probs.push_back(p);
  }
  obs.push_back(other);
  probs.push_back(1.0 - covered);
  CHECK(analysis::chi_square_gof(obs, probs).p_value > 1e-3);
}

TEST_CASE("parallel batches equal the serial reference") {
  auto fam = preset("two_type");
  SampleRequest req;
  req.method = Method::kExact;
  req.n = 41;
  BatchSampler sampler(fam, req);
  auto par = sample_batch(sampler, 64, 99, 0, 4);
  auto ser = sample_batch_serial(sampler, 64, 99, 0);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    REQUIRE(par[i].tree.has_value());
    CHECK(*par[i].tree == *ser[i].tree);
  }
  auto again = sample_batch(sampler, 64, 99, 0, 2);
  for (std::size_t i = 0; i < par.size(); ++i) CHECK(*again[i].tree == *par[i].tree);

  req.method = Method::kRejection;
  BatchSampler rej(fam, req);
  auto a = sample_batch(rej, 16, 5, 100, 3);
  auto b = sample_batch_serial(rej, 16, 5, 100);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(*a[i].tree == *b[i].tree);
  CHECK(parse_method("by-type") == Method::kByType);
  CHECK_THROWS_AS(parse_method("nope"), Error);
}
