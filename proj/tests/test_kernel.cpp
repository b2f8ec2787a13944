#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bienayme/errors.hpp"
#include "bienayme/kernel/family_io.hpp"
#include "bienayme/kernel/offspring.hpp"
#include "bienayme/kernel/spectral.hpp"
#include "bienayme/kernel/tilt.hpp"

using namespace bienayme;
using namespace bienayme::kernel;

namespace {

OffspringFamily monotype(std::vector<WordProb> words) {
  return OffspringFamily(1, 0, {OffspringLaw(std::move(words))}, {1});
}

OffspringFamily binary() { return monotype({{{}, 0.5}, {{0, 0}, 0.5}}); }

OffspringFamily preset(const std::string& name) {
  return load_family(std::string(BIENAYME_PRESET_DIR) + "/" + name + ".json");
}

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("projection forgets word order") {
  auto p = projection(binary());
  CHECK(p.per_type[0].at({0}) == doctest::Approx(0.5));
  CHECK(p.per_type[0].at({2}) == doctest::Approx(0.5));

  OffspringFamily f(2, 0,
                    {OffspringLaw({{{0, 1}, 0.25}, {{1, 0}, 0.25}, {{}, 0.5}}),
                     OffspringLaw({{{}, 1.0}})},
                    {1, 0});
  auto q = projection(f);
  CHECK(q.per_type[0].at({1, 1}) == doctest::Approx(0.5));
}

TEST_CASE("truncated Poisson product matches the bivariate pmf") {
  auto law = poisson_product(std::vector<double>{1.0, 1.0}, 1e-12);
  OffspringFamily f(2, 0, {law, law}, {1, 1});
  auto p = projection(f);
  double total = 0.0;
  for (const auto& [k, prob] : p.per_type[0]) {
    const double expect = std::exp(-2.0) / (std::tgamma(k[0] + 1.0) * std::tgamma(k[1] + 1.0));
    CHECK(std::abs(prob - expect) < 1e-11);
    total += prob;
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("mean matrices") {
  auto f = preset("poisson_reducible");
  auto a = mean_matrix(f);
  CHECK((a - mat({{1, 1}, {0, 0.5}})).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(mean_matrix(monotype({{{0}, 1.0}}))(0, 0) == 1.0);
  CHECK(mean_matrix(binary())(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("classification") {
  auto perm = classify(mat({{0, 1}, {1, 0}}), 2);
  CHECK(std::abs(perm.radius - 1.0) < 1e-12);
  CHECK(perm.irreducible_on_critical_block);
  CHECK(perm.classification == Criticality::kCritical);

  auto red = classify(mat({{1, 1}, {0, 0.5}}), 1);
  CHECK(red.classification == Criticality::kCritical);
  CHECK(red.subcritical_block_ok);
  CHECK(std::abs(red.subcritical_radius - 0.5) < 1e-12);

  CHECK(classify(mat({{0.5}}), 1).classification == Criticality::kSubcritical);
  CHECK(classify(mat({{1.5}}), 1).classification == Criticality::kSupercritical);

  CHECK_THROWS_AS(classify(mat({{1, 1}, {0, 1}}), 2, true), Error);
  try {
    classify(mat({{1, 1}, {0, 1}}), 2, true);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kReducibleCriticalBlock);
  }
}

TEST_CASE("Perron vectors") {
  auto perm = perron_vectors(classify(mat({{0, 1}, {1, 0}}), 2));
  CHECK(std::abs(perm.a(0) - 0.5) < 1e-12);
  CHECK(std::abs(perm.a(1) - 0.5) < 1e-12);
  CHECK(std::abs(perm.b(0) - 1.0) < 1e-12);
  CHECK(std::abs(perm.b(1) - 1.0) < 1e-12);

  auto red = perron_vectors(classify(mat({{1, 1}, {0, 0.5}}), 1));
  CHECK(std::abs(red.a(0) - 1.0) < 1e-12);
  CHECK(std::abs(red.a(1) - 2.0) < 1e-10);

  auto mono = perron_vectors(classify(mat({{1}}), 1));
  CHECK(mono.a(0) == doctest::Approx(1.0));
  CHECK(mono.b(0) == doctest::Approx(1.0));

  auto two = perron_vectors(classify(mean_matrix(preset("two_type")), 2));
  CHECK(std::abs(two.a(0) - 4.0 / 7.0) < 1e-12);
  CHECK(std::abs(two.a(1) - 3.0 / 7.0) < 1e-12);
  CHECK(two.left_residual < 1e-10);
  CHECK(two.right_residual < 1e-10);

  CHECK_THROWS(perron_vectors(classify(mat({{0.5}}), 1)));
}

TEST_CASE("Q matrices and sigma^2") {
  auto unary = monotype({{{0}, 1.0}});
  auto q = q_matrices(projection(unary), 1);
  CHECK(q[0](0, 0) == 0.0);
  auto qb = q_matrices(projection(binary()), 1);
  CHECK(qb[0](0, 0) == doctest::Approx(1.0));
  Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  CHECK(sigma2(one, one, qb) == doctest::Approx(1.0));
  CHECK(sigma2(one, one, q) == 0.0);

  auto pois = OffspringFamily(1, 0, {poisson_product(std::vector<double>{1.0})}, {1});
  CHECK(std::abs(q_matrices(projection(pois), 1)[0](0, 0) - 1.0) < 1e-10);

  OffspringFamily swap(2, 0, {OffspringLaw({{{1}, 1.0}}), OffspringLaw({{{0}, 1.0}})}, {1, 0});
  auto s = summarize(swap);
  CHECK(s.sigma2 == 0.0);
}

TEST_CASE("scaling constants") {
  auto b = summarize(binary());
  CHECK(std::abs(b.sigma2 - 1.0) < 1e-12);
  CHECK(std::abs(b.c_scal - 0.5) < 1e-12);

  auto p = summarize(preset("poisson_reducible"));
  CHECK(std::abs(p.c_scal - std::sqrt(3.0) / 2.0) < 1e-9);
  CHECK(std::abs(p.moments.means[1] - 2.0) < 1e-10);
  CHECK(std::abs(p.moments.c1 - 3.0) < 1e-10);

  auto two = preset("two_type");
  const double by_type = scaling_constant(two, ScalingMode::kByType);
  CHECK(std::abs(by_type - std::sqrt(6.0 / 7.0) / 2.0) < 1e-12);
  CHECK(scaling_constant(two.with_lambda({3, 5}), ScalingMode::kByType) == doctest::Approx(by_type));

  auto sub = monotype({{{}, 0.6}, {{0, 0}, 0.4}});
  CHECK_THROWS(scaling_constant(sub, ScalingMode::kLinearCombination));
}

TEST_CASE("flattened moments") {
  CHECK(flattened_moments(binary()).means[0] == 1.0);
  OffspringFamily swap(2, 0, {OffspringLaw({{{1}, 1.0}}), OffspringLaw({{{0}, 1.0}})}, {1, 0});
  auto m = flattened_moments(swap);
  CHECK(std::abs(m.means[1] - 1.0) < 1e-12);
  auto t = flattened_moments(preset("two_type"));
  CHECK(std::abs(t.means[0] - 1.0) < 1e-10);
  CHECK(std::abs(t.means[1] - 0.75) < 1e-12);
}

TEST_CASE("tilting") {
  auto b = binary();
  const std::vector<double> zero{0.0};
  auto same = tilt(b, zero);
  for (const auto& e : b.law(0).support())
    CHECK(std::abs(same.law(0).prob_of(e.word) - e.prob) < 1e-12);

  const std::vector<double> ln2{std::log(2.0)};
  auto t = tilt(b, ln2);
  CHECK(std::abs(t.law(0).prob_of({}) - 0.2) < 1e-12);
  CHECK(std::abs(t.law(0).prob_of({0, 0}) - 0.8) < 1e-12);

  auto pois = preset("poisson2");
  const std::vector<double> th{-0.3};
  auto tp = tilt(pois, th);
  const double m = 2.0 * std::exp(-0.3);
  double p = std::exp(-m);
  for (int k = 0; k < 8; ++k) {
    if (k > 0) p *= m / k;
    CHECK(std::abs(tp.law(0).prob_of(Word(static_cast<std::size_t>(k), 0)) - p) < 1e-12);
  }
}

TEST_CASE("tilt composition and mean-matrix formula") {
  auto f = preset("two_type");
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> th{normal(rng), normal(rng)};
    auto direct = mean_matrix(tilt(f, th));
    auto formula = tilted_mean_formula(f, th);
    CHECK((direct - formula).cwiseAbs().maxCoeff() < 1e-12);
  }
  std::vector<double> t1{0.3, -0.2}, t2{-0.1, 0.5}, t12{0.2, 0.3};
  auto lhs = tilt(tilt(f, t1), t2);
  auto rhs = tilt(f, t12);
  for (int i = 0; i < 2; ++i)
    for (const auto& e : rhs.law(i).support())
      CHECK(std::abs(lhs.law(i).prob_of(e.word) - e.prob) < 1e-12);
}

TEST_CASE("tilt solver") {
  auto sol = solve_tilt(preset("poisson2"), {0}, {1.0});
  CHECK(std::abs(sol.theta[0] + std::log(2.0)) < 1e-8);
  CHECK(std::abs(sol.radius - 1.0) < 1e-10);

  auto b = solve_tilt(binary(), {0}, {1.0});
  CHECK(std::abs(b.theta[0]) < 1e-8);

  auto two = preset("two_type");
  auto own = solve_tilt(two, {0, 1}, {4.0, 3.0});
  auto tilted = summarize(tilt(two, own.theta));
  CHECK(std::abs(tilted.profile.radius - 1.0) < 1e-10);
  CHECK(std::abs(tilted.vectors.a(0) / tilted.vectors.a(1) - 4.0 / 3.0) < 1e-7);

  auto other = solve_tilt(two, {0, 1}, {1.0, 2.0});
  auto t2 = summarize(tilt(two, other.theta));
  CHECK(std::abs(t2.vectors.a(1) / t2.vectors.a(0) - 2.0) < 1e-7);

  try {
    solve_tilt(binary(), {0}, {0.0});
    FAIL("expected DegenerateDirection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerateDirection);
  }

  // Deterministic offspring: every type has exactly one child of the other
  // type, so tilting cannot move the eigenvector away from (1/2, 1/2).
  OffspringFamily swap(2, 0, {OffspringLaw({{{1}, 1.0}}), OffspringLaw({{{0}, 1.0}})}, {1, 0});
  TiltSolverOptions quick;
  quick.max_starts = 3;
  try {
    solve_tilt(swap, {0, 1}, {1.0, 3.0}, quick);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNoConvergence);
  }
}

TEST_CASE("family files") {
  auto f = preset("binary");
  CHECK(f.K() == 1);
  CHECK(f.nondegenerate());
  auto back = family_from_json(family_to_json(preset("two_type")));
  CHECK(family_hash(back) == family_hash(preset("two_type")));

  auto bad = nlohmann::json::parse(R"({"K": 1, "types": [{"kind": "explicit", "words": [{"w": [2], "p": 1}]}]})");
  try {
    family_from_json(bad);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConfig);
    CHECK(std::string(e.what()).find("$.types[0].words[0].w[0]") != std::string::npos);
  }
}
