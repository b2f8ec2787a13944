#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bienayme/errors.hpp"
#include "bienayme/tree/distance.hpp"
#include "bienayme/tree/enumerate.hpp"
#include "bienayme/tree/io.hpp"
#include "bienayme/tree/operations.hpp"
#include "bienayme/tree/plane_tree.hpp"

using namespace bienayme;
using namespace bienayme::tree;

namespace {

// Colours of the usual three-type drawings: white roots, then green, then red.
constexpr int W = 0, G = 1, R = 2;

MultitypeTree make(std::vector<int> parent, std::vector<int> types) {
  return MultitypeTree(PlaneTree::from_parents(std::move(parent)), std::move(types));
}

MultitypeTree cherry() { return make({-1, 0, 0}, {0, 0, 0}); }

// Counts (4,2,2); the root's children are green, white, red.
MultitypeTree three_type_example() {
  return make({-1, 0, 1, 1, 0, 4, 5, 0}, {W, G, R, W, W, G, W, R});
}

MultitypeTree pair_first() { return make({-1, 0, 0, 2, 2, 0, 5, 0}, {W, G, G, R, W, W, W, R}); }
MultitypeTree pair_second() { return make({-1, 0, 0, 2, 2, 0, 5, 0}, {W, G, R, R, W, W, W, G}); }

MultitypeTree common_flat() { return make({-1, 0, 0, 2, 0, 0, 0, 0}, {W, W, W, W, G, G, R, R}); }

MultitypeTree tau() { return make({-1, 0, 0, 2, 2, 0, 0, 0}, {W, W, W, W, G, G, R, R}); }

}  // namespace

TEST_CASE("parent arrays must be in DFS order") {
  CHECK_NOTHROW(PlaneTree::from_parents({-1, 0, 1, 0}));
  CHECK_THROWS_AS(PlaneTree::from_parents({-1, 0, 0, 1}), Error);
  CHECK_THROWS_AS(PlaneTree::from_parents({0}), Error);
  auto t = PlaneTree::from_outdegrees(std::vector<int>{2, 1, 0, 0});
  CHECK(t.parents() == std::vector<int>{-1, 0, 1, 0});
  CHECK(t.subtree_end(1) == 3);
  CHECK_THROWS_AS(PlaneTree::from_outdegrees(std::vector<int>{1, 0, 0}), Error);
}

TEST_CASE("contour and height functions") {
  PlaneTree single;
  CHECK(contour_function(single) == std::vector<int>{0});
  CHECK(height_function(single) == std::vector<int>{0});
  CHECK(contour_function(cherry().shape) == std::vector<int>{0, 1, 0, 1, 0});
  CHECK(height_function(cherry().shape) == std::vector<int>{0, 1, 1});
  auto path = PlaneTree::from_parents({-1, 0, 1});
  CHECK(contour_function(path) == std::vector<int>{0, 1, 2, 1, 0});
  CHECK(height_function(path) == std::vector<int>{0, 1, 2});

  for (const auto& t : plane_trees(7)) {
    const auto c = contour_function(t);
    REQUIRE(c.size() == 13);
    CHECK(c.front() == 0);
    CHECK(c.back() == 0);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(std::abs(c[i] - c[i - 1]) == 1);
    CHECK(*std::max_element(c.begin(), c.end()) == height(t));
  }
}

TEST_CASE("plane tree counts are Catalan numbers") {
  const int catalan[] = {1, 1, 2, 5, 14, 42, 132, 429};
  for (int n = 1; n <= 8; ++n) CHECK(plane_trees(n).size() == static_cast<std::size_t>(catalan[n - 1]));
}

TEST_CASE("type counts and weighted size") {
  MultitypeTree root;
  CHECK(weighted_size(root, std::vector<int>{1}) == 1);
  auto t = three_type_example();
  CHECK(type_counts(t, 3) == std::vector<std::int64_t>{4, 2, 2});
  CHECK(weighted_size(t, std::vector<int>{1, 0, 0}) == 4);
}

TEST_CASE("blobs") {
  auto b = blobs(cherry());
  CHECK(b.sizes() == std::vector<int>{1, 1, 1});

  auto chain = make({-1, 0, 1}, {0, 1, 0});
  auto cb = blobs(chain);
  CHECK(cb.members(chain, 0) == std::vector<int>{1});
  CHECK(cb.frontier(chain, 0) == std::vector<int>{2});
  CHECK(cb.owner == std::vector<int>{0, 0, 2});

  auto flat = common_flat();
  auto fb = blobs(flat);
  CHECK(fb.sizes()[0] == 5);  // 1 + two green + two red

  CHECK_THROWS_AS(blobs(make({-1}, {1})), Error);
}

TEST_CASE("reduce") {
  CHECK(reduce(cherry()) == cherry().shape);
  CHECK(reduce(make({-1, 0, 1}, {0, 1, 0})) == PlaneTree::from_parents({-1, 0}));
  CHECK(reduce(three_type_example()) == PlaneTree::from_parents({-1, 0, 0, 2}));
}

TEST_CASE("flatten") {
  CHECK(flatten(cherry()).flat == cherry());
  auto f = flatten(three_type_example());
  CHECK(f.flat == make({-1, 0, 0, 2, 2, 0, 0, 0}, {W, W, W, W, G, G, R, R}));
  CHECK(flatten(f.flat).flat == f.flat);
  CHECK(flatten(pair_first()).flat == common_flat());
  CHECK(flatten(pair_second()).flat == common_flat());
  CHECK_FALSE(pair_first() == pair_second());
  CHECK(is_flat(common_flat()));
  CHECK_FALSE(is_flat(pair_first()));
}

TEST_CASE("blow up") {
  auto single = make({-1}, {W});
  Decoration alpha{
      make({-1, 0, 0, 2, 3, 2}, {W, W, R, G, W, R}),
      single,
      make({-1, 0, 1}, {W, G, W}),
      single,
  };
  auto phi = blow_up(tau(), alpha);
  CHECK(phi.tree == make({-1, 0, 0, 2, 3, 4, 5, 2}, {W, W, R, G, W, G, W, R}));
  CHECK(phi.phi == std::vector<int>{0, 1, 4, 6});
  CHECK(flatten(phi.tree).flat == tau());

  // Star decorations give back tau.
  Decoration stars;
  auto t = tau();
  for (int v = 0; v < t.size(); ++v) {
    if (t.type(v) != 0) continue;
    std::vector<int> parent{-1}, types{0};
    for (int c : t.shape.children(v)) {
      parent.push_back(0);
      types.push_back(t.type(c));
    }
    stars.push_back(make(parent, types));
  }
  CHECK(blow_up(t, stars).tree == t);

  Decoration wrong = alpha;
  wrong[2] = single;
  CHECK_THROWS_AS(blow_up(tau(), wrong), Error);
}

TEST_CASE("degree sequences") {
  MultitypeTree root;
  auto s = degree_sequence(root, 1);
  CHECK(s.size() == 1);
  CHECK(admissible(s, 1));
  auto c = degree_sequence(cherry(), 1);
  CHECK(c == DegreeSequence{{0, {0}}, {0, {0}}, {0, {2}}});
  CHECK_FALSE(admissible(DegreeSequence{{0, {1}}}, 1));
}

TEST_CASE("N_d counts") {
  MultitypeTree root;
  CHECK(n_d_counts(root.shape) == std::map<int, std::int64_t>{{0, 1}});
  CHECK(n_d_counts(cherry().shape) == std::map<int, std::int64_t>{{0, 2}, {2, 1}});
}

TEST_CASE("distances") {
  DistanceOracle c(cherry().shape);
  CHECK(c.distance(0, 0) == 0);
  CHECK(c.distance(1, 2) == 2);
  DistanceOracle p(PlaneTree::from_parents({-1, 0, 1}));
  CHECK(p.distance(0, 2) == 2);
  CHECK(p.height() == 2);

  // Against a naive ancestor walk on every tree with 7 vertices.
  for (const auto& t : plane_trees(7)) {
    DistanceOracle o(t);
    const auto h = height_function(t);
    for (int u = 0; u < t.size(); ++u)
      for (int v = 0; v < t.size(); ++v) {
        int a = u, b = v;
        while (a != b) {
          if (h[static_cast<std::size_t>(a)] >= h[static_cast<std::size_t>(b)]) a = t.parent(a);
          else b = t.parent(b);
        }
        CHECK(o.lca(u, v) == a);
      }
  }
}

TEST_CASE("serialization round trips") {
  auto t = three_type_example();
  CHECK(to_text(t) == "types:1,2,3,1,1,2,1,3 parents:0,1,1,0,4,5,0");
  CHECK(from_text(to_text(t)) == t);
  CHECK(from_text("types:1 parents:") == MultitypeTree());
  CHECK_THROWS_AS(from_text("types:1,1 parents:"), Error);

  std::stringstream ss;
  write_binary(ss, t);
  write_binary(ss, cherry());
  CHECK(ss.str().size() == 4 * (1 + 7 + 8) + 4 * (1 + 2 + 3));
  CHECK(*read_binary(ss) == t);
  CHECK(*read_binary(ss) == cherry());
  CHECK_FALSE(read_binary(ss).has_value());

  std::ostringstream csv;
  write_series_csv(csv, {0, 1, 0});
  CHECK(csv.str() == "step,value\n0,0\n1,1\n2,0\n");
}

TEST_CASE("exhaustive structural round trips on small two-type trees") {
  long checked = 0, failures = 0;
  for_each_multitype_tree(8, 2, [&](const MultitypeTree& t) {
    ++checked;
    const auto f = flatten(t);
    bool ok = type_counts(f.flat, 2) == type_counts(t, 2);
    ok = ok && reduce(f.flat) == reduce(t);
    ok = ok && flatten(f.flat).flat == f.flat;
    ok = ok && blow_up(f.flat, f.decoration).tree == t;
    ok = ok && admissible(degree_sequence(t, 2), 2);
    const auto nd = n_d_counts(f.flat);
    std::int64_t edges = 0;
    for (const auto& [d, c] : nd) edges += d * c;
    ok = ok && edges == type_counts(t, 2)[0] - 1;
    if (!ok) ++failures;
  });
  CHECK(checked == 1 + 2 + 2 * 4 + 5 * 8 + 14 * 16 + 42 * 32 + 132 * 64 + 429 * 128);
  CHECK(failures == 0);
}
