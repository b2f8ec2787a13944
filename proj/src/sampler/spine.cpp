#include "bienayme/sampler/spine.hpp"

#include <algorithm>

#include "bienayme/errors.hpp"
#include "bienayme/sampler/exact.hpp"

namespace bienayme::sampler {

using Entry = FlatLaw::Entry;

namespace {

std::int64_t profile_vertices(const Entry& e) {
  std::int64_t v = 1;
  for (std::size_t i = 1; i < e.profile.size(); ++i) v += e.profile[i];
  return v;
}

// Type-0 vertices of a flat tree in DFS order -> vertex indices.
std::vector<int> type0_vertices(const tree::MultitypeTree& t) {
  std::vector<int> out;
  for (int v = 0; v < t.size(); ++v)
    if (t.type(v) == 0) out.push_back(v);
  return out;
}

}  // namespace

std::variant<tree::MultitypeTree, Overflow> sample_flat_unconditioned(const FlatLaw& law, RngStream& rng,
                                                                      const SampleBudget& budget) {
  std::vector<const Entry*> order;
  std::int64_t pending = 1;
  std::int64_t vertices = 0;
  while (pending > 0) {
    const Entry& e = law.draw(rng);
    order.push_back(&e);
    vertices += profile_vertices(e);
    if (vertices > budget.max_vertices) return Overflow{vertices};
    pending += e.profile[0] - 1;
  }
  return build_flat_tree(order, law.num_types());
}

std::variant<MarkedFlatTree, Overflow> sample_spine_tree(const FlatLaw& law, int ell, RngStream& rng,
                                                         const SampleBudget& budget) {
  if (ell < 0) throw Error(ErrorKind::kInvalidArgument, "spine length must be nonnegative");
  std::vector<double> biased;
  double acc = 0.0;
  for (const auto& e : law.entries()) biased.push_back(acc += e.prob * e.profile[0]);
  if (ell > 0 && acc <= 0.0) throw Error(ErrorKind::kInvalidArgument, "blob law has no type-1 offspring");

  std::vector<const Entry*> order;
  std::vector<std::size_t> spine_ranks;
  // Stack entries: spine level (0..ell) or -1 for an ordinary vertex.
  std::vector<int> stack{0};
  std::int64_t vertices = 0;
  while (!stack.empty()) {
    const int level = stack.back();
    stack.pop_back();
    const Entry* e = nullptr;
    int continue_at = -1;
    if (level >= 0 && level < ell) {
      const double u = rng.uniform() * acc;
      auto idx = static_cast<std::size_t>(std::upper_bound(biased.begin(), biased.end(), u) - biased.begin());
      e = &law.entries()[std::min(idx, biased.size() - 1)];
      continue_at = static_cast<int>(rng.below(static_cast<std::uint64_t>(e->profile[0])));
    } else {
      e = &law.draw(rng);
    }
    if (level >= 0) spine_ranks.push_back(order.size());
    order.push_back(e);
    vertices += profile_vertices(*e);
    if (vertices > budget.max_vertices) return Overflow{vertices};
    for (int j = e->profile[0] - 1; j >= 0; --j) stack.push_back(j == continue_at ? level + 1 : -1);
  }
  MarkedFlatTree out;
  out.tree = build_flat_tree(order, law.num_types());
  const auto ids = type0_vertices(out.tree);
  for (auto r : spine_ranks) out.spine.push_back(ids[r]);
  out.mark = out.spine.back();
  return out;
}

}  // namespace bienayme::sampler
