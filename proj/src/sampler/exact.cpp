#include "bienayme/sampler/exact.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

#include "bienayme/analysis/feasibility.hpp"
#include "bienayme/errors.hpp"
#include "bienayme/sampler/degree_sequence.hpp"
#include "bienayme/tree/operations.hpp"

namespace bienayme::sampler {

using Entry = FlatLaw::Entry;

namespace {

std::size_t pick(const std::vector<double>& cdf, double u) {
  const auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back()) - cdf.begin());
  return std::min(idx, cdf.size() - 1);
}

}  // namespace

tree::MultitypeTree build_flat_tree(const std::vector<const Entry*>& order, int num_types) {
  std::vector<int> parent;
  std::vector<int> types;
  struct Frame {
    int idx;
    int remaining;
    const Entry* entry;
  };
  std::vector<Frame> stack;
  auto close = [&] {
    while (!stack.empty() && stack.back().remaining == 0) {
      const Frame f = stack.back();
      stack.pop_back();
      for (int ty = 1; ty < num_types; ++ty)
        for (int k = 0; k < f.entry->profile[static_cast<std::size_t>(ty)]; ++k) {
          parent.push_back(f.idx);
          types.push_back(ty);
        }
    }
  };
  for (const Entry* e : order) {
    const int idx = static_cast<int>(parent.size());
    parent.push_back(stack.empty() ? -1 : stack.back().idx);
    types.push_back(0);
    if (!stack.empty()) --stack.back().remaining;
    stack.push_back({idx, e->profile[0], e});
    close();
  }
  return tree::MultitypeTree(tree::PlaneTree::from_parents(std::move(parent)), std::move(types));
}

ExactSampler::ExactSampler(const kernel::OffspringFamily& family, std::int64_t n_max, const ExactOptions& opts)
    : family_(family),
      opts_(opts),
      flat_(family, opts.flat_law),
      decorations_(family, opts.shape_limit),
      n_max_(n_max) {
  const auto& lambda = family_.lambda();
  if (lambda[0] <= 0)
    throw Error(ErrorKind::kInvalidArgument, "the exact sampler needs a positive weight on type 1");
  if (n_max < 1) throw Error(ErrorKind::kInvalidArgument, "n_max must be positive");
  for (const auto& e : flat_.entries()) {
    std::int64_t s = lambda[0];
    for (int i = 1; i < flat_.num_types(); ++i)
      s += static_cast<std::int64_t>(lambda[static_cast<std::size_t>(i)]) * e.profile[static_cast<std::size_t>(i)];
    weight_.push_back(s);
  }
  fixed_count_ = std::all_of(weight_.begin(), weight_.end(), [&](std::int64_t s) { return s == weight_.front(); });
  c1_ = 0.0;
  for (std::size_t k = 0; k < weight_.size(); ++k) c1_ += flat_.entries()[k].prob * static_cast<double>(weight_[k]);
  c1_ /= flat_.coverage();

  const auto& entries = flat_.entries();
  if (fixed_count_) {
    marginal0_ = flat_.type0_marginal();
    for (std::size_t d = 0; d < marginal0_.size(); ++d)
      if (marginal0_[d] > 0.0) last_degree_ = d;
    by_degree_.resize(marginal0_.size());
    by_degree_cdf_.resize(marginal0_.size());
    for (const auto& e : entries) {
      const auto d = static_cast<std::size_t>(e.profile[0]);
      by_degree_[d].push_back(&e);
      by_degree_cdf_[d].push_back((by_degree_cdf_[d].empty() ? 0.0 : by_degree_cdf_[d].back()) + e.prob);
    }
    return;
  }
  if (n_max > opts.dp_limit)
    throw Error(ErrorKind::kBudgetExhausted, "n = " + std::to_string(n_max) + " exceeds the exact-sampler table limit " +
                                                 std::to_string(opts.dp_limit) + " for this weighting");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const int c = entries[k].profile[0];
    const std::int64_t s = weight_[k];
    auto it = std::find_if(groups_.begin(), groups_.end(), [&](const Group& g) { return g.children == c && g.weight == s; });
    if (it == groups_.end()) {
      groups_.push_back({c, s, 0.0, {}, {}});
      it = groups_.end() - 1;
    }
    it->prob += entries[k].prob;
    it->entries.push_back(&entries[k]);
    it->cdf.push_back(it->prob);
  }
  const int cmax = flat_.max_type0_children();
  const auto n = static_cast<std::size_t>(n_max);
  powers_.assign(static_cast<std::size_t>(std::max(cmax, 1)) + 1, std::vector<double>(n + 1, 0.0));
  powers_[0][0] = 1.0;
  for (std::size_t r = 1; r <= n; ++r) {
    double f = 0.0;
    for (const auto& g : groups_)
      if (static_cast<std::size_t>(g.weight) <= r)
        f += g.prob * powers_[static_cast<std::size_t>(g.children)][r - static_cast<std::size_t>(g.weight)];
    powers_[1][r] = f;
    for (std::size_t c = 2; c < powers_.size(); ++c) {
      double acc = 0.0;
      const auto& prev = powers_[c - 1];
      const auto& one = powers_[1];
      for (std::size_t k = 1; k < r; ++k) acc += one[k] * prev[r - k];
      powers_[c][r] = acc;
    }
  }
}

double ExactSampler::size_probability(std::int64_t n) const {
  if (fixed_count_) throw Error(ErrorKind::kInvalidArgument, "size probabilities are tabulated only for mixed weights");
  if (n < 1 || n > n_max_) return 0.0;
  return powers_[1][static_cast<std::size_t>(n)];
}

void ExactSampler::check_truncation(std::int64_t n) const {
  const double expected_lost = (1.0 - flat_.coverage()) * static_cast<double>(n) / c1_;
  if (expected_lost > opts_.truncation_tolerance)
    throw Error(ErrorKind::kTruncationTooCoarse,
                "blob law covers " + std::to_string(flat_.coverage()) + " of its mass; raise the expansion cap");
}

std::vector<const Entry*> ExactSampler::stage1_fixed(std::int64_t n, RngStream& rng, SampleStats* stats) const {
  const std::int64_t s = weight_.front();
  if (n % s != 0) throw Error(ErrorKind::kInfeasible, "n is not a multiple of the per-vertex weight");
  const std::int64_t l = n / s;
  const double total = flat_.coverage();
  bool checked = false;
  std::vector<std::int64_t> counts(marginal0_.size());
  for (std::int64_t attempt = 0; attempt < opts_.budget.max_attempts; ++attempt) {
    if (stats) ++stats->attempts;
    if (attempt == 1000 && !checked) {
      checked = true;
      if (!analysis::feasible_sizes(family_, std::min<std::int64_t>(n, 512)).contains(n))
        throw Error(ErrorKind::kInfeasible, "no tree has #_lambda = " + std::to_string(n));
    }
    // Multinomial(l, marginal) by sequential binomials.
    std::int64_t left = l;
    double mass_left = total;
    std::int64_t degree_sum = 0;
    for (std::size_t d = 0; d < marginal0_.size(); ++d) {
      std::int64_t k = 0;
      if (left > 0 && marginal0_[d] > 0.0) {
        const double p = marginal0_[d] / mass_left;
        k = d == last_degree_ || p >= 1.0 ? left : std::binomial_distribution<std::int64_t>(left, p)(rng.engine());
      }
      counts[d] = k;
      left -= k;
      mass_left -= marginal0_[d];
      degree_sum += k * static_cast<std::int64_t>(d);
    }
    if (left != 0 || degree_sum != l - 1) continue;
    std::vector<const Entry*> multiset;
    multiset.reserve(static_cast<std::size_t>(l));
    for (std::size_t d = 0; d < counts.size(); ++d)
      for (std::int64_t k = 0; k < counts[d]; ++k)
        multiset.push_back(by_degree_[d][pick(by_degree_cdf_[d], rng.uniform())]);
    return multiset;
  }
  throw Error(ErrorKind::kBudgetExhausted, "multinomial stage ran out of attempts");
}

std::vector<const Entry*> ExactSampler::stage1_weights(std::int64_t n, RngStream& rng) const {
  if (powers_[1][static_cast<std::size_t>(n)] <= 0.0)
    throw Error(ErrorKind::kInfeasible, "no tree has #_lambda = " + std::to_string(n));
  std::vector<const Entry*> order;
  std::vector<std::int64_t> stack{n};
  std::vector<double> weights(groups_.size());
  while (!stack.empty()) {
    const auto r = static_cast<std::size_t>(stack.back());
    stack.pop_back();
    double total = 0.0;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const auto& grp = groups_[g];
      const double w = static_cast<std::size_t>(grp.weight) <= r
                           ? grp.prob * powers_[static_cast<std::size_t>(grp.children)][r - static_cast<std::size_t>(grp.weight)]
                           : 0.0;
      weights[g] = (total += w);
    }
    const auto& grp = groups_[pick(weights, rng.uniform())];
    order.push_back(grp.entries[pick(grp.cdf, rng.uniform())]);
    // Split the remaining budget among the type-0 children.
    std::size_t rest = r - static_cast<std::size_t>(grp.weight);
    std::vector<std::int64_t> budgets;
    for (int m = grp.children; m > 1; --m) {
      const auto& tail = powers_[static_cast<std::size_t>(m - 1)];
      const double target = rng.uniform() * powers_[static_cast<std::size_t>(m)][rest];
      double acc = 0.0;
      std::size_t chosen = 0;
      for (std::size_t k = 1; k < rest; ++k) {
        const double w = powers_[1][k] * tail[rest - k];
        if (w <= 0.0) continue;
        chosen = k;
        if ((acc += w) >= target) break;
      }
      budgets.push_back(static_cast<std::int64_t>(chosen));
      rest -= chosen;
    }
    if (grp.children > 0) budgets.push_back(static_cast<std::int64_t>(rest));
    for (auto it = budgets.rbegin(); it != budgets.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

std::vector<const Entry*> ExactSampler::stage1(std::int64_t n, RngStream& rng, SampleStats* stats) const {
  if (n < 1) throw Error(ErrorKind::kInfeasible, "n must be positive");
  if (n > n_max_) throw Error(ErrorKind::kInvalidArgument, "n exceeds the sampler's n_max");
  check_truncation(n);
  if (fixed_count_) return stage1_fixed(n, rng, stats);
  if (stats) ++stats->attempts;
  return stage1_weights(n, rng);
}

std::vector<const Entry*> ExactSampler::arrange(std::int64_t n, RngStream& rng, SampleStats* stats) const {
  auto profiles = stage1(n, rng, stats);
  // Stage 2: uniform arrangement, then the cycle-lemma rotation.
  std::shuffle(profiles.begin(), profiles.end(), rng.engine());
  std::vector<int> degrees;
  degrees.reserve(profiles.size());
  for (const Entry* e : profiles) degrees.push_back(e->profile[0]);
  const auto r = cycle_lemma_rotation(degrees);
  std::rotate(profiles.begin(), profiles.begin() + static_cast<std::ptrdiff_t>(r), profiles.end());
  return profiles;
}

tree::MultitypeTree ExactSampler::sample_flat(std::int64_t n, RngStream& rng, SampleStats* stats) const {
  return build_flat_tree(arrange(n, rng, stats), flat_.num_types());
}

// Equivalent to blow_up(sample_flat(...), decorate(...)).tree with the same
// draws, without materializing the flat tree or copying blob shapes.
tree::MultitypeTree ExactSampler::sample(std::int64_t n, RngStream& rng, SampleStats* stats) const {
  const auto order = arrange(n, rng, stats);
  const std::size_t l = order.size();

  // Type-0 children of each rank, in order (CSR).
  std::vector<int> first(l + 1, 0);
  for (std::size_t r = 0; r < l; ++r) first[r + 1] = first[r] + order[r]->profile[0];
  std::vector<int> kids(static_cast<std::size_t>(first[l]));
  std::vector<int> fill(first.begin(), first.end() - 1);
  std::vector<int> open;
  for (std::size_t r = 0; r < l; ++r) {
    while (!open.empty() && fill[static_cast<std::size_t>(open.back())] == first[static_cast<std::size_t>(open.back()) + 1])
      open.pop_back();
    if (!open.empty()) kids[static_cast<std::size_t>(fill[static_cast<std::size_t>(open.back())]++)] = static_cast<int>(r);
    if (order[r]->profile[0] > 0) open.push_back(static_cast<int>(r));
  }

  std::map<const Entry*, DecorationSampler::Handle> handles;
  std::deque<tree::MultitypeTree> owned;
  std::vector<const tree::MultitypeTree*> alpha(l);
  std::size_t total = 0;
  for (std::size_t r = 0; r < l; ++r) {
    auto it = handles.find(order[r]);
    if (it == handles.end()) it = handles.emplace(order[r], decorations_.handle(order[r]->profile)).first;
    alpha[r] = &decorations_.draw(it->second, rng, opts_.budget, owned);
    total += static_cast<std::size_t>(alpha[r]->size());
  }

  std::vector<int> parent;
  std::vector<int> types;
  parent.reserve(total);
  types.reserve(total);
  struct Item {
    int rank;
    int u;
    int parent;
  };
  std::vector<int> next_slot(l, 0);
  std::vector<Item> stack{{0, 0, -1}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const auto& a = *alpha[static_cast<std::size_t>(it.rank)];
    if (it.u != 0 && a.type(it.u) == 0) {
      // Frontier leaves are met in DFS order, so slots are consumed in order.
      const int slot = next_slot[static_cast<std::size_t>(it.rank)]++;
      stack.push_back({kids[static_cast<std::size_t>(first[static_cast<std::size_t>(it.rank)] + slot)], 0, it.parent});
      continue;
    }
    const int idx = static_cast<int>(parent.size());
    parent.push_back(it.parent);
    types.push_back(a.type(it.u));
    const auto ch = a.shape.children(it.u);
    for (auto k = ch.rbegin(); k != ch.rend(); ++k) stack.push_back({it.rank, *k, idx});
  }
  return tree::MultitypeTree(tree::PlaneTree::from_parents(std::move(parent)), std::move(types));
}

tree::MultitypeTree sample_conditioned_exact(const kernel::OffspringFamily& family, std::int64_t n, RngStream& rng) {
  return ExactSampler(family, n).sample(n, rng);
}

}  // namespace bienayme::sampler
