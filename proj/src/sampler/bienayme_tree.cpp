#include "bienayme/sampler/bienayme_tree.hpp"

#include <algorithm>
#include <string>

#include "bienayme/analysis/feasibility.hpp"
#include "bienayme/errors.hpp"

namespace bienayme::sampler {

using kernel::Word;
using tree::MultitypeTree;
using tree::PlaneTree;

WordSampler::WordSampler(const kernel::OffspringFamily& family) : family_(family) {
  for (const auto& law : family_.laws()) {
    std::vector<double> cdf;
    double acc = 0.0;
    for (const auto& e : law.support()) cdf.push_back(acc += e.prob);
    cdf.back() = 1.0;
    cdf_.push_back(std::move(cdf));
  }
}

const Word& WordSampler::draw(int type, RngStream& rng) const {
  const auto& cdf = cdf_[static_cast<std::size_t>(type)];
  const double u = rng.uniform();
  const auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  return family_.law(type).support()[std::min(idx, cdf.size() - 1)].word;
}

namespace {

// Grows a Bienaymé tree in DFS order. `pending_cost(type)` is charged when a
// vertex is scheduled; growth stops as soon as `over()` reports the charge
// can no longer end on target.
template <class Schedule, class Over>
std::optional<MultitypeTree> grow(const WordSampler& words, int root_type, RngStream& rng,
                                  std::int64_t max_vertices, Schedule schedule, Over over) {
  std::vector<int> outdegree;
  std::vector<int> types;
  std::vector<int> stack{root_type};
  schedule(root_type);
  while (!stack.empty()) {
    if (over() || static_cast<std::int64_t>(types.size()) >= max_vertices) return std::nullopt;
    const int type = stack.back();
    stack.pop_back();
    const Word& w = words.draw(type, rng);
    types.push_back(type);
    outdegree.push_back(static_cast<int>(w.size()));
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      stack.push_back(*it);
      schedule(*it);
    }
  }
  if (over()) return std::nullopt;
  return MultitypeTree(PlaneTree::from_outdegrees(outdegree), std::move(types));
}

}  // namespace

Unconditioned sample_unconditioned(const WordSampler& words, int root_type, RngStream& rng,
                                   const SampleBudget& budget) {
  if (root_type < 0 || root_type >= words.family().num_types())
    throw Error(ErrorKind::kInvalidArgument, "root type out of range");
  std::int64_t scheduled = 0;
  auto t = grow(words, root_type, rng, budget.max_vertices, [&](int) { ++scheduled; }, [] { return false; });
  if (!t) return Overflow{scheduled};
  return std::move(*t);
}

MultitypeTree sample_conditioned_rejection(const WordSampler& words, std::int64_t n, RngStream& rng,
                                           const SampleBudget& budget, SampleStats* stats) {
  const auto& lambda = words.family().lambda();
  for (std::int64_t attempt = 0; attempt < budget.max_attempts; ++attempt) {
    if (stats) ++stats->attempts;
    // Every scheduled vertex will contribute its lambda weight, so the
    // running total is a lower bound on the final #_lambda.
    std::int64_t weight = 0;
    auto t = grow(
        words, 0, rng, budget.max_vertices, [&](int type) { weight += lambda[static_cast<std::size_t>(type)]; },
        [&] { return weight > n; });
    if (t && weight == n) return std::move(*t);
  }
  if (!analysis::feasible_sizes(words.family(), n).contains(n))
    throw Error(ErrorKind::kInfeasible, "no tree has #_lambda = " + std::to_string(n));
  throw Error(ErrorKind::kBudgetExhausted,
              "rejection sampler used " + std::to_string(budget.max_attempts) + " attempts at n = " +
                  std::to_string(n));
}

MultitypeTree sample_by_type(const WordSampler& words, const std::vector<int>& types,
                             const std::vector<std::int64_t>& targets, RngStream& rng,
                             const SampleBudget& budget, SampleStats* stats) {
  const int num_types = words.family().num_types();
  if (types.empty() || types.size() != targets.size())
    throw Error(ErrorKind::kInvalidArgument, "need one target per conditioned type");
  std::vector<int> slot(static_cast<std::size_t>(num_types), -1);
  for (std::size_t k = 0; k < types.size(); ++k) {
    if (types[k] < 0 || types[k] >= num_types || slot[static_cast<std::size_t>(types[k])] != -1)
      throw Error(ErrorKind::kInvalidArgument, "conditioned types must be distinct and in range");
    if (targets[k] < 0) throw Error(ErrorKind::kInvalidArgument, "targets must be nonnegative");
    slot[static_cast<std::size_t>(types[k])] = static_cast<int>(k);
  }
  for (std::int64_t attempt = 0; attempt < budget.max_attempts; ++attempt) {
    if (stats) ++stats->attempts;
    std::vector<std::int64_t> count(types.size(), 0);
    bool over = false;
    auto t = grow(
        words, 0, rng, budget.max_vertices,
        [&](int type) {
          const int s = slot[static_cast<std::size_t>(type)];
          if (s >= 0 && ++count[static_cast<std::size_t>(s)] > targets[static_cast<std::size_t>(s)]) over = true;
        },
        [&] { return over; });
    if (t && count == targets) return std::move(*t);
  }
  throw Error(ErrorKind::kBudgetExhausted,
              "by-type sampler used " + std::to_string(budget.max_attempts) + " attempts");
}

std::optional<kernel::Counts> sample_blob_profile(const WordSampler& words, RngStream& rng,
                                                  const SampleBudget& budget) {
  kernel::Counts profile(static_cast<std::size_t>(words.family().num_types()), 0);
  std::vector<int> stack{0};
  std::int64_t vertices = 0;
  bool root = true;
  while (!stack.empty()) {
    if (++vertices > budget.max_vertices) return std::nullopt;
    const int type = stack.back();
    stack.pop_back();
    if (!root) ++profile[static_cast<std::size_t>(type)];
    root = false;
    for (int c : words.draw(type, rng)) {
      if (c == 0)
        ++profile[0];
      else
        stack.push_back(c);
    }
  }
  return profile;
}

double tree_probability(const kernel::OffspringFamily& family, const tree::MultitypeTree& t) {
  double p = 1.0;
  kernel::Word word;
  for (int v = 0; v < t.shape.size(); ++v) {
    word.clear();
    for (int c : t.shape.children(v)) word.push_back(t.types[static_cast<std::size_t>(c)]);
    p *= family.law(t.types[static_cast<std::size_t>(v)]).prob_of(word);
    if (p == 0.0) break;
  }
  return p;
}

}  // namespace bienayme::sampler
