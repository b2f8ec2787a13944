#include "bienayme/sampler/decoration.hpp"

#include <algorithm>
#include <string>

#include "bienayme/errors.hpp"

namespace bienayme::sampler {

using kernel::Counts;
using tree::MultitypeTree;

namespace {

// can[i][j]: a non-root vertex of type i can have a blob descendant of type
// j (type-0 descendants end the blob, so only types >= 1 propagate).
std::vector<std::vector<char>> blob_reach(const kernel::OffspringFamily& family) {
  const auto T = static_cast<std::size_t>(family.num_types());
  std::vector<std::vector<char>> can(T, std::vector<char>(T, 0));
  for (std::size_t i = 1; i < T; ++i)
    for (const auto& e : family.law(static_cast<int>(i)).support())
      for (int c : e.word) can[i][static_cast<std::size_t>(c)] = 1;
  for (std::size_t k = 1; k < T; ++k)
    for (std::size_t i = 1; i < T; ++i)
      if (can[i][k])
        for (std::size_t j = 0; j < T; ++j) can[i][j] = can[i][j] || can[k][j];
  return can;
}

struct Enumerator {
  const kernel::OffspringFamily& family;
  std::size_t limit;
  std::int64_t work_limit;
  std::vector<std::vector<char>> can;
  BlobTable out;
  std::vector<int> outdegree;
  std::vector<int> types;
  std::vector<int> stack;  // pending vertex types, top at back
  Counts remaining;
  std::int64_t work = 0;

  // Every missing type must be producible by some pending non-frontier vertex.
  bool completable() const {
    for (std::size_t j = 0; j < remaining.size(); ++j) {
      if (remaining[j] == 0) continue;
      bool ok = false;
      for (int t : stack)
        if ((t != 0 || types.empty()) && (t == 0 ? true : can[static_cast<std::size_t>(t)][j] != 0)) {
          ok = true;
          break;
        }
      if (!ok) return false;
    }
    return true;
  }

  void run(double prob) {
    if (!out.complete) return;
    if (++work > work_limit) {
      out.complete = false;
      return;
    }
    if (!completable()) return;
    if (stack.empty()) {
      if (std::all_of(remaining.begin(), remaining.end(), [](int r) { return r == 0; })) {
        if (out.shapes.size() >= limit) {
          out.complete = false;
          return;
        }
        out.shapes.emplace_back(tree::PlaneTree::from_outdegrees(outdegree), types);
        out.probs.push_back(prob);
      }
      return;
    }
    const int type = stack.back();
    stack.pop_back();
    types.push_back(type);
    if (type == 0 && types.size() > 1) {
      // Frontier vertex: a leaf of the blob.
      outdegree.push_back(0);
      run(prob);
      outdegree.pop_back();
    } else {
      for (const auto& e : family.law(type).support()) {
        bool fits = true;
        for (int c : e.word)
          if (--remaining[static_cast<std::size_t>(c)] < 0) fits = false;
        if (fits) {
          outdegree.push_back(static_cast<int>(e.word.size()));
          const auto depth = stack.size();
          for (auto it = e.word.rbegin(); it != e.word.rend(); ++it) stack.push_back(*it);
          run(prob * e.prob);
          stack.resize(depth);
          outdegree.pop_back();
        }
        for (int c : e.word) ++remaining[static_cast<std::size_t>(c)];
      }
    }
    types.pop_back();
    stack.push_back(type);
  }
};

}  // namespace

BlobTable enumerate_blobs(const kernel::OffspringFamily& family, const Counts& profile, std::size_t shape_limit) {
  if (static_cast<int>(profile.size()) != family.num_types())
    throw Error(ErrorKind::kInvalidArgument, "profile length differs from number of types");
  Enumerator e{family, shape_limit, 256 * static_cast<std::int64_t>(shape_limit) + 4096, blob_reach(family), {}, {}, {},
               {0}, profile};
  e.run(1.0);
  return std::move(e.out);
}

DecorationSampler::DecorationSampler(const kernel::OffspringFamily& family, std::size_t shape_limit)
    : family_(family), words_(family), shape_limit_(shape_limit) {}

const DecorationSampler::Cached& DecorationSampler::cached(const Counts& profile) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(profile);
  if (it != cache_.end()) return *it->second;
  auto c = std::make_unique<Cached>();
  auto table = std::make_shared<BlobTable>(enumerate_blobs(family_, profile, shape_limit_));
  double acc = 0.0;
  for (double p : table->probs) c->cdf.push_back(acc += p);
  c->table = std::move(table);
  return *cache_.emplace(profile, std::move(c)).first->second;
}

std::shared_ptr<const BlobTable> DecorationSampler::table(const Counts& profile) const {
  return cached(profile).table;
}

DecorationSampler::Handle DecorationSampler::handle(const Counts& profile) const {
  const auto& c = cached(profile);
  return {c.table.get(), &c.cdf, profile};
}

const MultitypeTree& DecorationSampler::draw(const Handle& h, RngStream& rng, const SampleBudget& budget,
                                             std::deque<MultitypeTree>& owned) const {
  if (!h.table->complete) return owned.emplace_back(reject(h.profile, rng, budget));
  if (h.cdf->empty()) throw Error(ErrorKind::kDecorationMismatch, "no blob shape has the requested profile");
  const double u = rng.uniform() * h.cdf->back();
  auto idx = static_cast<std::size_t>(std::upper_bound(h.cdf->begin(), h.cdf->end(), u) - h.cdf->begin());
  return h.table->shapes[std::min(idx, h.cdf->size() - 1)];
}

MultitypeTree DecorationSampler::draw(const Counts& profile, RngStream& rng, const SampleBudget& budget) const {
  std::deque<MultitypeTree> owned;
  return draw(handle(profile), rng, budget, owned);
}

MultitypeTree DecorationSampler::reject(const Counts& profile, RngStream& rng, const SampleBudget& budget) const {
  for (std::int64_t attempt = 0; attempt < budget.max_attempts; ++attempt) {
    Counts remaining = profile;
    std::vector<int> outdegree;
    std::vector<int> types;
    std::vector<int> stack{0};
    bool ok = true;
    while (!stack.empty() && ok) {
      const int type = stack.back();
      stack.pop_back();
      types.push_back(type);
      if (type == 0 && types.size() > 1) {
        outdegree.push_back(0);
        continue;
      }
      const auto& w = words_.draw(type, rng);
      outdegree.push_back(static_cast<int>(w.size()));
      for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (--remaining[static_cast<std::size_t>(*it)] < 0) ok = false;
        stack.push_back(*it);
      }
    }
    if (ok && std::all_of(remaining.begin(), remaining.end(), [](int r) { return r == 0; }))
      return MultitypeTree(tree::PlaneTree::from_outdegrees(outdegree), std::move(types));
  }
  throw Error(ErrorKind::kBudgetExhausted, "decoration rejection ran out of attempts");
}

tree::Decoration DecorationSampler::decorate(const MultitypeTree& flat, RngStream& rng,
                                             const SampleBudget& budget) const {
  tree::Decoration alpha;
  const int T = family_.num_types();
  for (int v = 0; v < flat.size(); ++v) {
    if (flat.type(v) != 0) continue;
    Counts profile(static_cast<std::size_t>(T), 0);
    for (int c : flat.shape.children(v)) ++profile[static_cast<std::size_t>(flat.type(c))];
    alpha.push_back(draw(profile, rng, budget));
  }
  return alpha;
}

}  // namespace bienayme::sampler
