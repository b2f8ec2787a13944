#include "bienayme/analysis/feasibility.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "bienayme/errors.hpp"

namespace bienayme::analysis {

namespace {

class Bits {
 public:
  explicit Bits(std::int64_t n) : n_(n), w_(static_cast<std::size_t>(n / 64 + 1), 0) {}
  bool test(std::int64_t i) const { return (w_[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1u; }
  void set(std::int64_t i) { w_[static_cast<std::size_t>(i / 64)] |= std::uint64_t{1} << (i % 64); }
  bool operator==(const Bits& o) const { return w_ == o.w_; }
  // this |= other << shift, truncated to [0, n].
  void or_shifted(const Bits& other, std::int64_t shift) {
    if (shift > n_) return;
    const auto ws = static_cast<std::size_t>(shift / 64);
    const int bs = static_cast<int>(shift % 64);
    for (std::size_t i = w_.size(); i-- > ws;) {
      std::uint64_t v = other.w_[i - ws] << bs;
      if (bs != 0 && i - ws >= 1) v |= other.w_[i - ws - 1] >> (64 - bs);
      w_[i] |= v;
    }
    trim();
  }
  Bits sumset(const Bits& other) const {
    Bits out(n_);
    for (std::int64_t a = 0; a <= n_; ++a)
      if (test(a)) out.or_shifted(other, a);
    return out;
  }
  std::int64_t size() const { return n_; }

 private:
  void trim() {
    const auto extra = static_cast<int>(w_.size() * 64 - static_cast<std::size_t>(n_) - 1);
    if (extra > 0) w_.back() &= ~std::uint64_t{0} >> extra;
  }
  std::int64_t n_;
  std::vector<std::uint64_t> w_;
};

}  // namespace

bool FeasibleSizes::contains(std::int64_t n) const {
  if (n < 0) return false;
  if (n <= N) return feasible[static_cast<std::size_t>(n)] != 0;
  if (!periodic_tail || period == 0) return false;
  return (n - offset) % period == 0;
}

std::vector<std::int64_t> FeasibleSizes::values() const {
  std::vector<std::int64_t> out;
  for (std::int64_t n = 0; n <= N; ++n)
    if (feasible[static_cast<std::size_t>(n)]) out.push_back(n);
  return out;
}

FeasibleSizes feasible_sizes(const kernel::OffspringFamily& family, std::int64_t N) {
  if (N < 0) throw Error(ErrorKind::kInvalidArgument, "N must be nonnegative");
  const int T = family.num_types();
  const auto& lambda = family.lambda();
  const auto proj = kernel::projection(family);
  int max_count = 0;
  for (const auto& law : proj.per_type)
    for (const auto& [k, p] : law)
      for (int c : k) max_count = std::max(max_count, c);

  std::vector<Bits> reach(static_cast<std::size_t>(T), Bits(N));
  FeasibleSizes out;
  out.N = N;
  const std::int64_t max_iters = 4 * std::max<std::int64_t>(N, 1) + 4;
  bool stable = false;
  for (std::int64_t iter = 0; iter < max_iters; ++iter) {
    // powers[c][m] = m-fold sumset of reach[c]
    std::vector<std::vector<Bits>> powers(static_cast<std::size_t>(T));
    for (int c = 0; c < T; ++c) {
      Bits zero(N);
      zero.set(0);
      powers[static_cast<std::size_t>(c)].push_back(zero);
      for (int m = 1; m <= max_count; ++m)
        powers[static_cast<std::size_t>(c)].push_back(
            powers[static_cast<std::size_t>(c)].back().sumset(reach[static_cast<std::size_t>(c)]));
    }
    std::vector<Bits> next(static_cast<std::size_t>(T), Bits(N));
    for (int i = 0; i < T; ++i) {
      for (const auto& [k, p] : proj.per_type[static_cast<std::size_t>(i)]) {
        Bits acc(N);
        acc.set(0);
        for (int c = 0; c < T; ++c)
          if (k[static_cast<std::size_t>(c)] > 0)
            acc = acc.sumset(powers[static_cast<std::size_t>(c)][static_cast<std::size_t>(k[static_cast<std::size_t>(c)])]);
        next[static_cast<std::size_t>(i)].or_shifted(acc, lambda[static_cast<std::size_t>(i)]);
      }
    }
    if (next == reach) {
      stable = true;
      break;
    }
    reach = std::move(next);
  }
  out.provisional = !stable;
  out.feasible.assign(static_cast<std::size_t>(N + 1), 0);
  for (std::int64_t n = 0; n <= N; ++n) out.feasible[static_cast<std::size_t>(n)] = reach[0].test(n);
  const auto vals = out.values();
  if (!vals.empty()) {
    for (auto v : vals) out.period = std::gcd(out.period, v - vals.front());
    out.offset = out.period > 0 ? vals.front() % out.period : vals.front();
  }
  if (out.period > 0 && !out.provisional) {
    out.periodic_tail = true;
    for (std::int64_t n = N / 2; n <= N; ++n)
      if ((n - out.offset) % out.period == 0 && !out.contains(n)) out.periodic_tail = false;
  }
  return out;
}

std::set<std::int64_t> feasible_sizes_bruteforce(const kernel::OffspringFamily& family, int max_vertices) {
  const int T = family.num_types();
  const auto& lambda = family.lambda();
  const auto proj = kernel::projection(family);
  std::set<std::int64_t> out;
  // State: vertices placed, weight so far, pending vertices per type. The
  // planar order of pending vertices does not change any weight, so states
  // are deduplicated.
  using State = std::pair<std::pair<int, std::int64_t>, std::vector<int>>;
  std::set<State> seen;
  std::vector<State> work;
  std::vector<int> start(static_cast<std::size_t>(T), 0);
  start[0] = 1;
  work.push_back({{1, lambda[0]}, start});
  while (!work.empty()) {
    State s = std::move(work.back());
    work.pop_back();
    if (!seen.insert(s).second) continue;
    auto& pending = s.second;
    const auto it = std::find_if(pending.begin(), pending.end(), [](int c) { return c > 0; });
    if (it == pending.end()) {
      out.insert(s.first.second);
      continue;
    }
    const int type = static_cast<int>(it - pending.begin());
    for (const auto& [k, p] : proj.per_type[static_cast<std::size_t>(type)]) {
      const int kids = std::accumulate(k.begin(), k.end(), 0);
      if (s.first.first + kids > max_vertices) continue;
      State next = s;
      --next.second[static_cast<std::size_t>(type)];
      next.first.first += kids;
      for (int c = 0; c < T; ++c) {
        next.second[static_cast<std::size_t>(c)] += k[static_cast<std::size_t>(c)];
        next.first.second += static_cast<std::int64_t>(k[static_cast<std::size_t>(c)]) * lambda[static_cast<std::size_t>(c)];
      }
      work.push_back(std::move(next));
    }
  }
  return out;
}

}  // namespace bienayme::analysis
