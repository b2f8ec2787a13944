#include "bienayme/sampler/flat_law.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "bienayme/errors.hpp"

namespace bienayme::sampler {

namespace {

// Profiles packed in mixed radix (cap + 1) per type.
struct Packing {
  int types;
  std::uint64_t radix;

  std::uint64_t unit(int type) const {
    std::uint64_t u = 1;
    for (int i = 0; i < type; ++i) u *= radix;
    return u;
  }
  int total(std::uint64_t key) const {
    int t = 0;
    for (int i = 0; i < types; ++i, key /= radix) t += static_cast<int>(key % radix);
    return t;
  }
  kernel::Counts unpack(std::uint64_t key) const {
    kernel::Counts c(static_cast<std::size_t>(types));
    for (int i = 0; i < types; ++i, key /= radix) c[static_cast<std::size_t>(i)] = static_cast<int>(key % radix);
    return c;
  }
};

using Dist = std::unordered_map<std::uint64_t, double>;

Dist convolve(const Dist& a, const Dist& b, const Packing& pk, int cap) {
  Dist out;
  for (const auto& [ka, pa] : a) {
    const int ta = pk.total(ka);
    for (const auto& [kb, pb] : b) {
      if (ta + pk.total(kb) > cap) continue;
      out[ka + kb] += pa * pb;
    }
  }
  return out;
}

double mass(const Dist& d) {
  double m = 0.0;
  for (const auto& [k, p] : d) m += p;
  return m;
}

// One application of the blob recursion: for a vertex of the given type,
// sum over its words of the product of its children's laws; type-0 children
// contribute a unit frontier count.
Dist expand(const std::map<kernel::Counts, double>& proj, const std::vector<Dist>& nu, const Packing& pk,
            int cap) {
  const int T = pk.types;
  Dist out;
  std::vector<std::vector<Dist>> powers(static_cast<std::size_t>(T));
  auto power = [&](int c, int m) -> const Dist& {
    auto& pw = powers[static_cast<std::size_t>(c)];
    if (pw.empty()) pw.push_back(Dist{{0, 1.0}});
    while (static_cast<int>(pw.size()) <= m) pw.push_back(convolve(pw.back(), nu[static_cast<std::size_t>(c)], pk, cap));
    return pw[static_cast<std::size_t>(m)];
  };
  for (const auto& [k, p] : proj) {
    if (k[0] > cap) continue;
    Dist acc{{static_cast<std::uint64_t>(k[0]), p}};
    for (int c = 1; c < T && !acc.empty(); ++c)
      if (k[static_cast<std::size_t>(c)] > 0) acc = convolve(acc, power(c, k[static_cast<std::size_t>(c)]), pk, cap);
    for (const auto& [key, q] : acc) out[key] += q;
  }
  return out;
}

}  // namespace

FlatLaw::FlatLaw(const kernel::OffspringFamily& family, const FlatLawOptions& opts)
    : num_types_(family.num_types()) {
  const int T = num_types_;
  const auto proj = kernel::projection(family);
  for (int cap = opts.initial_cap;; cap *= 2) {
    const double bits = std::log2(static_cast<double>(cap) + 1.0) * T;
    if (bits > 63.0) throw Error(ErrorKind::kTruncationTooCoarse, "too many types to pack blob profiles");
    const Packing pk{T, static_cast<std::uint64_t>(cap) + 1};
    std::vector<Dist> nu(static_cast<std::size_t>(T));
    double previous = -1.0;
    for (int iter = 0; iter < 100000; ++iter) {
      std::vector<Dist> next(static_cast<std::size_t>(T));
      double total = 0.0;
      for (int j = 1; j < T; ++j) {
        Dist e = expand(proj.per_type[static_cast<std::size_t>(j)], nu, pk, cap - 1);
        Dist shifted;
        for (const auto& [k, p] : e) shifted[k + pk.unit(j)] = p;
        total += mass(shifted);
        next[static_cast<std::size_t>(j)] = std::move(shifted);
      }
      nu = std::move(next);
      if (std::abs(total - previous) <= 1e-16 * std::max(1.0, total)) break;
      previous = total;
    }
    Dist mu = expand(proj.per_type[0], nu, pk, cap);
    cap_ = cap;
    coverage_ = mass(mu);
    entries_.clear();
    for (const auto& [k, p] : mu)
      if (p > 0.0) entries_.push_back({pk.unpack(k), p});
    if (coverage_ >= opts.coverage || cap * 2 > opts.max_cap) break;
  }
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.profile < b.profile; });
  double acc = 0.0;
  for (const auto& e : entries_) {
    cdf_.push_back(acc += e.prob);
    max_type0_children_ = std::max(max_type0_children_, e.profile[0]);
  }
}

double FlatLaw::mean(int type) const {
  double m = 0.0;
  for (const auto& e : entries_) m += e.prob * e.profile[static_cast<std::size_t>(type)];
  return m / coverage_;
}

double FlatLaw::second_moment(int type) const {
  double m = 0.0;
  for (const auto& e : entries_) {
    const double x = e.profile[static_cast<std::size_t>(type)];
    m += e.prob * x * x;
  }
  return m / coverage_;
}

std::vector<double> FlatLaw::type0_marginal() const {
  std::vector<double> out(static_cast<std::size_t>(max_type0_children_) + 1, 0.0);
  for (const auto& e : entries_) out[static_cast<std::size_t>(e.profile[0])] += e.prob;
  return out;
}

const FlatLaw::Entry& FlatLaw::draw(RngStream& rng) const {
  const double u = rng.uniform() * cdf_.back();
  auto idx = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  return entries_[std::min(idx, entries_.size() - 1)];
}

}  // namespace bienayme::sampler
