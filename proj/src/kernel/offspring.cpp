#include "bienayme/kernel/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <set>
#include <string>

#include "bienayme/errors.hpp"

namespace bienayme::kernel {

Counts word_counts(const Word& word, int num_types) {
  Counts counts(static_cast<std::size_t>(num_types), 0);
  for (int symbol : word) ++counts.at(static_cast<std::size_t>(symbol));
  return counts;
}

OffspringLaw::OffspringLaw(std::vector<WordProb> support, double tail_mass_bound)
    : support_(std::move(support)), tail_mass_bound_(tail_mass_bound) {
  if (support_.empty()) throw Error(ErrorKind::kInvalidArgument, "offspring law has empty support");
  if (!(tail_mass_bound_ >= 0.0 && tail_mass_bound_ < 1.0))
    throw Error(ErrorKind::kInvalidArgument, "tail mass bound must lie in [0,1)");
  std::set<Word> seen;
  double total = 0.0;
  for (const auto& entry : support_) {
    if (!(entry.prob >= 0.0) || !std::isfinite(entry.prob))
      throw Error(ErrorKind::kInvalidArgument, "negative or non-finite word probability");
    if (!seen.insert(entry.word).second)
      throw Error(ErrorKind::kInvalidArgument, "duplicate word in offspring law");
    total += entry.prob;
  }
  const double tol = 1e-12;
  if (total > 1.0 + tol || total < 1.0 - tail_mass_bound_ - tol)
    throw Error(ErrorKind::kInvalidArgument,
                "word probabilities sum to " + std::to_string(total) + ", expected 1");
  for (auto& entry : support_) entry.prob /= total;
  // Zero-probability words carry no information and would only slow samplers.
  std::erase_if(support_, [](const WordProb& e) { return e.prob == 0.0; });
}

double OffspringLaw::prob_of(const Word& word) const {
  for (const auto& entry : support_)
    if (entry.word == word) return entry.prob;
  return 0.0;
}

std::size_t OffspringLaw::max_word_length() const {
  std::size_t longest = 0;
  for (const auto& entry : support_) longest = std::max(longest, entry.word.size());
  return longest;
}

std::vector<double> truncated_poisson_pmf(double mean, double tail_mass) {
  if (!(mean >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "Poisson mean must be >= 0");
  if (mean == 0.0) return {1.0};
  std::vector<double> pmf;
  double p = std::exp(-mean);
  double cumulative = 0.0;
  for (int k = 0;; ++k) {
    if (k > 0) p *= mean / k;
    pmf.push_back(p);
    cumulative += p;
    if (k >= mean && 1.0 - cumulative <= tail_mass) break;
    if (k > 100000) throw Error(ErrorKind::kInvalidArgument, "Poisson truncation did not terminate");
  }
  return pmf;
}

std::vector<double> truncated_geometric_pmf(double mean, double tail_mass) {
  if (!(mean >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "geometric mean must be >= 0");
  if (mean == 0.0) return {1.0};
  // P(k) = (1-q) q^k with q = mean / (1 + mean); tail P(X > k) = q^(k+1).
  const double q = mean / (1.0 + mean);
  std::vector<double> pmf;
  double p = 1.0 - q;
  double tail = q;
  for (int k = 0;; ++k) {
    pmf.push_back(p);
    if (tail <= tail_mass) break;
    p *= q;
    tail *= q;
    if (k > 1000000) throw Error(ErrorKind::kInvalidArgument, "geometric truncation did not terminate");
  }
  return pmf;
}

OffspringLaw product_law(const std::vector<std::vector<double>>& marginals, double tail_mass) {
  const int num_types = static_cast<int>(marginals.size());
  std::vector<WordProb> support;
  Counts counts(static_cast<std::size_t>(num_types), 0);
  double kept = 0.0;
  // Odometer over the product of marginal supports.
  while (true) {
    double p = 1.0;
    Word word;
    for (int t = 0; t < num_types; ++t) {
      p *= marginals[static_cast<std::size_t>(t)][static_cast<std::size_t>(counts[static_cast<std::size_t>(t)])];
      word.insert(word.end(), static_cast<std::size_t>(counts[static_cast<std::size_t>(t)]), t);
    }
    if (p > 0.0) {
      support.push_back({std::move(word), p});
      kept += p;
    }
    int t = 0;
    for (; t < num_types; ++t) {
      auto& c = counts[static_cast<std::size_t>(t)];
      if (static_cast<std::size_t>(c + 1) < marginals[static_cast<std::size_t>(t)].size()) {
        ++c;
        break;
      }
      c = 0;
    }
    if (t == num_types) break;
  }
  const double dropped = std::max(0.0, 1.0 - kept);
  if (dropped > tail_mass + 1e-12)
    throw Error(ErrorKind::kInvalidArgument, "product law dropped more mass than requested");
  return OffspringLaw(std::move(support), dropped);
}

namespace {
int active_marginals(std::span<const double> means) {
  return std::max<int>(1, static_cast<int>(std::count_if(means.begin(), means.end(),
                                                         [](double m) { return m > 0.0; })));
}
}  // namespace

OffspringLaw poisson_product(std::span<const double> means, double tail_mass) {
  std::vector<std::vector<double>> marginals;
  const double per = tail_mass / active_marginals(means);
  for (double m : means) marginals.push_back(truncated_poisson_pmf(m, per));
  return product_law(marginals, tail_mass);
}

OffspringLaw geometric_product(std::span<const double> means, double tail_mass) {
  std::vector<std::vector<double>> marginals;
  const double per = tail_mass / active_marginals(means);
  for (double m : means) marginals.push_back(truncated_geometric_pmf(m, per));
  return product_law(marginals, tail_mass);
}

OffspringLaw binomial_product(std::span<const int> trials, std::span<const double> probs) {
  if (trials.size() != probs.size())
    throw Error(ErrorKind::kInvalidArgument, "binomial trials/probs length mismatch");
  std::vector<std::vector<double>> marginals;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const int n = trials[t];
    const double p = probs[t];
    if (n < 0 || !(p >= 0.0 && p <= 1.0))
      throw Error(ErrorKind::kInvalidArgument, "invalid binomial parameters");
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
      pmf[static_cast<std::size_t>(k)] =
          std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) *
          std::pow(p, k) * std::pow(1.0 - p, n - k);
    marginals.push_back(std::move(pmf));
  }
  return product_law(marginals, 1e-12);
}

OffspringFamily::OffspringFamily(int num_critical, int num_subcritical,
                                 std::vector<OffspringLaw> laws, std::vector<int> lambda)
    : num_critical_(num_critical),
      num_subcritical_(num_subcritical),
      laws_(std::move(laws)),
      lambda_(std::move(lambda)) {
  if (num_critical_ < 1 || num_subcritical_ < 0)
    throw Error(ErrorKind::kInvalidArgument, "need K >= 1 and K' >= 0");
  const auto n = static_cast<std::size_t>(num_types());
  if (laws_.size() != n)
    throw Error(ErrorKind::kInvalidArgument, "expected one offspring law per type");
  if (lambda_.size() != n) throw Error(ErrorKind::kInvalidArgument, "lambda length must be K+K'");
  if (std::any_of(lambda_.begin(), lambda_.end(), [](int l) { return l < 0; }))
    throw Error(ErrorKind::kInvalidArgument, "lambda entries must be nonnegative");
  if (std::all_of(lambda_.begin(), lambda_.end(), [](int l) { return l == 0; }))
    throw Error(ErrorKind::kInvalidArgument, "lambda must not be the zero vector");
  for (const auto& law : laws_)
    for (const auto& entry : law.support())
      for (int symbol : entry.word)
        if (symbol < 0 || symbol >= num_types())
          throw Error(ErrorKind::kInvalidArgument, "word symbol out of range");
}

OffspringFamily OffspringFamily::with_lambda(std::vector<int> lambda) const {
  return OffspringFamily(num_critical_, num_subcritical_, laws_, std::move(lambda));
}

bool OffspringFamily::nondegenerate() const {
  bool sterile = false;
  bool branching = false;
  for (int i = 0; i < num_critical_; ++i) {
    for (const auto& entry : law(i).support()) {
      if (std::none_of(entry.word.begin(), entry.word.end(),
                       [this](int s) { return s < num_critical_; }))
        sterile = true;
      if (entry.word.size() >= 2) branching = true;
    }
  }
  return sterile && branching;
}

ProjectedLaw projection(const OffspringFamily& family) {
  ProjectedLaw out;
  out.per_type.resize(static_cast<std::size_t>(family.num_types()));
  for (int i = 0; i < family.num_types(); ++i)
    for (const auto& entry : family.law(i).support())
      out.per_type[static_cast<std::size_t>(i)][word_counts(entry.word, family.num_types())] +=
          entry.prob;
  return out;
}

Eigen::MatrixXd mean_matrix(const OffspringFamily& family) {
  const int n = family.num_types();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (const auto& entry : family.law(i).support())
      for (int symbol : entry.word) a(i, symbol) += entry.prob;
  return a;
}

std::uint64_t family_hash(const OffspringFamily& family) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(family.K()));
  mix(static_cast<std::uint64_t>(family.Kprime()));
  for (int l : family.lambda()) mix(static_cast<std::uint64_t>(l));
  for (const auto& law : family.laws()) {
    mix(law.support().size());
    for (const auto& entry : law.support()) {
      mix(entry.word.size());
      for (int s : entry.word) mix(static_cast<std::uint64_t>(s));
      std::uint64_t bits = 0;
      static_assert(sizeof(bits) == sizeof(entry.prob));
      std::memcpy(&bits, &entry.prob, sizeof(bits));
      mix(bits);
    }
  }
  return h;
}

}  // namespace bienayme::kernel
