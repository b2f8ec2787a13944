#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace bienayme::kernel {

// Types are 0-based internally; type 0 is the root type ("type 1" in the
// usual 1-based notation). External formats use 1-based symbols.
using Word = std::vector<int>;
using Counts = std::vector<int>;

struct WordProb {
  Word word;
  double prob = 0.0;
};

Counts word_counts(const Word& word, int num_types);

// A finite-support law on typed words.
class OffspringLaw {
 public:
  OffspringLaw() = default;
  // Probabilities must sum to 1 within 1e-12 unless tail_mass_bound > 0, in
  // which case they must sum to at least 1 - tail_mass_bound; the stored law
  // is renormalized and the bound is kept as a record of the truncation.
  explicit OffspringLaw(std::vector<WordProb> support, double tail_mass_bound = 0.0);

  const std::vector<WordProb>& support() const { return support_; }
  double tail_mass_bound() const { return tail_mass_bound_; }
  double prob_of(const Word& word) const;
  std::size_t max_word_length() const;

 private:
  std::vector<WordProb> support_;
  double tail_mass_bound_ = 0.0;
};

// Independent per-type count law, expanded to canonical words whose symbols
// are nondecreasing. Each marginal is a pmf on {0, 1, ...}; marginals are
// truncated so that the dropped upper tail of each is at most
// tail_mass / (#nondegenerate marginals).
OffspringLaw product_law(const std::vector<std::vector<double>>& marginals, double tail_mass);
OffspringLaw poisson_product(std::span<const double> means, double tail_mass = 1e-12);
OffspringLaw geometric_product(std::span<const double> means, double tail_mass = 1e-12);
OffspringLaw binomial_product(std::span<const int> trials, std::span<const double> probs);

std::vector<double> truncated_poisson_pmf(double mean, double tail_mass);
std::vector<double> truncated_geometric_pmf(double mean, double tail_mass);

class OffspringFamily {
 public:
  OffspringFamily() = default;
  OffspringFamily(int num_critical, int num_subcritical, std::vector<OffspringLaw> laws,
                  std::vector<int> lambda);

  int K() const { return num_critical_; }
  int Kprime() const { return num_subcritical_; }
  int num_types() const { return num_critical_ + num_subcritical_; }
  const std::vector<OffspringLaw>& laws() const { return laws_; }
  const OffspringLaw& law(int type) const { return laws_.at(static_cast<std::size_t>(type)); }
  const std::vector<int>& lambda() const { return lambda_; }

  OffspringFamily with_lambda(std::vector<int> lambda) const;

  // Standing assumptions: some critical type can have no critical-type
  // children, and some critical type can have at least two children.
  bool nondegenerate() const;

 private:
  int num_critical_ = 0;
  int num_subcritical_ = 0;
  std::vector<OffspringLaw> laws_;
  std::vector<int> lambda_;
};

// Marginal of each law under word -> type counts.
struct ProjectedLaw {
  std::vector<std::map<Counts, double>> per_type;
};

ProjectedLaw projection(const OffspringFamily& family);

// A(i,j) = E[#_j w^(i)] over all K+K' types.
Eigen::MatrixXd mean_matrix(const OffspringFamily& family);

// Stable 64-bit fingerprint of the family (laws and lambda), printed in hex in
// manifests.
std::uint64_t family_hash(const OffspringFamily& family);

}  // namespace bienayme::kernel
