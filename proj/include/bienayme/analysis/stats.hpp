#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace bienayme::analysis {

struct StatReport {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  std::int64_t replicates = 0;
  double target = 0.0;
  double band = 0.0;  // pass iff |estimate - target| <= band, unless pass was set otherwise
  bool pass = false;
};

void write_reports_csv(std::ostream& out, const std::vector<StatReport>& reports);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.96);

// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double dof);

struct ChiSquare {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  int bins = 0;
};

// Goodness of fit of observed counts against probabilities over the same
// categories; categories with expected count below min_expected are pooled.
ChiSquare chi_square_gof(const std::vector<std::int64_t>& observed, const std::vector<double>& probs,
                         double min_expected = 5.0);

// Two-sample homogeneity test on keyed counts, pooling rare categories.
ChiSquare chi_square_two_sample(const std::map<std::string, std::int64_t>& a,
                                const std::map<std::string, std::int64_t>& b, double min_expected = 5.0);

// sup_x |F_n(x) - F(x)|.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// For samples on a lattice of spacing 2 half_step: max over the observed
// atoms x of |F_n(x) - F(x + half_step)|, i.e. the continuous CDF is read
// at the midpoints between atoms.
double lattice_cdf_discrepancy(std::vector<double> samples, double half_step,
                               const std::function<double(double)>& cdf);

// Total variation between two empirical distributions.
double total_variation(const std::map<std::string, std::int64_t>& a, const std::map<std::string, std::int64_t>& b);

}  // namespace bienayme::analysis
