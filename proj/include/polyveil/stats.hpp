#ifndef POLYVEIL_STATS_HPP
#define POLYVEIL_STATS_HPP

#include <vector>

namespace polyveil {

/// Standard normal CDF via erfc; absolute error below 1e-12.
double norm_cdf(double x);

/// log of the standard normal CDF, stable deep in the lower tail where
/// norm_cdf underflows.
double log_norm_cdf(double x);

struct KsResult {
  double statistic = 0.0;  // sup |F1 - F2|
  double p_value = 1.0;    // asymptotic
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample KS against Uniform(lo, hi).
KsResult ks_uniform(std::vector<double> samples, double lo, double hi);

/// Complement of the Kolmogorov distribution, Q(lambda) = 2 sum_{j>=1}
/// (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// 95% Wilson score interval for a binomial proportion.
WilsonInterval wilson_interval(long long successes, long long trials);

/// Pearson chi-square statistic against equal expected counts.
double chi_square_uniform(const std::vector<long long>& counts);

}  // namespace polyveil

#endif  // POLYVEIL_STATS_HPP
