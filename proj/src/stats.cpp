#include "polyveil/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyveil {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double log_norm_cdf(double x) {
  if (x > -20.0) {
    const double c = norm_cdf(x);
    if (c > 0.0) return std::log(c);
  }
  // Tail expansion: Phi(x) ~ phi(x)/|x| * (1 - 1/x^2 + 3/x^4) for x << 0.
  const double ax = -x;
  const double log_phi = -0.5 * ax * ax - 0.5 * std::log(2.0 * M_PI);
  return log_phi - std::log(ax) + std::log1p(-1.0 / (ax * ax) + 3.0 / (ax * ax * ax * ax));
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

namespace {

// Asymptotic p-value with the small-sample correction of the effective size.
double ks_p(double d, double n_eff) {
  const double s = std::sqrt(n_eff);
  return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0, fa = 0.0, fb = 0.0;
  while (i < a.size() && j < b.size()) {
    const double va = a[i], vb = b[j];
    if (va <= vb) fa = static_cast<double>(++i) / na;
    if (vb <= va) fb = static_cast<double>(++j) / nb;
    d = std::max(d, std::abs(fa - fb));
  }
  KsResult r;
  r.statistic = d;
  r.p_value = ks_p(d, na * nb / (na + nb));
  return r;
}

KsResult ks_uniform(std::vector<double> samples, double lo, double hi) {
  if (samples.empty() || !(hi > lo)) throw std::invalid_argument("ks_uniform: bad input");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = std::min(1.0, std::max(0.0, (samples[i] - lo) / (hi - lo)));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  KsResult r;
  r.statistic = d;
  r.p_value = ks_p(d, n);
  return r;
}

WilsonInterval wilson_interval(long long successes, long long trials) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: bad counts");
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double chi_square_uniform(const std::vector<long long>& counts) {
  if (counts.empty()) throw std::invalid_argument("chi_square_uniform: empty counts");
  long long total = 0;
  for (auto c : counts) total += c;
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

}  // namespace polyveil
