#include "polyveil/dp.hpp"

#include "polyveil/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyveil {

namespace {

void check_basic(int n, long long big_k, double alpha_star) {
  if (n < 1) throw std::invalid_argument("dp: n must be >= 1");
  if (big_k < 1) throw std::invalid_argument("dp: K must be >= 1");
  if (!(alpha_star > 0.0 && alpha_star < 1.0))
    throw std::invalid_argument("dp: alpha_star must be in (0, 1)");
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("dp: delta must be in (0, 1)");
}

double sigma_k_entry(int n, long long big_k) {
  const double m = 2.0 * n;
  return std::sqrt((m - 1.0) / (m * m * static_cast<double>(big_k)));
}

}  // namespace

double var_x(int n) {
  if (n < 1) throw std::invalid_argument("var_x: n must be >= 1");
  return 0.25 + (n - 1.0) / (2.0 * (2.0 * n - 1.0));
}

double sigma_eta(int n, long long big_k, double alpha_star) {
  check_basic(n, big_k, alpha_star);
  return (1.0 - alpha_star) * std::sqrt(var_x(n) / static_cast<double>(big_k));
}

double beta_clt(int n, long long big_k) {
  // C_BE = 0.5 against the third-moment ratio bound 2 sqrt(n).
  return 0.5 * 2.0 * std::sqrt(static_cast<double>(n) / static_cast<double>(big_k));
}

SnrSuite snr_suite(int n, long long big_k, double alpha_star) {
  check_basic(n, big_k, alpha_star);
  const double s = sigma_eta(n, big_k, alpha_star);
  const double sk = sigma_k_entry(n, big_k);
  SnrSuite out;
  out.snr = alpha_star * n / s;
  out.snr_entry = alpha_star / ((1.0 - alpha_star) * sk);
  out.snr_matrix = alpha_star * alpha_star / (2.0 * n * sk * sk);
  out.snr_channel = alpha_star * alpha_star * (n / 4.0) / (s * s);
  return out;
}

BerryEsseenReport epsilon_berry_esseen(int n, long long big_k, double alpha_star, double delta) {
  check_basic(n, big_k, alpha_star);
  check_delta(delta);
  if (n < 4) throw std::invalid_argument("epsilon_berry_esseen: beta bound needs n >= 4");
  BerryEsseenReport r;
  const double s = sigma_eta(n, big_k, alpha_star);
  const double shift = alpha_star * n;
  r.z = std::sqrt(2.0 * std::log(4.0 / delta));
  r.beta = beta_clt(n, big_k);
  r.epsilon = shift * shift / (2.0 * s * s) + shift * r.z / s + 2.0 * r.beta;
  return r;
}

double gaussian_renyi_divergence(double delta_mean, double sigma, double alpha) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_renyi_divergence: sigma must be > 0");
  if (!(alpha > 1.0)) throw std::invalid_argument("gaussian_renyi_divergence: alpha must be > 1");
  return alpha * delta_mean * delta_mean / (2.0 * sigma * sigma);
}

namespace {

double renyi_rho(int n, long long big_k, double alpha_star) {
  const double shift = alpha_star * n;
  return 2.0 * static_cast<double>(big_k) * shift * shift;
}

}  // namespace

double renyi_epsilon(int n, long long big_k, double alpha_star, double alpha_order) {
  check_basic(n, big_k, alpha_star);
  if (!(alpha_order > 1.0)) throw std::invalid_argument("renyi_epsilon: order must be > 1");
  return renyi_rho(n, big_k, alpha_star) * alpha_order;
}

RenyiDpReport renyi_to_dp(int n, long long big_k, double alpha_star, double delta) {
  check_basic(n, big_k, alpha_star);
  check_delta(delta);
  const double rho = renyi_rho(n, big_k, alpha_star);
  const double l = std::log(1.0 / delta);
  RenyiDpReport r;
  r.alpha_opt = std::max(1.0 + 1e-6, 1.0 + std::sqrt(l / rho));
  r.epsilon_alpha = rho * r.alpha_opt;
  r.epsilon = r.epsilon_alpha + l / (r.alpha_opt - 1.0);
  return r;
}

ZcdpReport zcdp(int n, long long big_k, double alpha_star, double delta) {
  check_basic(n, big_k, alpha_star);
  check_delta(delta);
  ZcdpReport r;
  r.rho = renyi_rho(n, big_k, alpha_star);
  r.epsilon = r.rho + 2.0 * std::sqrt(r.rho * std::log(1.0 / delta));
  return r;
}

double gdp_mu(int n, long long big_k, double alpha_star) {
  check_basic(n, big_k, alpha_star);
  return 2.0 * alpha_star * n * std::sqrt(static_cast<double>(big_k)) / (1.0 - alpha_star);
}

double gdp_delta(double epsilon, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("gdp_delta: mu must be > 0");
  if (epsilon < 0.0) throw std::invalid_argument("gdp_delta: epsilon must be >= 0");
  const double first = norm_cdf(-epsilon / mu + mu / 2.0);
  // e^eps * Phi(-eps/mu - mu/2) in log space; the tail underflows long before
  // the product does.
  const double second = std::exp(epsilon + log_norm_cdf(-epsilon / mu - mu / 2.0));
  return std::max(0.0, first - second);
}

double gdp_epsilon(double delta, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("gdp_epsilon: mu must be > 0");
  check_delta(delta);
  if (gdp_delta(0.0, mu) <= delta) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (gdp_delta(hi, mu) > delta) {
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("gdp_epsilon: no root in bracket");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gdp_delta(mid, mu) > delta) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double shuffle_amplify(double epsilon0, long long k, double delta) {
  if (epsilon0 < 0.0) throw std::invalid_argument("shuffle_amplify: epsilon0 must be >= 0");
  if (k < 1) throw std::invalid_argument("shuffle_amplify: k must be >= 1");
  check_delta(delta);
  const double ratio = (std::exp(epsilon0) - 1.0) / (std::exp(epsilon0) + 1.0);
  return std::log1p(ratio * std::sqrt(14.0 * std::log(2.0 / delta) / static_cast<double>(k)));
}

double mmse_ratio(int n, long long big_k, double alpha_star) {
  return 1.0 / (1.0 + snr_suite(n, big_k, alpha_star).snr_channel);
}

FullProtocolDp full_protocol_dp(int n, double epsilon, double delta) {
  if (n < 4) throw std::invalid_argument("full_protocol_dp: n must be >= 4");
  check_delta(delta);
  FullProtocolDp out;
  out.big_k = static_cast<long long>(2 * n - 1) * (2 * n - 1) + 1;
  out.r = std::sqrt(std::log(16.0 * n * static_cast<double>(n) / delta) / (2.0 * static_cast<double>(out.big_k)));
  out.sigma_k = sigma_k_entry(n, out.big_k);
  out.l_r = 4.0 * n * static_cast<double>(n) * out.r / (out.sigma_k * out.sigma_k);
  out.beta = 1.0 / std::sqrt(static_cast<double>(n));
  if (!(epsilon > 2.0 * out.beta))
    throw std::invalid_argument("full_protocol_dp: infeasible, epsilon must exceed 2 beta");
  out.alpha_star = (epsilon - 2.0 * out.beta) / out.l_r;
  out.snr_entry = out.alpha_star / ((1.0 - out.alpha_star) * out.sigma_k);
  return out;
}

double DpQuery::effective_alpha_star() const {
  return alpha_star > 0.0 ? alpha_star : 1.0 / (4.0 * n);
}

void DpQuery::validate() const {
  if (n < 1) throw std::invalid_argument("dp query: n must be >= 1");
  if (big_k < 1) throw std::invalid_argument("dp query: K must be >= 1");
  check_delta(delta);
  if (k < 1) throw std::invalid_argument("dp query: k must be >= 1");
  if (alpha_star != 0.0 && !(alpha_star > 0.0 && alpha_star < 1.0))
    throw std::invalid_argument("dp query: alpha_star must be in (0, 1)");
}

double DpReport::get(const std::string& name) const {
  for (const auto& [key, value] : values)
    if (key == name) return value;
  throw std::out_of_range("DpReport: no value named " + name);
}

bool DpReport::has(const std::string& name) const {
  for (const auto& [key, value] : values)
    if (key == name) return true;
  return false;
}

DpReport dp_point(const DpQuery& query) {
  query.validate();
  const double a = query.effective_alpha_star();
  const int n = query.n;
  const long long big_k = query.big_k;
  DpReport report;
  auto put = [&](const std::string& key, double value) { report.values.push_back({key, value}); };

  switch (query.framework) {
    case DpFramework::BerryEsseen: {
      const auto be = epsilon_berry_esseen(n, big_k, a, query.delta);
      const auto s = snr_suite(n, big_k, a);
      put("K", static_cast<double>(big_k));
      put("sigma_eta", sigma_eta(n, big_k, a));
      put("snr", s.snr);
      put("beta", be.beta);
      put("z", be.z);
      put("epsilon", be.epsilon);
      put("mmse_ratio", mmse_ratio(n, big_k, a));
      break;
    }
    case DpFramework::Renyi: {
      const auto r = renyi_to_dp(n, big_k, a, query.delta);
      put("K", static_cast<double>(big_k));
      put("alpha_opt", r.alpha_opt);
      put("epsilon_alpha", r.epsilon_alpha);
      put("epsilon", r.epsilon);
      break;
    }
    case DpFramework::Zcdp: {
      const auto z = zcdp(n, big_k, a, query.delta);
      put("K", static_cast<double>(big_k));
      put("rho", z.rho);
      put("epsilon", z.epsilon);
      break;
    }
    case DpFramework::Fdp: {
      const double mu = gdp_mu(n, big_k, a);
      put("K", static_cast<double>(big_k));
      put("mu", mu);
      put("epsilon", gdp_epsilon(query.delta, mu));
      put("delta", query.delta);
      break;
    }
    case DpFramework::Shuffle: {
      const double mu = gdp_mu(n, big_k, a);
      const double eps0 = gdp_epsilon(query.delta, mu);
      put("k", static_cast<double>(query.k));
      put("K", static_cast<double>(big_k));
      put("epsilon0", eps0);
      put("epsilon", shuffle_amplify(eps0, query.k, query.delta));
      break;
    }
    case DpFramework::Mmse: {
      const auto s = snr_suite(n, big_k, a);
      put("K", static_cast<double>(big_k));
      put("snr_channel", s.snr_channel);
      put("mmse_ratio", mmse_ratio(n, big_k, a));
      break;
    }
    case DpFramework::FullProtocol: {
      const auto s = full_protocol_dp(n, query.epsilon, query.delta);
      put("n", static_cast<double>(n));
      put("K", static_cast<double>(s.big_k));
      put("r", s.r);
      put("sigma_K", s.sigma_k);
      put("L_r", s.l_r);
      put("beta", s.beta);
      put("alpha_star", s.alpha_star);
      put("snr_entry", s.snr_entry);
      break;
    }
  }
  for (const auto& [key, value] : report.values) {
    if (!std::isfinite(value)) throw std::runtime_error("dp_point: non-finite " + key);
  }
  return report;
}

DpTable dp_table(const DpQuery& base, const std::vector<long long>& grid) {
  if (grid.empty()) throw std::invalid_argument("dp_table: empty grid");
  DpTable table;
  for (long long g : grid) {
    DpQuery q = base;
    if (base.framework == DpFramework::Shuffle) q.k = g;
    else if (base.framework == DpFramework::FullProtocol) q.n = static_cast<int>(g);
    else q.big_k = g;
    const DpReport report = dp_point(q);
    if (table.header.empty())
      for (const auto& [key, value] : report.values) table.header.push_back(key);
    std::vector<double> row;
    for (const auto& [key, value] : report.values) row.push_back(value);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace polyveil
