#ifndef POLYVEIL_DP_HPP
#define POLYVEIL_DP_HPP

#include <string>
#include <vector>

namespace polyveil {

/// Var[w^T P y] for a uniform random permutation of size 2n:
/// 1/4 + (n-1)/(2(2n-1)). Approaches 1/2 as n grows.
double var_x(int n);

/// Standard deviation of the noise scalar under uniform weights:
/// (1 - alpha*) sqrt(var_x(n) / K).
double sigma_eta(int n, long long big_k, double alpha_star);

/// Berry-Esseen CLT error bound sqrt(n / K) (constant 0.5 times the
/// third-moment ratio bound 2 sqrt(n)).
double beta_clt(int n, long long big_k);

struct SnrSuite {
  double snr = 0.0;          // alpha* n / sigma_eta, worst-case shift
  double snr_entry = 0.0;    // alpha* / ((1 - alpha*) sigma_K), per matrix entry
  double snr_matrix = 0.0;   // alpha*^2 / (2n sigma_K^2), total energy ratio
  double snr_channel = 0.0;  // alpha*^2 Var[s] / sigma_eta^2, with Var[s] = n/4
};

SnrSuite snr_suite(int n, long long big_k, double alpha_star);

struct BerryEsseenReport {
  double epsilon = 0.0;
  double beta = 0.0;
  double z = 0.0;  // Gaussian concentration radius sqrt(2 ln(4/delta))
};

/// (alpha* n)^2 / (2 sigma_eta^2) + alpha* n z / sigma_eta + 2 beta.
/// Requires n >= 4 for the beta bound to be valid.
BerryEsseenReport epsilon_berry_esseen(int n, long long big_k, double alpha_star, double delta);

/// Renyi divergence of order alpha between two Gaussians with equal scale:
/// alpha delta_mean^2 / (2 sigma^2).
double gaussian_renyi_divergence(double delta_mean, double sigma, double alpha);

/// Renyi-DP curve of the masked-scalar channel: epsilon_alpha = rho * alpha
/// with rho = 2 K (alpha* n)^2 (mean shift alpha* n against noise scale
/// 1/(2 sqrt(K)); equals K/8 at alpha* = 1/(4n)).
double renyi_epsilon(int n, long long big_k, double alpha_star, double alpha_order);

struct RenyiDpReport {
  double alpha_opt = 0.0;
  double epsilon_alpha = 0.0;
  double epsilon = 0.0;
};

/// Converts the Renyi curve to (epsilon, delta)-DP, minimizing
/// epsilon_alpha + log(1/delta)/(alpha - 1) at
/// alpha_opt = 1 + sqrt(log(1/delta)/rho), clamped above 1.
RenyiDpReport renyi_to_dp(int n, long long big_k, double alpha_star, double delta);

struct ZcdpReport {
  double rho = 0.0;
  double epsilon = 0.0;
};

/// rho-zCDP with the same channel normalization as the Renyi curve, and the
/// standard conversion epsilon = rho + 2 sqrt(rho ln(1/delta)).
ZcdpReport zcdp(int n, long long big_k, double alpha_star, double delta);

/// Gaussian-DP parameter mu = 2 alpha* n sqrt(K) / (1 - alpha*).
double gdp_mu(int n, long long big_k, double alpha_star);

/// delta(epsilon) = Phi(-eps/mu + mu/2) - e^eps Phi(-eps/mu - mu/2).
double gdp_delta(double epsilon, double mu);

/// Inverse of gdp_delta in epsilon by bisection (gdp_delta is strictly
/// decreasing). Returns 0 when even epsilon = 0 already meets delta.
double gdp_epsilon(double delta, double mu);

/// Shuffle-model amplification of a per-client epsilon0 across k clients:
/// log(1 + (e^e0 - 1)/(e^e0 + 1) sqrt(14 log(2/delta) / k)).
double shuffle_amplify(double epsilon0, long long k, double delta);

/// Posterior-to-prior variance ratio for estimating one client's bit count,
/// 1 / (1 + snr_channel). 1 means the masked scalar taught the observer
/// nothing.
double mmse_ratio(int n, long long big_k, double alpha_star);

struct FullProtocolDp {
  long long big_k = 0;     // (2n-1)^2 + 1
  double r = 0.0;          // concentration radius sqrt(ln(16 n^2/delta)/(2K))
  double sigma_k = 0.0;    // per-entry decoy scale sqrt((2n-1)/((2n)^2 K))
  double l_r = 0.0;        // restricted log-Lipschitz constant 4 n^2 r / sigma_K^2
  double beta = 0.0;       // CLT error bound 1/sqrt(n)
  double alpha_star = 0.0; // (epsilon - 2 beta) / L_r
  double snr_entry = 0.0;
};

/// Solves for the matrix-channel parameters that meet a target
/// (epsilon, delta) at the canonical decoy count. Requires n >= 4 and
/// epsilon > 2 beta.
FullProtocolDp full_protocol_dp(int n, double epsilon, double delta);

enum class DpFramework { BerryEsseen, Renyi, Zcdp, Fdp, Shuffle, Mmse, FullProtocol };

struct DpQuery {
  int n = 100;
  long long big_k = 9;
  double alpha_star = 0.0;  // 0 means the 1/(4n) default
  double delta = 1e-6;
  long long k = 1000;    // clients, shuffle framework only
  double epsilon = 1.0;  // target epsilon, full-protocol solver only
  DpFramework framework = DpFramework::Fdp;

  double effective_alpha_star() const;
  void validate() const;
};

/// One accountant evaluation: epsilon/delta/mu/rho plus diagnostics for the
/// queried point.
struct DpReport {
  std::vector<std::pair<std::string, double>> values;
  double get(const std::string& name) const;
  bool has(const std::string& name) const;
};

DpReport dp_point(const DpQuery& query);

struct DpTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Evaluates the framework over a grid (K for most frameworks, k for
/// shuffle, n for the full-protocol solver), one row per grid value.
DpTable dp_table(const DpQuery& base, const std::vector<long long>& grid);

}  // namespace polyveil

#endif  // POLYVEIL_DP_HPP
