#ifndef POLYVEIL_SIM_VERIFY_HPP
#define POLYVEIL_SIM_VERIFY_HPP

#include "polyveil/protocol.hpp"
#include "polyveil/stats.hpp"

namespace polyveil {

/// The two scalars the two-layer server sees.
struct ViewSample {
  double F = 0.0;
  double H = 0.0;
};

/// Fabricates a server view from the aggregate alone: fresh noise drawn by
/// the real per-client process, H-hat summed, F-hat = alpha* S + H-hat. The
/// signature admits no per-client inputs, which is the point.
ViewSample simulate_server_view(long long aggregate, int k, int n, int big_k, double alpha_star,
                                RngStream& rng,
                                CoefficientMode mode = CoefficientMode::Dirichlet);

struct IndistinguishabilityReport {
  KsResult ks_f;
  KsResult ks_h;
  long long trials = 0;
};

/// Runs `trials` independent two-layer transcripts per input configuration
/// and compares the server views with two-sample KS tests on F and on H.
/// Requires equal aggregates, the hypothesis under which the views are
/// identically distributed.
IndistinguishabilityReport indistinguishability_test(const std::vector<BitVector>& inputs_a,
                                                     const std::vector<BitVector>& inputs_b,
                                                     const ProtocolParams& params,
                                                     long long trials, std::uint64_t seed);

/// Collects `trials` server views from real runs of `inputs` and the same
/// number of simulated views built from the aggregate alone; KS-compares H
/// (F is a deterministic shift of H at fixed aggregate).
IndistinguishabilityReport simulator_vs_real_test(const std::vector<BitVector>& inputs,
                                                  const ProtocolParams& params, long long trials,
                                                  std::uint64_t seed);

struct ConcentrationRow {
  double r = 0.0;
  double empirical_tail = 0.0;
  double hoeffding_bound = 0.0;  // 2 exp(-2 K r^2)
  double std_error = 0.0;
};

/// Empirical tail of one decoy-matrix entry against the Hoeffding bound,
/// under uniform weights (the bound's hypothesis). One fresh decoy matrix
/// entry per trial.
std::vector<ConcentrationRow> concentration_check(int n, int big_k, long long trials,
                                                  const std::vector<double>& r_grid,
                                                  std::uint64_t seed);

}  // namespace polyveil

#endif  // POLYVEIL_SIM_VERIFY_HPP
