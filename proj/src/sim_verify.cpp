#include "polyveil/sim_verify.hpp"

#include <cmath>

namespace polyveil {

ViewSample simulate_server_view(long long aggregate, int k, int n, int big_k, double alpha_star,
                                RngStream& rng, CoefficientMode mode) {
  if (k < 1 || n < 1 || big_k < 1) throw std::invalid_argument("simulate_server_view: bad sizes");
  if (!(alpha_star > 0.0 && alpha_star < 1.0))
    throw std::invalid_argument("simulate_server_view: alpha_star must be in (0, 1)");
  if (aggregate < 0 || aggregate > static_cast<long long>(k) * n)
    throw std::invalid_argument("simulate_server_view: aggregate out of [0, k n]");

  const ExtractionPair pair = standard_extraction_pair(n);
  const double total = 1.0 - alpha_star;
  double h = 0.0;
  for (int t = 0; t < k; ++t) {
    std::vector<Permutation> perms;
    perms.reserve(static_cast<std::size_t>(big_k));
    for (int i = 0; i < big_k; ++i) perms.push_back(fisher_yates(2 * n, rng));
    const CoefficientVector alpha = mode == CoefficientMode::Uniform
                                        ? uniform_simplex(big_k, total)
                                        : dirichlet_simplex(big_k, total, rng);
    for (int i = 0; i < big_k; ++i)
      h += alpha.alphas[static_cast<std::size_t>(i)] * bilinear_extract(perms[static_cast<std::size_t>(i)], pair);
  }
  return ViewSample{alpha_star * static_cast<double>(aggregate) + h, h};
}

namespace {

long long aggregate_of(const std::vector<BitVector>& inputs) {
  long long s = 0;
  for (const auto& b : inputs) s += b.count();
  return s;
}

void collect_views(const std::vector<BitVector>& inputs, const ProtocolParams& params,
                   long long trials, RngStream& seeder, std::vector<double>& f_out,
                   std::vector<double>& h_out) {
  for (long long i = 0; i < trials; ++i) {
    const Transcript tr = run_protocol(inputs, params, seeder.next_u64());
    f_out.push_back(tr.server->F);
    h_out.push_back(tr.server->H);
  }
}

}  // namespace

IndistinguishabilityReport indistinguishability_test(const std::vector<BitVector>& inputs_a,
                                                     const std::vector<BitVector>& inputs_b,
                                                     const ProtocolParams& params,
                                                     long long trials, std::uint64_t seed) {
  if (params.variant != Variant::TwoLayerFull && params.variant != Variant::TwoLayerCompressed)
    throw std::invalid_argument("indistinguishability_test: needs a two-layer variant");
  if (aggregate_of(inputs_a) != aggregate_of(inputs_b))
    throw std::invalid_argument("indistinguishability_test: aggregates must match");
  if (trials < 2) throw std::invalid_argument("indistinguishability_test: need trials >= 2");

  std::vector<double> fa, ha, fb, hb;
  fa.reserve(static_cast<std::size_t>(trials));
  RngStream seeder_a(seed, 101), seeder_b(seed, 202);
  collect_views(inputs_a, params, trials, seeder_a, fa, ha);
  collect_views(inputs_b, params, trials, seeder_b, fb, hb);

  IndistinguishabilityReport report;
  report.trials = trials;
  report.ks_f = ks_two_sample(std::move(fa), std::move(fb));
  report.ks_h = ks_two_sample(std::move(ha), std::move(hb));
  return report;
}

IndistinguishabilityReport simulator_vs_real_test(const std::vector<BitVector>& inputs,
                                                  const ProtocolParams& params, long long trials,
                                                  std::uint64_t seed) {
  if (params.variant != Variant::TwoLayerFull && params.variant != Variant::TwoLayerCompressed)
    throw std::invalid_argument("simulator_vs_real_test: needs a two-layer variant");
  if (trials < 2) throw std::invalid_argument("simulator_vs_real_test: need trials >= 2");
  const long long aggregate = aggregate_of(inputs);

  std::vector<double> f_real, h_real, f_sim, h_sim;
  RngStream seeder(seed, 303);
  collect_views(inputs, params, trials, seeder, f_real, h_real);
  RngStream sim_rng(seed, 404);
  for (long long i = 0; i < trials; ++i) {
    const ViewSample v = simulate_server_view(aggregate, params.k, params.n, params.K,
                                              params.alpha_star, sim_rng, params.coefficients);
    f_sim.push_back(v.F);
    h_sim.push_back(v.H);
  }

  IndistinguishabilityReport report;
  report.trials = trials;
  report.ks_f = ks_two_sample(std::move(f_real), std::move(f_sim));
  report.ks_h = ks_two_sample(std::move(h_real), std::move(h_sim));
  return report;
}

std::vector<ConcentrationRow> concentration_check(int n, int big_k, long long trials,
                                                  const std::vector<double>& r_grid,
                                                  std::uint64_t seed) {
  if (n < 1 || big_k < 1 || trials < 1 || r_grid.empty())
    throw std::invalid_argument("concentration_check: bad parameters");
  const int m = 2 * n;
  RngStream rng(seed, 505);
  std::vector<double> deviations;
  deviations.reserve(static_cast<std::size_t>(trials));
  for (long long t = 0; t < trials; ++t) {
    // Entry (0, 0) of a fresh uniform-weight decoy matrix.
    int hits = 0;
    for (int i = 0; i < big_k; ++i)
      if (fisher_yates(m, rng)(0) == 0) ++hits;
    deviations.push_back(std::abs(static_cast<double>(hits) / big_k - 1.0 / m));
  }

  std::vector<ConcentrationRow> rows;
  for (double r : r_grid) {
    long long exceed = 0;
    for (double d : deviations)
      if (d > r) ++exceed;
    ConcentrationRow row;
    row.r = r;
    row.empirical_tail = static_cast<double>(exceed) / static_cast<double>(trials);
    row.hoeffding_bound = 2.0 * std::exp(-2.0 * big_k * r * r);
    row.std_error =
        std::sqrt(row.empirical_tail * (1.0 - row.empirical_tail) / static_cast<double>(trials));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace polyveil
