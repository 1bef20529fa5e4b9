#include "polyveil/attacks.hpp"
#include "polyveil/dp.hpp"
#include "polyveil/hardness.hpp"
#include "polyveil/io.hpp"
#include "polyveil/protocol.hpp"
#include "polyveil/sim_verify.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace pv = polyveil;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string out;
  std::string config;
  bool quiet = false;
};

std::vector<pv::BitVector> random_inputs(int n, int k, std::uint64_t seed) {
  std::vector<pv::BitVector> inputs;
  inputs.reserve(static_cast<std::size_t>(k));
  for (int t = 0; t < k; ++t) {
    // Input bits come from their own stream family so the masking streams
    // stay input-independent.
    pv::RngStream rng(seed, (1ULL << 32) + static_cast<std::uint64_t>(t));
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_below(2));
    inputs.emplace_back(std::move(bits));
  }
  return inputs;
}

pv::Variant parse_variant(const std::string& name) {
  if (name == "full") return pv::Variant::Full;
  if (name == "compressed") return pv::Variant::Compressed;
  if (name == "two-layer") return pv::Variant::TwoLayerFull;
  if (name == "two-layer-compressed") return pv::Variant::TwoLayerCompressed;
  throw CLI::ValidationError("--variant", "unknown variant: " + name);
}

pv::DpFramework parse_framework(const std::string& name) {
  if (name == "be") return pv::DpFramework::BerryEsseen;
  if (name == "renyi") return pv::DpFramework::Renyi;
  if (name == "zcdp") return pv::DpFramework::Zcdp;
  if (name == "fdp") return pv::DpFramework::Fdp;
  if (name == "shuffle") return pv::DpFramework::Shuffle;
  if (name == "mmse") return pv::DpFramework::Mmse;
  if (name == "full") return pv::DpFramework::FullProtocol;
  throw CLI::ValidationError("--framework", "unknown framework: " + name);
}

int cmd_run(const GlobalOpts& g, const std::string& variant, int n, int k, int big_k,
            double alpha_star, const std::string& coeff_mode) {
  pv::ProtocolParams params;
  params.variant = parse_variant(variant);
  params.n = n;
  params.k = k;
  params.K = big_k;
  params.alpha_star = alpha_star;
  params.coefficients = coeff_mode == "uniform" ? pv::CoefficientMode::Uniform
                                                : pv::CoefficientMode::Dirichlet;

  std::vector<pv::BitVector> inputs;
  pv::ProtocolFixture fixture;
  const pv::ProtocolFixture* fixture_ptr = nullptr;
  if (!g.config.empty()) {
    pv::RunConfig cfg = pv::run_config_from_json(pv::load_json_file(g.config));
    if (!cfg.bits.empty()) inputs = std::move(cfg.bits);
    fixture = std::move(cfg.fixture);
    if (!fixture.decoys.empty()) params.K = static_cast<int>(fixture.decoys.front().size());
    fixture_ptr = &fixture;
  }
  if (inputs.empty()) inputs = random_inputs(params.n, params.k, g.seed);
  if (static_cast<int>(inputs.size()) != params.k)
    throw std::invalid_argument("config bits must cover exactly k clients");

  const pv::Transcript tr = pv::run_protocol(inputs, params, g.seed, fixture_ptr);
  if (!g.quiet)
    std::cout << "variant=" << pv::to_string(params.variant) << " recovered_S=" << tr.recovered_S
              << " ground_truth_S=" << tr.ground_truth_S
              << " margin=" << pv::format_double(tr.rounding_margin) << "\n";
  if (!g.out.empty()) pv::write_json_file(pv::transcript_to_json(tr), g.out);
  return tr.recovered_S == tr.ground_truth_S ? 0 : 1;
}

int cmd_attack(const GlobalOpts& g, const std::string& which, int n, int k, int big_k,
               double alpha_star, long long trials, const std::string& search,
               bool exhaustive) {
  pv::CsvTable csv;
  long long successes = 0;

  if (which == "deshuffle") {
    pv::ProtocolParams params;
    params.variant = pv::Variant::Compressed;
    params.n = n;
    params.k = k;
    params.K = big_k;
    params.alpha_star = alpha_star;
    csv.header = {"trial", "success", "score", "passing_count", "unique"};
    pv::RngStream seeder(g.seed, 7);
    for (long long t = 0; t < trials; ++t) {
      const auto inputs = random_inputs(n, k, seeder.next_u64());
      const pv::Transcript tr = pv::run_protocol(inputs, params, seeder.next_u64());
      std::vector<long long> truth;
      for (const auto& b : inputs) truth.push_back(b.count());
      const pv::DeshuffleResult res =
          pv::deshuffle_attack(tr.legacy_server->f, tr.legacy_server->shuffled_eta, alpha_star,
                               n, 1e-6, pv::DeshuffleMode::Auto, &truth);
      successes += res.correct_recovered ? 1 : 0;
      csv.rows.push_back({std::to_string(t), res.correct_recovered ? "1" : "0",
                          pv::format_double(static_cast<double>(res.passing.size())),
                          std::to_string(res.passing.size()), res.unique ? "1" : "0"});
    }
  } else if (which == "gaussian-map" || which == "hungarian" || which == "block-threshold") {
    pv::ProtocolParams params;
    params.variant = pv::Variant::TwoLayerFull;
    params.n = n;
    params.k = 1;
    params.K = big_k;
    params.alpha_star = alpha_star;
    csv.header = {"trial", "success", "score", "bit_accuracy"};
    pv::RngStream seeder(g.seed, 7);
    for (long long t = 0; t < trials; ++t) {
      const auto inputs = random_inputs(n, 1, seeder.next_u64());
      pv::RngStream mask_rng(seeder.next_u64(), pv::client_stream(0));
      const pv::ClientMessage msg = pv::client_mask_full(inputs[0], params, mask_rng);
      pv::AttackOutcome out;
      if (which == "gaussian-map") {
        const pv::SearchSpace space = search == "block" ? pv::SearchSpace::BlockEnum
                                                        : pv::SearchSpace::FullEnum;
        out = pv::gaussian_map_attack(*msg.masked, alpha_star, n, big_k, space);
      } else if (which == "hungarian") {
        out = pv::hungarian_attack(*msg.masked, alpha_star);
      } else {
        out = pv::block_threshold_attack(*msg.masked, alpha_star);
      }
      const pv::Permutation truth = pv::encode_bitstream(inputs[0]);
      out.success = out.guess_perm && *out.guess_perm == truth;
      int correct_bits = 0;
      if (out.guess_bits)
        for (int j = 0; j < n; ++j)
          if ((*out.guess_bits)[j] == inputs[0][j]) ++correct_bits;
      successes += out.success ? 1 : 0;
      csv.rows.push_back({std::to_string(t), out.success ? "1" : "0",
                          pv::format_double(out.score),
                          pv::format_double(static_cast<double>(correct_bits) / n)});
    }
  } else if (which == "mc-density") {
    pv::RngStream rng(g.seed, 11);
    // Target generated by the decoy process itself: a flat-weighted convex
    // combination of K uniform permutations.
    const int m = 2 * n;
    pv::Matrix target = pv::Matrix::Zero(m, m);
    std::vector<double> weights(static_cast<std::size_t>(big_k));
    double total = 0.0;
    for (auto& w : weights) {
      w = rng.next_exponential();
      total += w;
    }
    for (int i = 0; i < big_k; ++i) {
      const pv::Permutation p = pv::fisher_yates(m, rng);
      for (int a = 0; a < m; ++a)
        target(a, p(a)) += weights[static_cast<std::size_t>(i)] / total;
    }
    const pv::McDensityResult res =
        pv::mc_density_estimate(target, big_k, alpha_star, trials, rng, exhaustive);
    csv.header = {"samples", "hit_count", "hit_rate", "ci_lo", "ci_hi"};
    csv.rows.push_back({std::to_string(res.samples), std::to_string(res.hit_count),
                        pv::format_double(res.hit_rate), pv::format_double(res.ci.lo),
                        pv::format_double(res.ci.hi)});
    successes = res.hit_count;
  } else {
    throw CLI::ValidationError("attack", "unknown attack: " + which);
  }

  if (!g.quiet)
    std::cout << which << ": " << successes << "/" << trials << " ("
              << (trials > 0 ? pv::format_double(static_cast<double>(successes) / trials) : "-")
              << ")\n";
  if (!g.out.empty()) pv::write_csv_file(csv, g.out);
  return 0;
}

int cmd_oracle(const GlobalOpts& g, const std::string& which, const std::string& input,
               double alpha_star, int big_k) {
  if (which == "census" && big_k != 2)
    throw std::invalid_argument("the census enumerates decoy pairs; --K must be 2");
  const pv::Matrix a = pv::matrix_from_json(pv::load_json_file(input));
  pv::Json report;
  if (which == "permanent") {
    const double p = pv::permanent(a);
    report = {{"permanent", p}};
    if (!g.quiet) std::cout << "permanent = " << pv::format_double(p) << "\n";
  } else if (which == "support") {
    const pv::SupportCensus c = pv::support_census(a);
    report = {{"support_size", c.support_size},
              {"permanent", c.permanent_value},
              {"support_matrix", pv::matrix_to_json(c.support)}};
    if (!g.quiet)
      std::cout << "support_size = " << c.support_size
                << ", permanent = " << pv::format_double(c.permanent_value) << "\n";
  } else if (which == "census") {
    const auto census = pv::worked_reduction_census(a, alpha_star);
    pv::Json rows = pv::Json::array();
    long long nonzero = 0;
    for (const auto& cc : census) {
      pv::Json r;
      std::vector<int> one_based;
      for (int v : cc.candidate.map()) one_based.push_back(v + 1);
      r["candidate"] = one_based;
      r["total_tuples"] = cc.census.total_tuples;
      r["consistent_count"] = cc.census.count;
      rows.push_back(std::move(r));
      if (cc.census.count > 0) ++nonzero;
    }
    report = {{"alpha_star", alpha_star}, {"candidates", std::move(rows)}};
    if (!g.quiet)
      std::cout << "census: " << nonzero << " of " << census.size()
                << " candidates have consistent decoy pairs\n";
  } else {
    throw CLI::ValidationError("oracle", "unknown oracle: " + which);
  }
  if (!g.out.empty()) pv::write_json_file(report, g.out);
  return 0;
}

int cmd_dp(const GlobalOpts& g, const std::string& framework, int n, long long big_k,
           double alpha_star, double delta, long long k, double epsilon,
           std::vector<long long> grid) {
  pv::DpQuery query;
  query.framework = parse_framework(framework);
  query.n = n;
  query.big_k = big_k;
  query.alpha_star = alpha_star;
  query.delta = delta;
  query.k = k;
  query.epsilon = epsilon;
  if (grid.empty()) {
    if (query.framework == pv::DpFramework::Shuffle) grid = {k};
    else if (query.framework == pv::DpFramework::FullProtocol) grid = {n};
    else grid = {big_k};
  }
  const pv::DpTable table = pv::dp_table(query, grid);
  const pv::CsvTable csv = pv::to_csv(table);
  if (!g.quiet) {
    std::ostringstream buf;
    pv::write_csv(csv, buf);
    std::cout << buf.str();
  }
  if (!g.out.empty()) pv::write_csv_file(csv, g.out);
  return 0;
}

int cmd_verify(const GlobalOpts& g, const std::string& which, int n, int k, int big_k,
               double alpha_star, long long trials, std::vector<double> r_grid) {
  pv::ProtocolParams params;
  params.variant = pv::Variant::TwoLayerCompressed;
  params.n = n;
  params.k = k;
  params.K = big_k;
  params.alpha_star = alpha_star;
  pv::Json report;

  if (which == "simulator") {
    const auto inputs = random_inputs(n, k, g.seed);
    const auto res = pv::simulator_vs_real_test(inputs, params, trials, g.seed);
    report = {{"trials", res.trials},
              {"ks_F", {{"statistic", res.ks_f.statistic}, {"p_value", res.ks_f.p_value}}},
              {"ks_H", {{"statistic", res.ks_h.statistic}, {"p_value", res.ks_h.p_value}}}};
    if (!g.quiet)
      std::cout << "simulator vs real: KS_F p=" << pv::format_double(res.ks_f.p_value)
                << " KS_H p=" << pv::format_double(res.ks_h.p_value) << "\n";
  } else if (which == "indistinguishability") {
    // Two matched-aggregate configurations: ones packed into the leading
    // clients versus ones spread round-robin.
    const long long total = static_cast<long long>(n) * k / 2;
    std::vector<std::vector<std::uint8_t>> a(static_cast<std::size_t>(k),
                                             std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)),
        b = a;
    long long left = total;
    for (int t = 0; t < k && left > 0; ++t)
      for (int j = 0; j < n && left > 0; ++j, --left) a[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] = 1;
    left = total;
    for (int j = 0; j < n && left > 0; ++j)
      for (int t = 0; t < k && left > 0; ++t, --left) b[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] = 1;
    std::vector<pv::BitVector> inputs_a, inputs_b;
    for (auto& bits : a) inputs_a.emplace_back(std::move(bits));
    for (auto& bits : b) inputs_b.emplace_back(std::move(bits));
    const auto res = pv::indistinguishability_test(inputs_a, inputs_b, params, trials, g.seed);
    report = {{"trials", res.trials},
              {"ks_F", {{"statistic", res.ks_f.statistic}, {"p_value", res.ks_f.p_value}}},
              {"ks_H", {{"statistic", res.ks_h.statistic}, {"p_value", res.ks_h.p_value}}}};
    if (!g.quiet)
      std::cout << "indistinguishability: KS_F p=" << pv::format_double(res.ks_f.p_value)
                << " KS_H p=" << pv::format_double(res.ks_h.p_value) << "\n";
  } else if (which == "concentration") {
    if (r_grid.empty()) r_grid = {0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
    const auto rows = pv::concentration_check(n, big_k, trials, r_grid, g.seed);
    pv::Json arr = pv::Json::array();
    bool ok = true;
    for (const auto& row : rows) {
      ok = ok && row.empirical_tail <= row.hoeffding_bound + 3.0 * row.std_error;
      arr.push_back({{"r", row.r},
                     {"empirical_tail", row.empirical_tail},
                     {"hoeffding_bound", row.hoeffding_bound},
                     {"std_error", row.std_error}});
    }
    report = {{"trials", trials}, {"rows", std::move(arr)}, {"within_bound", ok}};
    if (!g.quiet)
      std::cout << "concentration: " << (ok ? "within bound" : "EXCEEDS bound") << " over "
                << rows.size() << " grid points\n";
  } else {
    throw CLI::ValidationError("verify", "unknown check: " + which);
  }
  if (!g.out.empty()) pv::write_json_file(report, g.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyveil: private Boolean-sum aggregation lab (protocol runs, attacks, exact "
               "small-scale oracles, privacy accounting, statistical verification)"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "base seed for all randomness (default 0, deterministic)");
  app.add_option("--out", g.out, "output file path");
  app.add_option("--config", g.config, "JSON config with explicit bits/decoys/coefficients");
  app.add_flag("--quiet", g.quiet, "suppress the stdout summary");

  // global flags may trail a subcommand
  app.fallthrough();

  // run
  auto* run = app.add_subcommand("run", "execute one protocol run and recover the aggregate");
  std::string variant = "two-layer";
  int n = 2, k = 3, big_k = 2;
  double alpha_star = 0.3;
  std::string coeff_mode = "dirichlet";
  run->add_option("--variant", variant, "full|compressed|two-layer|two-layer-compressed")
      ->check(CLI::IsMember({"full", "compressed", "two-layer", "two-layer-compressed"}));
  run->add_option("--n", n, "bits per client")->required();
  run->add_option("--k", k, "number of clients");
  run->add_option("--K", big_k, "decoys per client");
  run->add_option("--alpha-star", alpha_star, "weight on the true encoding, in (0,1)");
  run->add_option("--coefficients", coeff_mode, "dirichlet|uniform decoy weights")
      ->check(CLI::IsMember({"dirichlet", "uniform"}));

  // attack
  auto* attack = app.add_subcommand("attack", "run an adversary against fresh protocol runs");
  std::string attack_kind;
  long long trials = 100;
  std::string search = "full";
  bool exhaustive = false;
  attack->add_option("kind", attack_kind,
                     "deshuffle|gaussian-map|hungarian|block-threshold|mc-density")
      ->required()
      ->check(CLI::IsMember({"deshuffle", "gaussian-map", "hungarian", "block-threshold",
                             "mc-density"}));
  attack->add_option("--n", n, "bits per client")->required();
  attack->add_option("--k", k, "number of clients (deshuffle)");
  attack->add_option("--K", big_k, "decoys per client");
  attack->add_option("--alpha-star", alpha_star, "weight on the true encoding");
  attack->add_option("--trials", trials, "trials (or samples for mc-density)");
  attack->add_option("--search", search, "gaussian-map candidate space: full|block");
  attack->add_flag("--exhaustive", exhaustive, "mc-density: enumerate every tuple");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact small-scale computations on matrices");
  std::string oracle_kind, oracle_input;
  int oracle_big_k = 2;
  oracle->add_option("kind", oracle_kind, "permanent|support|census")
      ->required()
      ->check(CLI::IsMember({"permanent", "support", "census"}));
  oracle->add_option("--input", oracle_input, "matrix JSON {\"m\": int, \"rows\": [[...]]}")
      ->required();
  oracle->add_option("--alpha-star", alpha_star, "candidate weight (census)");
  oracle->add_option("--K", oracle_big_k, "decoys per tuple (census, fixed at 2)");

  // dp
  auto* dp = app.add_subcommand("dp", "closed-form privacy accountant tables");
  std::string framework = "fdp";
  double delta = 1e-6, epsilon = 1.0;
  long long dp_big_k = 9, dp_k = 1000;
  std::vector<long long> grid;
  dp->add_option("--framework", framework, "be|renyi|zcdp|fdp|shuffle|mmse|full")
      ->check(CLI::IsMember({"be", "renyi", "zcdp", "fdp", "shuffle", "mmse", "full"}));
  dp->add_option("--n", n, "bits per client")->required();
  dp->add_option("--K", dp_big_k, "decoys per client");
  dp->add_option("--alpha-star", alpha_star, "0 selects the 1/(4n) default")->default_val(0.0);
  dp->add_option("--delta", delta, "failure probability");
  dp->add_option("--k", dp_k, "clients (shuffle framework)");
  dp->add_option("--epsilon", epsilon, "target epsilon (full-protocol solver)");
  dp->add_option("--grid", grid, "grid values, one row each")->delimiter(',');

  // verify
  auto* verify = app.add_subcommand("verify", "statistical checks of the security statements");
  std::string verify_kind;
  std::vector<double> r_grid;
  verify->add_option("kind", verify_kind, "simulator|indistinguishability|concentration")
      ->required()
      ->check(CLI::IsMember({"simulator", "indistinguishability", "concentration"}));
  verify->add_option("--n", n, "bits per client")->required();
  verify->add_option("--k", k, "number of clients");
  verify->add_option("--K", big_k, "decoys per client");
  verify->add_option("--alpha-star", alpha_star, "weight on the true encoding");
  verify->add_option("--trials", trials, "trials per configuration");
  verify->add_option("--r-grid", r_grid, "deviation radii (concentration)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(g, variant, n, k, big_k, alpha_star, coeff_mode);
    if (attack->parsed())
      return cmd_attack(g, attack_kind, n, k, big_k, alpha_star, trials, search, exhaustive);
    if (oracle->parsed()) return cmd_oracle(g, oracle_kind, oracle_input, alpha_star, oracle_big_k);
    if (dp->parsed())
      return cmd_dp(g, framework, n, dp_big_k, alpha_star, delta, dp_k, epsilon, grid);
    if (verify->parsed())
      return cmd_verify(g, verify_kind, n, k, big_k, alpha_star, trials, r_grid);
  } catch (const pv::Json::exception& e) {
    // malformed config or matrix files are usage errors
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    // out-of-range parameters are usage errors
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
