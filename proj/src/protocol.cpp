#include "polyveil/protocol.hpp"

#include <cmath>

namespace polyveil {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Full: return "full";
    case Variant::Compressed: return "compressed";
    case Variant::TwoLayerFull: return "two-layer";
    case Variant::TwoLayerCompressed: return "two-layer-compressed";
  }
  return "?";
}

void ProtocolParams::validate() const {
  if (n < 1) throw std::invalid_argument("params: n must be >= 1");
  if (K < 2) throw std::invalid_argument("params: K must be >= 2");
  if (!(alpha_star > 0.0 && alpha_star < 1.0))
    throw std::invalid_argument("params: alpha_star must be in (0, 1)");
  const bool shuffled = variant == Variant::Full || variant == Variant::Compressed;
  if (shuffled && k < 3)
    throw std::invalid_argument("params: shuffled variants require k >= 3");
  if (k < 1) throw std::invalid_argument("params: k must be >= 1");
}

namespace {

struct Decoys {
  std::vector<Permutation> perms;
  std::vector<double> coeffs;
};

Decoys draw_decoys(const ProtocolParams& params, RngStream& rng,
                   const std::vector<Permutation>* inj_perms,
                   const std::vector<double>* inj_coeffs) {
  Decoys d;
  if (inj_perms) {
    if (static_cast<int>(inj_perms->size()) != params.K)
      throw std::invalid_argument("fixture: decoy count must equal K");
    for (const auto& p : *inj_perms)
      if (p.size() != 2 * params.n)
        throw std::invalid_argument("fixture: decoy permutation size must be 2n");
    d.perms = *inj_perms;
  } else {
    d.perms.reserve(static_cast<std::size_t>(params.K));
    for (int i = 0; i < params.K; ++i) d.perms.push_back(fisher_yates(2 * params.n, rng));
  }
  const double total = 1.0 - params.alpha_star;
  if (inj_coeffs) {
    if (static_cast<int>(inj_coeffs->size()) != params.K)
      throw std::invalid_argument("fixture: coefficient count must equal K");
    double sum = 0.0;
    for (double a : *inj_coeffs) {
      if (!(a > 0.0)) throw std::invalid_argument("fixture: coefficients must be positive");
      sum += a;
    }
    if (std::abs(sum - total) > 1e-9)
      throw std::invalid_argument("fixture: coefficients must sum to 1 - alpha_star");
    d.coeffs = *inj_coeffs;
  } else if (params.coefficients == CoefficientMode::Uniform) {
    d.coeffs = uniform_simplex(params.K, total).alphas;
  } else {
    d.coeffs = dirichlet_simplex(params.K, total, rng).alphas;
  }
  return d;
}

double noise_scalar(const Decoys& d, const ExtractionPair& pair) {
  double eta = 0.0;
  for (std::size_t i = 0; i < d.perms.size(); ++i)
    eta += d.coeffs[i] * bilinear_extract(d.perms[i], pair);
  return eta;
}

long long round_even(double x) { return static_cast<long long>(std::nearbyint(x)); }

}  // namespace

ClientMessage client_mask_full(const BitVector& b, const ProtocolParams& params, RngStream& rng,
                               const std::vector<Permutation>* decoys,
                               const std::vector<double>* coeffs) {
  if (b.size() != params.n) throw std::invalid_argument("client_mask_full: |b| must equal n");
  const int m = 2 * params.n;
  const Decoys d = draw_decoys(params, rng, decoys, coeffs);
  const Permutation encoding = encode_bitstream(b);

  Matrix decoy_sum = Matrix::Zero(m, m);
  for (std::size_t i = 0; i < d.perms.size(); ++i) {
    const Permutation& p = d.perms[i];
    for (int a = 0; a < m; ++a) decoy_sum(a, p(a)) += d.coeffs[i];
  }
  Matrix masked = decoy_sum;
  for (int a = 0; a < m; ++a) masked(a, encoding(a)) += params.alpha_star;

  ClientMessage msg;
  msg.masked = std::move(masked);
  msg.eta = noise_scalar(d, standard_extraction_pair(params.n));
  msg.decoy_sum = std::move(decoy_sum);
  return msg;
}

ClientMessage client_mask_compressed(const BitVector& b, const ProtocolParams& params,
                                     RngStream& rng, const std::vector<Permutation>* decoys,
                                     const std::vector<double>* coeffs) {
  if (b.size() != params.n) throw std::invalid_argument("client_mask_compressed: |b| must equal n");
  const Decoys d = draw_decoys(params, rng, decoys, coeffs);
  ClientMessage msg;
  msg.eta = noise_scalar(d, standard_extraction_pair(params.n));
  msg.f = params.alpha_star * static_cast<double>(b.count()) + msg.eta;
  return msg;
}

std::vector<double> trusted_shuffle(const std::vector<double>& values, RngStream& rng) {
  if (values.empty()) throw std::invalid_argument("trusted_shuffle: empty input");
  const Permutation pi = fisher_yates(static_cast<int>(values.size()), rng);
  std::vector<double> out(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) out[j] = values[pi(static_cast<int>(j))];
  return out;
}

Transcript assemble_transcript(const std::vector<ClientMessage>& messages,
                               const ProtocolParams& params, long long ground_truth_S,
                               RngStream& shuffle_rng, const ProtocolFixture* fixture) {
  if (static_cast<int>(messages.size()) != params.k)
    throw std::invalid_argument("assemble_transcript: message count must equal k");
  const ExtractionPair pair = standard_extraction_pair(params.n);
  const bool full = params.variant == Variant::Full || params.variant == Variant::TwoLayerFull;

  std::vector<double> f(messages.size()), eta(messages.size());
  for (std::size_t t = 0; t < messages.size(); ++t) {
    const ClientMessage& msg = messages[t];
    eta[t] = msg.eta;
    if (full) {
      if (!msg.masked) throw std::invalid_argument("assemble_transcript: missing matrix");
      // Submission check: any doubly stochastic matrix passes regardless of
      // the permutation hidden inside, so the check leaks nothing.
      if (!is_doubly_stochastic(*msg.masked, 1e-9))
        throw IntegrityError("client " + std::to_string(t) +
                             " submitted a matrix that is not doubly stochastic");
      f[t] = bilinear_extract(*msg.masked, pair);
    } else {
      if (!msg.f) throw std::invalid_argument("assemble_transcript: missing scalar");
      f[t] = *msg.f;
    }
  }

  Transcript tr;
  tr.params = params;
  tr.ground_truth_S = ground_truth_S;

  double big_f = 0.0, big_h = 0.0;
  for (std::size_t t = 0; t < messages.size(); ++t) {
    big_f += f[t];
    big_h += eta[t];
  }

  switch (params.variant) {
    case Variant::Full:
    case Variant::Compressed: {
      LegacyServerView view;
      view.f = f;
      if (fixture && fixture->shuffle) {
        const Permutation& pi = *fixture->shuffle;
        if (pi.size() != params.k)
          throw std::invalid_argument("fixture: shuffle permutation size must be k");
        view.shuffled_eta.resize(eta.size());
        for (int j = 0; j < params.k; ++j) view.shuffled_eta[static_cast<std::size_t>(j)] = eta[static_cast<std::size_t>(pi(j))];
      } else {
        view.shuffled_eta = trusted_shuffle(eta, shuffle_rng);
      }
      if (params.variant == Variant::Full)
        for (const auto& msg : messages) view.submitted.push_back(*msg.masked);
      tr.legacy_server = std::move(view);
      break;
    }
    case Variant::TwoLayerFull: {
      AggregatorView agg;
      NoiseAggregatorView noise;
      for (const auto& msg : messages) {
        agg.masked.push_back(*msg.masked);
        noise.eta.push_back(msg.eta);
        if (!msg.decoy_sum) throw std::invalid_argument("assemble_transcript: missing decoy sum");
        noise.decoy_sum.push_back(*msg.decoy_sum);
      }
      tr.aggregator = std::move(agg);
      tr.noise_aggregator = std::move(noise);
      tr.server = TwoLayerServerView{big_f, big_h};
      break;
    }
    case Variant::TwoLayerCompressed: {
      AggregatorView agg;
      NoiseAggregatorView noise;
      agg.f = f;
      noise.eta = eta;
      tr.aggregator = std::move(agg);
      tr.noise_aggregator = std::move(noise);
      tr.server = TwoLayerServerView{big_f, big_h};
      break;
    }
  }

  const double raw = (big_f - big_h) / params.alpha_star;
  tr.recovered_S = round_even(raw);
  tr.rounding_margin = std::abs(raw - static_cast<double>(tr.recovered_S));
  return tr;
}

Transcript run_protocol(const std::vector<BitVector>& inputs, const ProtocolParams& params,
                        std::uint64_t seed, const ProtocolFixture* fixture) {
  params.validate();
  if (static_cast<int>(inputs.size()) != params.k)
    throw std::invalid_argument("run_protocol: |inputs| must equal k");
  if (fixture) {
    if (!fixture->decoys.empty() && static_cast<int>(fixture->decoys.size()) != params.k)
      throw std::invalid_argument("fixture: decoy lists must cover all k clients");
    if (!fixture->coefficients.empty() &&
        static_cast<int>(fixture->coefficients.size()) != params.k)
      throw std::invalid_argument("fixture: coefficient lists must cover all k clients");
  }

  const bool full = params.variant == Variant::Full || params.variant == Variant::TwoLayerFull;
  long long truth = 0;
  std::vector<ClientMessage> messages;
  messages.reserve(inputs.size());
  for (int t = 0; t < params.k; ++t) {
    const BitVector& b = inputs[static_cast<std::size_t>(t)];
    truth += b.count();
    RngStream rng(seed, client_stream(t));
    const std::vector<Permutation>* decoys =
        (fixture && !fixture->decoys.empty()) ? &fixture->decoys[static_cast<std::size_t>(t)] : nullptr;
    const std::vector<double>* coeffs =
        (fixture && !fixture->coefficients.empty()) ? &fixture->coefficients[static_cast<std::size_t>(t)] : nullptr;
    ClientMessage msg = full ? client_mask_full(b, params, rng, decoys, coeffs)
                             : client_mask_compressed(b, params, rng, decoys, coeffs);
    msg.client_id = t;
    messages.push_back(std::move(msg));
  }

  RngStream shuffle_rng(seed, kShufflerStream);
  return assemble_transcript(messages, params, truth, shuffle_rng, fixture);
}

long long extract_perbit_aggregate(const Transcript& transcript, int j) {
  if (transcript.params.variant != Variant::TwoLayerFull)
    throw UnsupportedVariantError("per-bit extraction needs the retained matrices of the "
                                  "two-layer full variant");
  const ExtractionPair pair = perbit_pair(transcript.params.n, j);
  double fj = 0.0, hj = 0.0;
  for (const auto& d : transcript.aggregator->masked) fj += bilinear_extract(d, pair);
  for (const auto& nt : transcript.noise_aggregator->decoy_sum) hj += bilinear_extract(nt, pair);
  return static_cast<long long>(std::nearbyint((fj - hj) / transcript.params.alpha_star));
}

double extract_weighted_aggregate(const Transcript& transcript, const Vector& c) {
  if (transcript.params.variant != Variant::TwoLayerFull)
    throw UnsupportedVariantError("weighted extraction needs the retained matrices of the "
                                  "two-layer full variant");
  if (c.size() != transcript.params.n)
    throw std::invalid_argument("extract_weighted_aggregate: |c| must equal n");
  const ExtractionPair pair = weighted_pair(c);
  double fc = 0.0, hc = 0.0;
  for (const auto& d : transcript.aggregator->masked) fc += bilinear_extract(d, pair);
  for (const auto& nt : transcript.noise_aggregator->decoy_sum) hc += bilinear_extract(nt, pair);
  return (fc - hc) / transcript.params.alpha_star;
}

}  // namespace polyveil
