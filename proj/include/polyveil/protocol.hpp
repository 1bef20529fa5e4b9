#ifndef POLYVEIL_PROTOCOL_HPP
#define POLYVEIL_PROTOCOL_HPP

#include "polyveil/linalg.hpp"
#include "polyveil/rng.hpp"

#include <optional>
#include <string>

namespace polyveil {

enum class Variant { Full, Compressed, TwoLayerFull, TwoLayerCompressed };

enum class CoefficientMode {
  Dirichlet,  // flat Dirichlet on the scaled simplex (default)
  Uniform     // equal weights; reproduces the closed-form noise variance
};

std::string to_string(Variant v);

struct ProtocolParams {
  int n = 1;           // bits per client
  int k = 1;           // clients
  int K = 2;           // decoys per client
  double alpha_star = 0.5;
  Variant variant = Variant::TwoLayerFull;
  CoefficientMode coefficients = CoefficientMode::Dirichlet;

  /// Throws std::invalid_argument on violated preconditions. The shuffled
  /// variants additionally require k >= 3.
  void validate() const;
};

/// Thrown when a submitted matrix fails the doubly-stochastic check.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an extraction needs a view the variant does not retain.
class UnsupportedVariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One client's protocol outputs. Which fields are populated depends on the
/// variant; each field is routed to a distinct entity.
struct ClientMessage {
  int client_id = 0;
  std::optional<Matrix> masked;     // D_t, full variants
  std::optional<double> f;          // scalar extraction, compressed variants
  double eta = 0.0;                 // noise scalar
  std::optional<Matrix> decoy_sum;  // sum of weighted decoys, two-layer full
};

/// What the single server of the shuffled variants sees: identity-linked
/// scalars plus the anonymized noise list (and, in the full variant, the
/// submitted matrices it extracted the scalars from).
struct LegacyServerView {
  std::vector<double> f;
  std::vector<double> shuffled_eta;
  std::vector<Matrix> submitted;  // empty in the compressed variant
};

/// The two-layer server's entire view: two scalars, nothing else.
struct TwoLayerServerView {
  double F = 0.0;
  double H = 0.0;
};

struct AggregatorView {
  std::vector<Matrix> masked;  // two-layer full
  std::vector<double> f;       // two-layer compressed
};

struct NoiseAggregatorView {
  std::vector<double> eta;
  std::vector<Matrix> decoy_sum;  // two-layer full only
};

/// Full record of one protocol run.
struct Transcript {
  ProtocolParams params;
  std::optional<LegacyServerView> legacy_server;
  std::optional<TwoLayerServerView> server;
  std::optional<AggregatorView> aggregator;
  std::optional<NoiseAggregatorView> noise_aggregator;
  long long recovered_S = 0;
  long long ground_truth_S = 0;
  double rounding_margin = 0.0;  // |(F-H)/alpha* - recovered_S|
};

/// Pre-specified randomness, used to replay a run with known decoys,
/// coefficients, and shuffle order.
struct ProtocolFixture {
  std::vector<std::vector<Permutation>> decoys;   // [client][decoy]
  std::vector<std::vector<double>> coefficients;  // [client][decoy]
  std::optional<Permutation> shuffle;
};

/// Masks one client's bits: D = alpha* M(b) + sum_i alpha_i P_i, with the
/// noise eta = sum_i alpha_i (w^T P_i y) and the decoy sum retained.
ClientMessage client_mask_full(const BitVector& b, const ProtocolParams& params, RngStream& rng,
                               const std::vector<Permutation>* decoys = nullptr,
                               const std::vector<double>* coeffs = nullptr);

/// Same draw sequence but only the scalars f = alpha* s + eta and eta are
/// produced; the matrix is never materialized.
ClientMessage client_mask_compressed(const BitVector& b, const ProtocolParams& params,
                                     RngStream& rng,
                                     const std::vector<Permutation>* decoys = nullptr,
                                     const std::vector<double>* coeffs = nullptr);

/// Applies a uniformly random permutation to the values. The permutation
/// itself is not exposed to any caller.
std::vector<double> trusted_shuffle(const std::vector<double>& values, RngStream& rng);

/// Aggregates already-masked messages into a transcript. Submitted matrices
/// are rejected with IntegrityError if not doubly stochastic. Exposed
/// separately from run_protocol so fault injection can target it.
Transcript assemble_transcript(const std::vector<ClientMessage>& messages,
                               const ProtocolParams& params, long long ground_truth_S,
                               RngStream& shuffle_rng, const ProtocolFixture* fixture = nullptr);

/// End-to-end run: one derived randomness stream per client, aggregation per
/// the variant, exact recovery of S = (F - H) / alpha*.
Transcript run_protocol(const std::vector<BitVector>& inputs, const ProtocolParams& params,
                        std::uint64_t seed, const ProtocolFixture* fixture = nullptr);

/// Count of clients with bit j set (1-based j), recovered from the stored
/// matrices and decoy sums of a two-layer full transcript.
long long extract_perbit_aggregate(const Transcript& transcript, int j);

/// sum_t sum_j c_j b_{t,j} recovered from the same stored views.
double extract_weighted_aggregate(const Transcript& transcript, const Vector& c);

/// Stream ids: the shuffler owns stream 0, client t owns stream t + 1.
inline constexpr std::uint64_t kShufflerStream = 0;
inline constexpr std::uint64_t client_stream(int t) { return static_cast<std::uint64_t>(t) + 1; }

}  // namespace polyveil

#endif  // POLYVEIL_PROTOCOL_HPP
