#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyveil/protocol.hpp"

#include <cmath>

using namespace polyveil;

namespace {

BitVector bv(std::initializer_list<int> bits) {
  std::vector<std::uint8_t> v;
  for (int b : bits) v.push_back(static_cast<std::uint8_t>(b));
  return BitVector(v);
}

Permutation one_based(std::initializer_list<int> map) {
  std::vector<int> v;
  for (int i : map) v.push_back(i - 1);
  return Permutation(v);
}

// the fixed three-client example: bits, decoys, coefficients, shuffle order
struct WorkedExample {
  std::vector<BitVector> inputs{bv({1, 0}), bv({1, 1}), bv({0, 1})};
  ProtocolFixture fixture;
  WorkedExample() {
    fixture.decoys = {{one_based({3, 1, 4, 2}), one_based({2, 1, 4, 3})},
                      {one_based({4, 3, 2, 1}), one_based({1, 2, 3, 4})},
                      {one_based({2, 1, 3, 4}), one_based({3, 4, 1, 2})}};
    fixture.coefficients = {{0.5, 0.2}, {0.4, 0.3}, {0.35, 0.35}};
    fixture.shuffle = one_based({2, 3, 1});
  }
  ProtocolParams params(Variant v) const {
    ProtocolParams p;
    p.n = 2;
    p.k = 3;
    p.K = 2;
    p.alpha_star = 0.3;
    p.variant = v;
    return p;
  }
};

// view separation is structural: the two-layer server type holds exactly two
// scalars, the aggregator type carries no noise, the noise side carries no
// masked matrices and no extracted scalars
template <typename T>
concept HasEta = requires(T v) { v.eta; };
template <typename T>
concept HasMasked = requires(T v) { v.masked; };
template <typename T>
concept HasScalars = requires(T v) { v.f; };
static_assert(sizeof(TwoLayerServerView) == 2 * sizeof(double));
static_assert(!HasEta<AggregatorView>);
static_assert(!HasMasked<NoiseAggregatorView>);
static_assert(!HasScalars<NoiseAggregatorView>);
static_assert(HasEta<NoiseAggregatorView>);

}  // namespace

TEST_CASE("worked example reproduces every intermediate value") {
  WorkedExample ex;
  const Transcript tr = run_protocol(ex.inputs, ex.params(Variant::Full), 0, &ex.fixture);

  Matrix d1(4, 4);
  d1 << 0, 0.5, 0.5, 0, 1.0, 0, 0, 0, 0, 0, 0.3, 0.7, 0, 0.5, 0.2, 0.3;
  REQUIRE(tr.legacy_server.has_value());
  const Matrix& got = tr.legacy_server->submitted[0];
  CHECK((got - d1).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK(tr.legacy_server->f[0] == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(tr.legacy_server->f[1] == doctest::Approx(1.4).epsilon(1e-12));
  CHECK(tr.legacy_server->f[2] == doctest::Approx(0.65).epsilon(1e-12));

  const std::vector<double>& eta = tr.legacy_server->shuffled_eta;
  CHECK(eta[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(eta[1] == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(eta[2] == doctest::Approx(0.9).epsilon(1e-12));

  CHECK(tr.recovered_S == 4);
  CHECK(tr.ground_truth_S == 4);
}

TEST_CASE("worked example, two-layer view") {
  WorkedExample ex;
  const Transcript tr = run_protocol(ex.inputs, ex.params(Variant::TwoLayerFull), 0, &ex.fixture);
  REQUIRE(tr.server.has_value());
  CHECK(tr.server->F == doctest::Approx(3.25).epsilon(1e-12));
  CHECK(tr.server->H == doctest::Approx(2.05).epsilon(1e-12));
  CHECK(tr.recovered_S == 4);
  CHECK(tr.noise_aggregator->eta[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(tr.noise_aggregator->eta[1] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(tr.noise_aggregator->eta[2] == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("compressed path reproduces the second client's scalars") {
  WorkedExample ex;
  ProtocolParams p = ex.params(Variant::Compressed);
  RngStream rng(0, client_stream(1));
  const ClientMessage msg = client_mask_compressed(ex.inputs[1], p, rng, &ex.fixture.decoys[1],
                                                   &ex.fixture.coefficients[1]);
  CHECK(msg.eta == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(*msg.f == doctest::Approx(1.4).epsilon(1e-12));
}

TEST_CASE("masking at alpha* near 1 pins the encoding") {
  ProtocolParams p;
  p.n = 3;
  p.k = 1;
  p.K = 2;
  p.alpha_star = 1.0 - 1e-9;
  RngStream rng(1, 1);
  const BitVector b = bv({1, 0, 1});
  const ClientMessage msg = client_mask_full(b, p, rng);
  const Matrix m = encode_bitstream(b).to_matrix();
  CHECK((*msg.masked - m).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("masked scalar decomposes as alpha* s + eta") {
  ProtocolParams p;
  p.n = 6;
  p.k = 1;
  p.K = 4;
  p.alpha_star = 0.37;
  const ExtractionPair pair = standard_extraction_pair(p.n);
  RngStream rng(9, 5);
  RngStream bits(10, 6);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::uint8_t> raw(6);
    for (auto& x : raw) x = static_cast<std::uint8_t>(bits.next_below(2));
    const BitVector b{raw};
    const ClientMessage msg = client_mask_full(b, p, rng);
    CHECK(is_doubly_stochastic(*msg.masked, 1e-9));
    const double f = bilinear_extract(*msg.masked, pair);
    CHECK(f - msg.eta == doctest::Approx(p.alpha_star * static_cast<double>(b.count())).epsilon(1e-12));
    CHECK(msg.eta >= 0.0);
    CHECK(msg.eta <= (1.0 - p.alpha_star) * p.n);
  }
}

TEST_CASE("compressed masking") {
  ProtocolParams p;
  p.n = 4;
  p.k = 1;
  p.K = 3;
  p.alpha_star = 0.3;
  RngStream rng(4, 2);
  const ClientMessage zero = client_mask_compressed(BitVector::zeros(4), p, rng);
  CHECK(*zero.f == zero.eta);
  CHECK_FALSE(zero.masked.has_value());

  // The transmitted noise counts every odd row landed in an even column, so
  // its mean is (1 - alpha*) n/2. The per-bit noise total (block off-diagonal
  // functional) has mean (1 - alpha*)/2.
  p.n = 100;
  p.K = 10;
  double sum = 0.0, sumsq = 0.0, block_sum = 0.0, block_sumsq = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const ClientMessage m = client_mask_full(BitVector::zeros(100), p, rng);
    sum += m.eta;
    sumsq += m.eta * m.eta;
    const double y = block_offdiag_sum(*m.decoy_sum);
    block_sum += y;
    block_sumsq += y * y;
  }
  const double mean = sum / draws;
  const double sd = std::sqrt(sumsq / draws - mean * mean);
  CHECK(std::abs(mean - (1.0 - p.alpha_star) * p.n / 2.0) <= 3.0 * sd / std::sqrt(draws));
  const double block_mean = block_sum / draws;
  const double block_sd = std::sqrt(block_sumsq / draws - block_mean * block_mean);
  CHECK(std::abs(block_mean - (1.0 - p.alpha_star) / 2.0) <= 3.0 * block_sd / std::sqrt(draws));
}

TEST_CASE("per-bit noise total moments under uniform weights") {
  // the closed forms E = (1 - alpha*)/2 and Var = (1 - alpha*)^2 var_X / K
  // describe the per-bit noise total over the diagonal blocks
  const int n = 8, big_k = 5;
  const double alpha_star = 0.3;
  RngStream rng(21, 3);
  const int draws = 100000;
  std::vector<double> ys(draws);
  for (auto& y : ys) {
    double acc = 0.0;
    for (int i = 0; i < big_k; ++i)
      acc += (1.0 - alpha_star) / big_k * block_offdiag_sum(fisher_yates(2 * n, rng));
    y = acc;
  }

  double mean = 0.0;
  for (double y : ys) mean += y;
  mean /= draws;
  double m2 = 0.0, m4 = 0.0;
  for (double y : ys) {
    const double d = y - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= draws;
  m4 /= draws;

  const double var_x = 0.25 + (n - 1.0) / (2.0 * (2.0 * n - 1.0));
  const double expect_mean = (1.0 - alpha_star) / 2.0;
  const double expect_var = (1.0 - alpha_star) * (1.0 - alpha_star) * var_x / big_k;
  CHECK(std::abs(mean - expect_mean) <= 3.0 * std::sqrt(m2 / draws));
  const double se_var = std::sqrt((m4 - m2 * m2) / draws);
  CHECK(std::abs(m2 - expect_var) <= 3.0 * se_var);
}

TEST_CASE("trusted shuffle preserves the multiset and the sum") {
  RngStream rng(6, 7);
  const std::vector<double> single{3.5};
  CHECK(trusted_shuffle(single, rng) == single);

  // dyadic values sum exactly in any order
  std::vector<double> values;
  for (int i = 0; i < 40; ++i) values.push_back(static_cast<double>(i % 13) / 8.0);
  double sum = 0.0;
  for (double v : values) sum += v;
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> shuffled = trusted_shuffle(values, rng);
    std::vector<double> a = values, b = shuffled;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    double s = 0.0;
    for (double v : shuffled) s += v;
    CHECK(s == sum);
  }
}

TEST_CASE("every variant recovers the aggregate exactly") {
  RngStream bits(15, 8);
  const Variant variants[] = {Variant::Full, Variant::Compressed, Variant::TwoLayerFull,
                              Variant::TwoLayerCompressed};
  int idx = 0;
  for (int rep = 0; rep < 40; ++rep) {
    ProtocolParams p;
    p.variant = variants[idx++ % 4];
    p.n = 1 + static_cast<int>(bits.next_below(16));
    p.k = 3 + static_cast<int>(bits.next_below(20));
    p.K = 2 + static_cast<int>(bits.next_below(8));
    p.alpha_star = rep % 2 == 0 ? 0.5 : 1.0 / (4.0 * p.n);
    std::vector<BitVector> inputs;
    for (int t = 0; t < p.k; ++t) {
      std::vector<std::uint8_t> raw(static_cast<std::size_t>(p.n));
      for (auto& x : raw) x = static_cast<std::uint8_t>(bits.next_below(2));
      inputs.emplace_back(std::move(raw));
    }
    const Transcript tr = run_protocol(inputs, p, bits.next_u64());
    CHECK(tr.recovered_S == tr.ground_truth_S);
    CHECK(tr.rounding_margin < 1e-6);
  }
}

TEST_CASE("recovery margin stays tiny at n = 512") {
  ProtocolParams p;
  p.variant = Variant::TwoLayerCompressed;
  p.n = 512;
  p.k = 4;
  p.K = 6;
  p.alpha_star = 1.0 / (4.0 * p.n);
  std::vector<BitVector> inputs;
  RngStream bits(33, 1);
  for (int t = 0; t < p.k; ++t) {
    std::vector<std::uint8_t> raw(512);
    for (auto& x : raw) x = static_cast<std::uint8_t>(bits.next_below(2));
    inputs.emplace_back(std::move(raw));
  }
  const Transcript tr = run_protocol(inputs, p, 77);
  CHECK(tr.recovered_S == tr.ground_truth_S);
  CHECK(tr.rounding_margin < 1e-6);
}

TEST_CASE("k = 1 two-layer with all-zero input") {
  ProtocolParams p;
  p.variant = Variant::TwoLayerFull;
  p.n = 3;
  p.k = 1;
  p.K = 2;
  p.alpha_star = 0.4;
  const Transcript tr = run_protocol({BitVector::zeros(3)}, p, 5);
  CHECK(tr.recovered_S == 0);
}

TEST_CASE("noise does not depend on the inputs") {
  ProtocolParams p;
  p.variant = Variant::TwoLayerCompressed;
  p.n = 5;
  p.k = 4;
  p.K = 3;
  p.alpha_star = 0.25;
  std::vector<BitVector> zeros(4, BitVector::zeros(5));
  std::vector<BitVector> ones;
  for (int t = 0; t < 4; ++t) ones.push_back(BitVector({1, 1, 1, 1, 1}));
  const Transcript a = run_protocol(zeros, p, 123);
  const Transcript b = run_protocol(ones, p, 123);
  REQUIRE(a.noise_aggregator.has_value());
  CHECK(a.noise_aggregator->eta == b.noise_aggregator->eta);
}

TEST_CASE("non-doubly-stochastic submission is rejected") {
  ProtocolParams p;
  p.variant = Variant::TwoLayerFull;
  p.n = 2;
  p.k = 2;
  p.K = 2;
  p.alpha_star = 0.3;
  RngStream rng0(50, client_stream(0)), rng1(50, client_stream(1));
  std::vector<ClientMessage> messages;
  messages.push_back(client_mask_full(bv({1, 0}), p, rng0));
  messages.push_back(client_mask_full(bv({0, 1}), p, rng1));
  (*messages[1].masked)(0, 0) += 0.05;  // injected fault
  RngStream shuffle(50, kShufflerStream);
  CHECK_THROWS_AS(assemble_transcript(messages, p, 2, shuffle), IntegrityError);
}

TEST_CASE("parameter validation") {
  ProtocolParams p;
  p.variant = Variant::Compressed;
  p.n = 2;
  p.k = 2;  // shuffled variants need k >= 3
  p.K = 2;
  p.alpha_star = 0.3;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.k = 3;
  CHECK_NOTHROW(p.validate());
  p.K = 1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.K = 2;
  p.alpha_star = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("per-bit extraction") {
  WorkedExample ex;
  const Transcript tr = run_protocol(ex.inputs, ex.params(Variant::TwoLayerFull), 0, &ex.fixture);
  CHECK(extract_perbit_aggregate(tr, 1) == 2);  // bits (1,1,0) at position 1
  CHECK(extract_perbit_aggregate(tr, 2) == 2);  // bits (0,1,1) at position 2

  const Transcript zeros = run_protocol(
      std::vector<BitVector>(3, BitVector::zeros(2)), ex.params(Variant::TwoLayerFull), 1);
  CHECK(extract_perbit_aggregate(zeros, 1) == 0);
  CHECK(extract_perbit_aggregate(zeros, 2) == 0);

  const Transcript compressed =
      run_protocol(ex.inputs, ex.params(Variant::TwoLayerCompressed), 0, &ex.fixture);
  CHECK_THROWS_AS(extract_perbit_aggregate(compressed, 1), UnsupportedVariantError);
  CHECK_THROWS_AS(extract_weighted_aggregate(compressed, Vector::Ones(2)),
                  UnsupportedVariantError);
}

TEST_CASE("per-bit and weighted extraction on random instances") {
  ProtocolParams p;
  p.variant = Variant::TwoLayerFull;
  p.n = 7;
  p.k = 9;
  p.K = 4;
  p.alpha_star = 0.2;
  RngStream bits(61, 2);
  std::vector<BitVector> inputs;
  for (int t = 0; t < p.k; ++t) {
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(p.n));
    for (auto& x : raw) x = static_cast<std::uint8_t>(bits.next_below(2));
    inputs.emplace_back(raw);
  }
  const Transcript tr = run_protocol(inputs, p, 99);

  long long total = 0;
  for (int j = 1; j <= p.n; ++j) {
    long long count = 0;
    for (const auto& b : inputs) count += b[j - 1];
    CHECK(extract_perbit_aggregate(tr, j) == count);
    total += count;
  }
  CHECK(extract_weighted_aggregate(tr, Vector::Ones(p.n)) ==
        doctest::Approx(static_cast<double>(total)).epsilon(1e-12));
  CHECK(static_cast<double>(tr.recovered_S) == doctest::Approx(static_cast<double>(total)));

  // e_j route equals the per-bit route
  for (int j = 1; j <= p.n; ++j) {
    Vector ej = Vector::Zero(p.n);
    ej(j - 1) = 1.0;
    CHECK(extract_weighted_aggregate(tr, ej) ==
          doctest::Approx(static_cast<double>(extract_perbit_aggregate(tr, j))).epsilon(1e-9));
  }

  // random weights against the direct sum
  RngStream wrng(8, 1);
  for (int rep = 0; rep < 5; ++rep) {
    Vector c(p.n);
    for (int j = 0; j < p.n; ++j) c(j) = wrng.next_double() * 2.0 - 1.0;
    double direct = 0.0;
    for (const auto& b : inputs)
      for (int j = 0; j < p.n; ++j) direct += c(j) * b[j];
    CHECK(std::abs(extract_weighted_aggregate(tr, c) - direct) <= 1e-9);
  }
}
