#ifndef POLYVEIL_RNG_HPP
#define POLYVEIL_RNG_HPP

#include "polyveil/linalg.hpp"

#include <array>
#include <cstdint>

namespace polyveil {

/// Deterministic 64-bit random stream. Streams are derived from a
/// (seed, stream_id) pair so that independent actors (clients, the shuffler,
/// the simulator) can draw concurrently without coordination and a rerun with
/// the same pair replays the identical sequence. xoshiro256++ state, expanded
/// from the pair with splitmix64.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double next_double();

  /// Uniform on {0, ..., bound-1}, unbiased (rejection sampling).
  std::uint64_t next_below(std::uint64_t bound);

  /// Exponential(1) variate.
  double next_exponential();

 private:
  std::array<std::uint64_t, 4> state_;
};

/// Positive coefficients on a scaled simplex: every alpha_i > 0 and
/// sum(alphas) == total up to rounding.
struct CoefficientVector {
  std::vector<double> alphas;
  double total = 0.0;
};

/// Uniform random permutation of {0, ..., m-1}; every one of the m!
/// permutations is equally likely. O(m).
Permutation fisher_yates(int m, RngStream& rng);

/// Uniform draw from {alpha_i > 0, sum alpha_i = total}: K exponential(1)
/// variates normalized and scaled by total (flat Dirichlet). Redraws if any
/// coefficient falls below 1e-12 * total, so strict positivity holds.
CoefficientVector dirichlet_simplex(int k, double total, RngStream& rng);

/// Equal weights total/K each; consumes no randomness. Exists to reproduce
/// the closed-form noise variance, which conditions on uniform weights.
CoefficientVector uniform_simplex(int k, double total);

}  // namespace polyveil

#endif  // POLYVEIL_RNG_HPP
