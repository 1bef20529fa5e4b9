#ifndef POLYVEIL_ATTACKS_HPP
#define POLYVEIL_ATTACKS_HPP

#include "polyveil/hardness.hpp"
#include "polyveil/linalg.hpp"
#include "polyveil/rng.hpp"
#include "polyveil/stats.hpp"

#include <optional>
#include <variant>

namespace polyveil {

enum class DeshuffleMode { Auto, FullEnum, Pruned };

struct DeshuffleResult {
  struct PassingAssignment {
    Permutation assignment;       // client t -> position in the shuffled list
    std::vector<long long> s;     // recovered per-client bit counts
  };
  // one representative per distinct recovered-counts hypothesis
  std::vector<PassingAssignment> passing;
  // raw number of position maps that passed; exceeds passing.size() only
  // when the shuffled list holds tied values
  long long position_assignments = 0;
  bool unique = false;
  bool correct_recovered = false;  // set when ground truth is supplied
};

/// Matches shuffled noise values back to identity-linked scalars by testing
/// which assignments make every (f_t - eta~_{sigma(t)}) / alpha* an integer
/// in [0, n]. FullEnum walks all k! assignments (k <= 10); Pruned intersects
/// per-client candidate positions and searches the induced exact cover
/// (k <= 20). Auto picks by k. Position maps that only permute tied noise
/// values recover the same counts and collapse to one hypothesis.
DeshuffleResult deshuffle_attack(const std::vector<double>& f,
                                 const std::vector<double>& shuffled_eta, double alpha_star,
                                 int n, double tol = 1e-6,
                                 DeshuffleMode mode = DeshuffleMode::Auto,
                                 const std::vector<long long>* ground_truth = nullptr);

struct GaussianNoiseModel {
  double mean = 0.0;
  double sigma = 1.0;
};

/// Histogram density estimate of the noise scalar.
class EmpiricalNoiseModel {
 public:
  static EmpiricalNoiseModel from_samples(const std::vector<double>& samples, int bins = 200);
  double density(double x) const;

 private:
  double lo_ = 0.0, width_ = 1.0;
  std::vector<double> density_;
};

using NoiseModel = std::variant<GaussianNoiseModel, EmpiricalNoiseModel>;

struct PosteriorResult {
  std::vector<double> probs;  // over s in {0, ..., n}
  bool degenerate = false;    // all densities vanished; fell back to uniform
};

/// Posterior over the bit count given one masked scalar: proportional to
/// mu(f - alpha* s) * prior(s). Uniform prior when none is given.
PosteriorResult scalar_posterior(double f_t, double alpha_star, int n, const NoiseModel& model,
                                 const std::vector<double>* prior = nullptr);

struct AttackOutcome {
  std::optional<Permutation> guess_perm;
  std::optional<BitVector> guess_bits;
  bool success = false;  // filled by the caller against ground truth
  double score = 0.0;
};

/// Per-block bit guess read off a guessed permutation: block j votes 1 iff
/// the permutation maps 2j-1 to 2j (1-based).
BitVector bits_from_permutation(const Permutation& p);

/// Picks the candidate encoding closest to D - (1-alpha*) J/(2n) in Frobenius
/// norm, the MAP estimate under the isotropic Gaussian surrogate for the
/// decoy density. Score is the log-likelihood margin between the two best
/// candidates, (d2 - d1) / (2 sigma_K^2); ties score 0.
AttackOutcome gaussian_map_attack(const Matrix& d, double alpha_star, int n, int big_k,
                                  SearchSpace search);

/// Linear assignment maximizing sum_a D[a, sigma(a)], i.e. the permutation
/// matrix nearest to D/alpha* in Frobenius norm over all of S_m.
AttackOutcome hungarian_attack(const Matrix& d, double alpha_star);

/// Thresholds each diagonal 2x2 block: bit j guessed 1 iff
/// D[2j-1, 2j] >= alpha*/2 + (1-alpha*)/(2n).
AttackOutcome block_threshold_attack(const Matrix& d, double alpha_star);

struct McDensityResult {
  long long hit_count = 0;
  long long samples = 0;
  double hit_rate = 0.0;
  WilsonInterval ci;
  std::vector<TupleWitness> feasible_examples;  // at most a handful kept
};

/// Monte Carlo estimate of how often a uniform K-tuple of permutations can
/// express (1-alpha*) R_target with positive coefficients. With
/// exhaustive = true, enumerates every tuple instead of sampling.
McDensityResult mc_density_estimate(const Matrix& r_target, int big_k, double alpha_star,
                                    long long n_samples, RngStream& rng,
                                    bool exhaustive = false);

}  // namespace polyveil

#endif  // POLYVEIL_ATTACKS_HPP
