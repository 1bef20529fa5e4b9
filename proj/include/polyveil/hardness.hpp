#ifndef POLYVEIL_HARDNESS_HPP
#define POLYVEIL_HARDNESS_HPP

#include "polyveil/linalg.hpp"
#include "polyveil/rng.hpp"

#include <optional>

namespace polyveil {

enum class SearchSpace {
  FullEnum,  // all m! permutations, m <= 8
  BlockEnum  // the 2^n block-diagonal encodings, n <= 20
};

/// Permanent via Ryser's inclusion-exclusion with Gray-code updates,
/// O(2^m m). Exact integers for 0/1 inputs at the sizes enforced here.
/// Throws on m > 24.
double permanent(const Matrix& a);

/// Reference permanent by summing over all m! permutations; m <= 8.
double permanent_by_enumeration(const Matrix& a);

/// All m! permutations of {0..m-1} in lexicographic order; m <= 8.
std::vector<Permutation> all_permutations(int m);

/// 0/1 indicator of entries exceeding tol.
Matrix support_matrix(const Matrix& r_prime, double tol = 1e-10);

/// Every permutation whose 1-positions land on positive entries of r_prime.
/// Enumeration, so the matrix must be at most 8x8.
std::vector<Permutation> support_set(const Matrix& r_prime, double tol = 1e-10);

struct SupportCensus {
  Matrix support;           // 0/1
  long long support_size = 0;
  double permanent_value = 0.0;
};

/// Support matrix, support-set size, and the permanent of the support in one
/// call; the two counts agree whenever both are computed.
SupportCensus support_census(const Matrix& r_prime, double tol = 1e-10);

/// R' = (D - alpha* M') / (1 - alpha*): the decoy matrix that would explain D
/// if M' were the hidden encoding.
Matrix residual(const Matrix& d, const Permutation& m_candidate, double alpha_star);

/// True iff every entry of the decoy matrix exceeds alpha* / (1 - alpha*).
/// When it holds, no candidate's residual can have a zero entry.
bool interior_condition(const Matrix& r_t, double alpha_star);

/// Candidates whose residual is entrywise >= -tol.
std::vector<Permutation> feasible_candidates(const Matrix& d, double alpha_star, double tol,
                                             SearchSpace space);

struct TupleFeasibility {
  bool feasible = false;
  std::optional<CoefficientVector> alpha;  // set when the solution is unique
  bool positive_dimensional = false;       // solution set has dimension >= 1
  double residual_norm = 0.0;              // max-entry error of the best fit
};

/// Solves sum_i alpha_i P_{sigma_i} = (1 - alpha*) R_target together with
/// sum_i alpha_i = 1 - alpha* in the least-squares sense. Feasible iff the
/// fit error is at most tol and every coefficient exceeds tol. Rank-deficient
/// systems are reported as positive-dimensional rather than sampled.
TupleFeasibility tuple_feasibility(const std::vector<Permutation>& sigmas,
                                   const Matrix& r_target, double alpha_star,
                                   double tol = 1e-8);

struct TupleWitness {
  std::vector<Permutation> sigmas;
  CoefficientVector alpha;
};

struct TupleCensus {
  long long total_tuples = 0;  // (m!)^K
  std::vector<TupleWitness> consistent;
  long long count = 0;
};

/// Enumerates every ordered K-tuple of m! permutations and records the ones
/// that can express (1 - alpha*) R_target with positive coefficients.
/// Capped at (m!)^K <= 2^21.
TupleCensus exhaustive_tuple_census(const Matrix& r_target, int k, double alpha_star,
                                    double tol = 1e-8);

struct CandidateCensus {
  Permutation candidate;
  TupleCensus census;
};

/// The 4x4, K = 2 reduction worked end to end: for each of the 24 candidate
/// encodings, enumerates all 24^2 = 576 decoy pairs against the candidate's
/// residual. Candidates whose residual leaves the polytope get count 0.
std::vector<CandidateCensus> worked_reduction_census(const Matrix& d, double alpha_star);

}  // namespace polyveil

#endif  // POLYVEIL_HARDNESS_HPP
