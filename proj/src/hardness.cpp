#include "polyveil/hardness.hpp"

#include <algorithm>
#include <cmath>

namespace polyveil {

double permanent(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("permanent: matrix must be square");
  const int m = static_cast<int>(a.rows());
  if (m < 1 || m > 24) throw std::invalid_argument("permanent: size must be in [1, 24]");
  if (m == 1) return a(0, 0);

  // Ryser: perm(A) = (-1)^m sum_{S != empty} (-1)^{|S|} prod_i sum_{j in S} a_ij.
  // Gray-code order flips one column per step, so the row sums update in O(m).
  Vector row_sums = Vector::Zero(m);
  double total = 0.0;
  std::uint32_t prev_gray = 0;
  const std::uint64_t count = 1ULL << m;
  int popcount = 0;
  for (std::uint64_t idx = 1; idx < count; ++idx) {
    const std::uint32_t gray = static_cast<std::uint32_t>(idx ^ (idx >> 1));
    const std::uint32_t changed = gray ^ prev_gray;
    int col = 0;
    while (!((changed >> col) & 1u)) ++col;
    if (gray & changed) {
      row_sums += a.col(col);
      ++popcount;
    } else {
      row_sums -= a.col(col);
      --popcount;
    }
    prev_gray = gray;
    const double prod = row_sums.prod();
    total += (popcount % 2 == 0) ? prod : -prod;
  }
  return (m % 2 == 0) ? total : -total;
}

std::vector<Permutation> all_permutations(int m) {
  if (m < 1 || m > 8) throw std::invalid_argument("all_permutations: size must be in [1, 8]");
  std::vector<int> map(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) map[static_cast<std::size_t>(i)] = i;
  std::vector<Permutation> out;
  do {
    out.emplace_back(map);
  } while (std::next_permutation(map.begin(), map.end()));
  return out;
}

double permanent_by_enumeration(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() > 8)
    throw std::invalid_argument("permanent_by_enumeration: size must be in [1, 8]");
  const int m = static_cast<int>(a.rows());
  double total = 0.0;
  for (const auto& p : all_permutations(m)) {
    double prod = 1.0;
    for (int i = 0; i < m; ++i) prod *= a(i, p(i));
    total += prod;
  }
  return total;
}

Matrix support_matrix(const Matrix& r_prime, double tol) {
  return (r_prime.array() > tol).cast<double>();
}

namespace {

void support_dfs(const Matrix& a, int row, std::vector<int>& map, std::vector<char>& used,
                 std::vector<Permutation>& out) {
  const int m = static_cast<int>(a.rows());
  if (row == m) {
    out.emplace_back(map);
    return;
  }
  for (int col = 0; col < m; ++col) {
    if (used[static_cast<std::size_t>(col)] || a(row, col) == 0.0) continue;
    used[static_cast<std::size_t>(col)] = 1;
    map[static_cast<std::size_t>(row)] = col;
    support_dfs(a, row + 1, map, used, out);
    used[static_cast<std::size_t>(col)] = 0;
  }
}

}  // namespace

std::vector<Permutation> support_set(const Matrix& r_prime, double tol) {
  if (r_prime.rows() != r_prime.cols() || r_prime.rows() > 8)
    throw std::invalid_argument("support_set: size must be in [1, 8]");
  const Matrix a = support_matrix(r_prime, tol);
  std::vector<Permutation> out;
  std::vector<int> map(static_cast<std::size_t>(a.rows()));
  std::vector<char> used(static_cast<std::size_t>(a.rows()), 0);
  support_dfs(a, 0, map, used, out);
  return out;
}

SupportCensus support_census(const Matrix& r_prime, double tol) {
  SupportCensus c;
  c.support = support_matrix(r_prime, tol);
  c.support_size = static_cast<long long>(support_set(r_prime, tol).size());
  c.permanent_value = permanent(c.support);
  return c;
}

Matrix residual(const Matrix& d, const Permutation& m_candidate, double alpha_star) {
  const int m = static_cast<int>(d.rows());
  if (d.rows() != d.cols() || m_candidate.size() != m)
    throw std::invalid_argument("residual: dimension mismatch");
  Matrix r = d;
  for (int i = 0; i < m; ++i) r(i, m_candidate(i)) -= alpha_star;
  return r / (1.0 - alpha_star);
}

bool interior_condition(const Matrix& r_t, double alpha_star) {
  return r_t.minCoeff() > alpha_star / (1.0 - alpha_star);
}

std::vector<Permutation> feasible_candidates(const Matrix& d, double alpha_star, double tol,
                                             SearchSpace space) {
  const int m = static_cast<int>(d.rows());
  if (d.rows() != d.cols() || m % 2 != 0)
    throw std::invalid_argument("feasible_candidates: matrix must be square of even size");
  // Only entries where the candidate places a 1 can push the residual
  // negative; everywhere else the residual inherits the sign of D.
  const double bound = alpha_star - tol * (1.0 - alpha_star);

  std::vector<Permutation> out;
  if (space == SearchSpace::FullEnum) {
    if (m > 8) throw std::invalid_argument("feasible_candidates: FullEnum needs size <= 8");
    for (const auto& p : all_permutations(m)) {
      bool ok = true;
      for (int i = 0; i < m && ok; ++i) ok = d(i, p(i)) >= bound;
      if (ok) out.push_back(p);
    }
    return out;
  }

  const int n = m / 2;
  if (n > 20) throw std::invalid_argument("feasible_candidates: BlockEnum needs n <= 20");
  std::vector<std::vector<int>> choices(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    if (d(2 * j, 2 * j) >= bound && d(2 * j + 1, 2 * j + 1) >= bound)
      choices[static_cast<std::size_t>(j)].push_back(0);
    if (d(2 * j, 2 * j + 1) >= bound && d(2 * j + 1, 2 * j) >= bound)
      choices[static_cast<std::size_t>(j)].push_back(1);
    if (choices[static_cast<std::size_t>(j)].empty()) return {};
  }
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n), 0);
  std::vector<std::size_t> cursor(static_cast<std::size_t>(n), 0);
  for (;;) {
    for (int j = 0; j < n; ++j)
      bits[static_cast<std::size_t>(j)] =
          static_cast<std::uint8_t>(choices[static_cast<std::size_t>(j)][cursor[static_cast<std::size_t>(j)]]);
    out.push_back(encode_bitstream(BitVector(bits)));
    int j = 0;
    while (j < n && ++cursor[static_cast<std::size_t>(j)] == choices[static_cast<std::size_t>(j)].size()) {
      cursor[static_cast<std::size_t>(j)] = 0;
      ++j;
    }
    if (j == n) break;
  }
  return out;
}

TupleFeasibility tuple_feasibility(const std::vector<Permutation>& sigmas,
                                   const Matrix& r_target, double alpha_star, double tol) {
  if (sigmas.empty()) throw std::invalid_argument("tuple_feasibility: empty tuple");
  const int m = static_cast<int>(r_target.rows());
  const int k = static_cast<int>(sigmas.size());
  for (const auto& s : sigmas)
    if (s.size() != m) throw std::invalid_argument("tuple_feasibility: dimension mismatch");

  // Stacked entry constraints plus the simplex-sum constraint.
  Matrix system = Matrix::Zero(m * m + 1, k);
  Vector rhs = Vector::Zero(m * m + 1);
  for (int i = 0; i < k; ++i) {
    for (int a = 0; a < m; ++a) system(a * m + sigmas[static_cast<std::size_t>(i)](a), i) = 1.0;
    system(m * m, i) = 1.0;
  }
  const double total = 1.0 - alpha_star;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) rhs(a * m + b) = total * r_target(a, b);
  rhs(m * m) = total;

  Eigen::JacobiSVD<Matrix> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sv_max = svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-10 * sv_max) ++rank;
  const Vector x = svd.solve(rhs);

  TupleFeasibility result;
  result.residual_norm = (system * x - rhs).cwiseAbs().maxCoeff();
  result.positive_dimensional = rank < k;
  const bool fits = result.residual_norm <= tol;
  bool positive = true;
  for (int i = 0; i < k; ++i) positive = positive && x(i) > tol;
  result.feasible = fits && positive;
  if (result.feasible) {
    CoefficientVector alpha;
    alpha.total = total;
    alpha.alphas.assign(x.data(), x.data() + k);
    result.alpha = std::move(alpha);
  }
  return result;
}

TupleCensus exhaustive_tuple_census(const Matrix& r_target, int k, double alpha_star,
                                    double tol) {
  const int m = static_cast<int>(r_target.rows());
  if (r_target.rows() != r_target.cols())
    throw std::invalid_argument("exhaustive_tuple_census: matrix must be square");
  const std::vector<Permutation> perms = all_permutations(m);
  double total_d = std::pow(static_cast<double>(perms.size()), k);
  if (k < 1 || total_d > static_cast<double>(1 << 21))
    throw std::invalid_argument("exhaustive_tuple_census: (m!)^K too large to enumerate");

  TupleCensus census;
  census.total_tuples = static_cast<long long>(total_d);
  std::vector<std::size_t> cursor(static_cast<std::size_t>(k), 0);
  std::vector<Permutation> tuple;
  for (;;) {
    tuple.clear();
    for (auto c : cursor) tuple.push_back(perms[c]);
    TupleFeasibility f = tuple_feasibility(tuple, r_target, alpha_star, tol);
    if (f.feasible) {
      ++census.count;
      census.consistent.push_back(TupleWitness{tuple, *f.alpha});
    }
    int j = 0;
    while (j < k && ++cursor[static_cast<std::size_t>(j)] == perms.size()) {
      cursor[static_cast<std::size_t>(j)] = 0;
      ++j;
    }
    if (j == k) break;
  }
  return census;
}

std::vector<CandidateCensus> worked_reduction_census(const Matrix& d, double alpha_star) {
  if (d.rows() != 4 || d.cols() != 4)
    throw std::invalid_argument("worked_reduction_census: needs a 4x4 matrix");
  std::vector<CandidateCensus> out;
  for (const auto& candidate : all_permutations(4)) {
    CandidateCensus cc{candidate, {}};
    const Matrix r = residual(d, candidate, alpha_star);
    cc.census.total_tuples = 576;
    if (r.minCoeff() >= -1e-9) {
      cc.census = exhaustive_tuple_census(r, 2, alpha_star);
    }
    out.push_back(std::move(cc));
  }
  return out;
}

}  // namespace polyveil
