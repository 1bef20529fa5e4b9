#include "polyveil/linalg.hpp"

#include <numeric>

namespace polyveil {

BitVector::BitVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw std::invalid_argument("BitVector: length must be >= 1");
  for (auto b : bits_) {
    if (b > 1) throw std::invalid_argument("BitVector: entries must be 0 or 1");
  }
}

BitVector BitVector::zeros(int n) {
  return BitVector(std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0));
}

long long BitVector::count() const {
  return std::accumulate(bits_.begin(), bits_.end(), 0LL);
}

Permutation::Permutation(std::vector<int> map) : map_(std::move(map)) {
  const int m = static_cast<int>(map_.size());
  if (m < 1) throw std::invalid_argument("Permutation: size must be >= 1");
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  for (int v : map_) {
    if (v < 0 || v >= m || seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("Permutation: map is not a bijection");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(int m) {
  std::vector<int> map(static_cast<std::size_t>(m));
  std::iota(map.begin(), map.end(), 0);
  return Permutation(std::move(map));
}

Matrix Permutation::to_matrix() const {
  const int m = size();
  Matrix p = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i) p(i, map_[static_cast<std::size_t>(i)]) = 1.0;
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(map_.size());
  for (int i = 0; i < size(); ++i) inv[static_cast<std::size_t>(map_[static_cast<std::size_t>(i)])] = i;
  return Permutation(std::move(inv));
}

Permutation encode_bit(int b) {
  if (b != 0 && b != 1) throw std::invalid_argument("encode_bit: b must be 0 or 1");
  return b == 0 ? Permutation({0, 1}) : Permutation({1, 0});
}

Permutation encode_bitstream(const BitVector& b) {
  const int n = b.size();
  std::vector<int> map(static_cast<std::size_t>(2 * n));
  for (int j = 0; j < n; ++j) {
    if (b[j] == 0) {
      map[static_cast<std::size_t>(2 * j)] = 2 * j;
      map[static_cast<std::size_t>(2 * j + 1)] = 2 * j + 1;
    } else {
      map[static_cast<std::size_t>(2 * j)] = 2 * j + 1;
      map[static_cast<std::size_t>(2 * j + 1)] = 2 * j;
    }
  }
  return Permutation(std::move(map));
}

ExtractionPair standard_extraction_pair(int n) {
  if (n < 1) throw std::invalid_argument("standard_extraction_pair: n must be >= 1");
  ExtractionPair p{Vector::Zero(2 * n), Vector::Zero(2 * n)};
  for (int j = 0; j < n; ++j) {
    p.w(2 * j) = 1.0;
    p.y(2 * j + 1) = 1.0;
  }
  return p;
}

ExtractionPair perbit_pair(int n, int j) {
  if (j < 1 || j > n) throw std::invalid_argument("perbit_pair: j out of range");
  ExtractionPair p{Vector::Zero(2 * n), Vector::Zero(2 * n)};
  p.w(2 * (j - 1)) = 1.0;
  p.y(2 * (j - 1) + 1) = 1.0;
  return p;
}

ExtractionPair weighted_pair(const Vector& c) {
  const int n = static_cast<int>(c.size());
  if (n < 1) throw std::invalid_argument("weighted_pair: empty weights");
  if (!c.allFinite()) throw std::invalid_argument("weighted_pair: weights must be finite");
  ExtractionPair p{Vector::Zero(2 * n), Vector::Zero(2 * n)};
  for (int j = 0; j < n; ++j) {
    p.w(2 * j) = c(j);
    p.y(2 * j + 1) = 1.0;
  }
  return p;
}

ExtractionPair rowsum_pair(int n, int j) {
  if (j < 1 || j > n) throw std::invalid_argument("rowsum_pair: j out of range");
  ExtractionPair p = standard_extraction_pair(n);
  p.w.setZero();
  p.w(2 * (j - 1)) = 1.0;
  return p;
}

double block_offdiag_sum(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() % 2 != 0)
    throw std::invalid_argument("block_offdiag_sum: matrix must be square of even size");
  double acc = 0.0;
  for (int j = 0; 2 * j < a.rows(); ++j) acc += a(2 * j, 2 * j + 1);
  return acc;
}

double block_offdiag_sum(const Permutation& p) {
  if (p.size() % 2 != 0)
    throw std::invalid_argument("block_offdiag_sum: size must be even");
  double acc = 0.0;
  for (int j = 0; 2 * j < p.size(); ++j)
    if (p(2 * j) == 2 * j + 1) acc += 1.0;
  return acc;
}

double bilinear_extract(const Matrix& a, const ExtractionPair& p) {
  if (a.rows() != a.cols() || a.rows() != p.w.size() || a.rows() != p.y.size())
    throw std::invalid_argument("bilinear_extract: dimension mismatch");
  return p.w.dot(a * p.y);
}

double bilinear_extract(const Permutation& p, const ExtractionPair& pair) {
  const int m = p.size();
  if (pair.w.size() != m || pair.y.size() != m)
    throw std::invalid_argument("bilinear_extract: dimension mismatch");
  double acc = 0.0;
  for (int i = 0; i < m; ++i) acc += pair.w(i) * pair.y(p(i));
  return acc;
}

bool is_doubly_stochastic(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  if (a.minCoeff() < -tol) return false;
  const int m = static_cast<int>(a.rows());
  for (int i = 0; i < m; ++i) {
    if (std::abs(a.row(i).sum() - 1.0) > tol) return false;
    if (std::abs(a.col(i).sum() - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace polyveil
