#ifndef POLYVEIL_LINALG_HPP
#define POLYVEIL_LINALG_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace polyveil {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Fixed-length vector of bits. Length is immutable after construction.
class BitVector {
 public:
  explicit BitVector(std::vector<std::uint8_t> bits);
  static BitVector zeros(int n);

  int size() const { return static_cast<int>(bits_.size()); }
  std::uint8_t operator[](int j) const { return bits_[static_cast<std::size_t>(j)]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// Hamming weight.
  long long count() const;

 private:
  std::vector<std::uint8_t> bits_;
};

/// A bijection on {0, ..., m-1}, stored as the index map i -> sigma(i).
/// The dense matrix form places a 1 at (i, sigma(i)) in every row i.
class Permutation {
 public:
  explicit Permutation(std::vector<int> map);
  static Permutation identity(int m);

  int size() const { return static_cast<int>(map_.size()); }
  int operator()(int i) const { return map_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& map() const { return map_; }

  Matrix to_matrix() const;
  Permutation inverse() const;
  bool operator==(const Permutation& other) const { return map_ == other.map_; }

 private:
  std::vector<int> map_;
};

/// Extraction vector pair (w, y); statistics of an encoded matrix A are read
/// off as the bilinear form w^T A y.
struct ExtractionPair {
  Vector w;
  Vector y;
};

/// Encodes one bit as a 2x2 permutation: 0 -> identity, 1 -> swap.
Permutation encode_bit(int b);

/// Block-diagonal encoding of a bitstream; block j acts on {2j, 2j+1}
/// (0-based) as encode_bit(b_j). The result is a 2n-element permutation.
Permutation encode_bitstream(const BitVector& b);

/// w = (1,0,1,0,...), y = (0,1,0,1,...), each of length 2n. Applied to an
/// encoded bitstream this pair extracts the total bit count.
ExtractionPair standard_extraction_pair(int n);

/// w = e_{2j-1}, y = e_{2j} (1-based j in [1, n]). Extracts bit j alone.
ExtractionPair perbit_pair(int n, int j);

/// w has c_j at the odd slots and 0 at the even slots; y is the standard y.
/// Extracts sum_j c_j b_j.
ExtractionPair weighted_pair(const Vector& c);

/// w = e_{2j-1} with the standard y: reads the (2j-1)-th entry of A*y, a
/// row-sum functional distinct from the single-entry one of perbit_pair.
ExtractionPair rowsum_pair(int n, int j);

/// Sum of the (2j-1, 2j) entries over the n diagonal 2x2 blocks: the total
/// of the n per-bit functionals. On an encoded bitstream this also equals
/// the bit count, but on a generic permutation it differs from w^T P y,
/// which counts every odd row mapped to any even column.
double block_offdiag_sum(const Matrix& a);
double block_offdiag_sum(const Permutation& p);

/// w^T A y. Throws std::invalid_argument on dimension mismatch.
double bilinear_extract(const Matrix& a, const ExtractionPair& p);

/// Same bilinear form evaluated on a permutation in O(m) via
/// (P y)_i = y_{sigma(i)}.
double bilinear_extract(const Permutation& p, const ExtractionPair& pair);

/// True iff all entries >= -tol and every row and column sum lies in
/// [1 - tol, 1 + tol].
bool is_doubly_stochastic(const Matrix& a, double tol = 1e-9);

}  // namespace polyveil

#endif  // POLYVEIL_LINALG_HPP
