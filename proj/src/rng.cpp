#include "polyveil/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace polyveil {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t x = seed;
  (void)splitmix64(x);
  x ^= 0x6a09e667f3bcc909ULL + stream_id * 0x9e3779b97f4a7c15ULL;
  for (auto& s : state_) s = splitmix64(x);
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % bound;
  }
}

double RngStream::next_exponential() {
  // 1 - next_double() is in (0, 1], so the log is finite.
  return -std::log(1.0 - next_double());
}

Permutation fisher_yates(int m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("fisher_yates: m must be >= 1");
  std::vector<int> map(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) map[static_cast<std::size_t>(i)] = i;
  for (int i = m - 1; i >= 1; --i) {
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]);
  }
  return Permutation(std::move(map));
}

CoefficientVector dirichlet_simplex(int k, double total, RngStream& rng) {
  if (k < 1) throw std::invalid_argument("dirichlet_simplex: K must be >= 1");
  if (!(total > 0.0 && total < 1.0))
    throw std::invalid_argument("dirichlet_simplex: total must be in (0, 1)");
  const double floor = 1e-12 * total;
  CoefficientVector out;
  out.total = total;
  out.alphas.resize(static_cast<std::size_t>(k));
  for (;;) {
    double sum = 0.0;
    for (auto& a : out.alphas) {
      a = rng.next_exponential();
      sum += a;
    }
    bool ok = sum > 0.0;
    for (auto& a : out.alphas) {
      a *= total / sum;
      ok = ok && a >= floor;
    }
    if (ok) return out;
  }
}

CoefficientVector uniform_simplex(int k, double total) {
  if (k < 1) throw std::invalid_argument("uniform_simplex: K must be >= 1");
  CoefficientVector out;
  out.total = total;
  out.alphas.assign(static_cast<std::size_t>(k), total / k);
  return out;
}

}  // namespace polyveil
