#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyveil/rng.hpp"
#include "polyveil/stats.hpp"

#include <cmath>

using namespace polyveil;

TEST_CASE("streams are deterministic and distinct") {
  RngStream a(42, 3), b(42, 3), c(42, 4);
  bool any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_u64();
    CHECK(va == b.next_u64());
    any_diff = any_diff || va != c.next_u64();
  }
  CHECK(any_diff);
}

TEST_CASE("next_below stays in range") {
  RngStream rng(1, 1);
  for (int i = 0; i < 1000; ++i) CHECK(rng.next_below(7) < 7);
  CHECK_THROWS_AS(rng.next_below(0), std::invalid_argument);
}

TEST_CASE("fisher_yates basics") {
  RngStream rng(5, 1);
  CHECK(fisher_yates(1, rng) == Permutation::identity(1));
  for (int i = 0; i < 100; ++i) {
    const Permutation p = fisher_yates(12, rng);  // constructor checks bijection
    CHECK(p.size() == 12);
  }
}

TEST_CASE("fisher_yates is uniform: chi-square over S_4") {
  // 240000 draws over 24 cells; reject above the 99.9% quantile of
  // chi-square with 23 degrees of freedom
  const double kChi2Crit = 49.7282324664315;
  RngStream rng(2024, 9);
  std::vector<long long> counts(24, 0);
  for (int i = 0; i < 240000; ++i) {
    const Permutation p = fisher_yates(4, rng);
    int code = 0;
    for (int j = 0; j < 4; ++j) code = code * 4 + p(j);
    // rank via direct lookup of the lexicographic index
    static std::vector<int> lut;
    if (lut.empty()) {
      lut.assign(256, -1);
      std::vector<int> map{0, 1, 2, 3};
      int rank = 0;
      do {
        int c = 0;
        for (int v : map) c = c * 4 + v;
        lut[static_cast<std::size_t>(c)] = rank++;
      } while (std::next_permutation(map.begin(), map.end()));
    }
    ++counts[static_cast<std::size_t>(lut[static_cast<std::size_t>(code)])];
  }
  CHECK(chi_square_uniform(counts) < kChi2Crit);
}

TEST_CASE("fisher_yates single-cell frequency") {
  // Pr[sigma(1) = 3] for m = 4 is 1/4
  RngStream rng(77, 2);
  int hits = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i)
    if (fisher_yates(4, rng)(0) == 2) ++hits;
  CHECK(std::abs(static_cast<double>(hits) / draws - 0.25) < 0.01);
}

TEST_CASE("dirichlet_simplex construction") {
  RngStream rng(3, 3);
  const CoefficientVector single = dirichlet_simplex(1, 0.4, rng);
  CHECK(single.alphas.size() == 1);
  CHECK(single.alphas[0] == doctest::Approx(0.4).epsilon(1e-15));

  for (int rep = 0; rep < 200; ++rep) {
    const CoefficientVector v = dirichlet_simplex(6, 0.7, rng);
    double sum = 0.0;
    for (double a : v.alphas) {
      CHECK(a > 0.0);
      sum += a;
    }
    CHECK(std::abs(sum - 0.7) <= 1e-12);
  }
  CHECK_THROWS_AS(dirichlet_simplex(2, 1.5, rng), std::invalid_argument);
}

TEST_CASE("dirichlet K=2 marginal is uniform on (0, total)") {
  RngStream rng(11, 4);
  std::vector<double> first;
  first.reserve(100000);
  for (int i = 0; i < 100000; ++i) first.push_back(dirichlet_simplex(2, 0.7, rng).alphas[0]);
  const KsResult ks = ks_uniform(std::move(first), 0.0, 0.7);
  CHECK(ks.p_value > 0.001);
}

TEST_CASE("uniform_simplex") {
  const CoefficientVector v = uniform_simplex(5, 0.6);
  for (double a : v.alphas) CHECK(a == doctest::Approx(0.12).epsilon(1e-15));
}
