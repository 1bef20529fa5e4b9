#include "polyveil/attacks.hpp"

#include "polyveil/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polyveil {

namespace {

// Integer recovered from one (f, eta) pairing, or nullopt if not within tol
// of an integer in [0, n].
std::optional<long long> recovered_count(double f, double eta, double alpha_star, int n,
                                         double tol) {
  const double v = (f - eta) / alpha_star;
  const double r = std::nearbyint(v);
  if (std::abs(v - r) > tol) return std::nullopt;
  if (r < 0.0 || r > static_cast<double>(n)) return std::nullopt;
  return static_cast<long long>(r);
}

void pruned_dfs(const std::vector<std::vector<std::pair<int, long long>>>& candidates,
                const std::vector<std::size_t>& order, std::size_t depth,
                std::vector<int>& assignment, std::vector<long long>& counts,
                std::vector<char>& used, DeshuffleResult& result) {
  if (depth == order.size()) {
    std::vector<int> map(assignment.size());
    std::vector<long long> s(assignment.size());
    for (std::size_t t = 0; t < assignment.size(); ++t) {
      map[t] = assignment[t];
      s[t] = counts[t];
    }
    result.passing.push_back({Permutation(std::move(map)), std::move(s)});
    if (result.passing.size() > (1u << 20))
      throw std::runtime_error("deshuffle_attack: passing-assignment explosion");
    return;
  }
  const std::size_t t = order[depth];
  for (const auto& [pos, cnt] : candidates[t]) {
    if (used[static_cast<std::size_t>(pos)]) continue;
    used[static_cast<std::size_t>(pos)] = 1;
    assignment[t] = pos;
    counts[t] = cnt;
    pruned_dfs(candidates, order, depth + 1, assignment, counts, used, result);
    used[static_cast<std::size_t>(pos)] = 0;
  }
}

}  // namespace

DeshuffleResult deshuffle_attack(const std::vector<double>& f,
                                 const std::vector<double>& shuffled_eta, double alpha_star,
                                 int n, double tol, DeshuffleMode mode,
                                 const std::vector<long long>* ground_truth) {
  const int k = static_cast<int>(f.size());
  if (k < 1 || shuffled_eta.size() != f.size())
    throw std::invalid_argument("deshuffle_attack: f and shuffled eta lists must match");
  if (mode == DeshuffleMode::Auto) mode = k <= 10 ? DeshuffleMode::FullEnum : DeshuffleMode::Pruned;
  if (mode == DeshuffleMode::FullEnum && k > 10)
    throw std::invalid_argument("deshuffle_attack: k > 10 exceeds the enumeration cap; "
                                "use the pruned mode");
  if (k > 20) throw std::invalid_argument("deshuffle_attack: k > 20 is unsupported");

  DeshuffleResult result;
  if (mode == DeshuffleMode::FullEnum) {
    std::vector<int> map(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) map[static_cast<std::size_t>(i)] = i;
    do {
      std::vector<long long> s(static_cast<std::size_t>(k));
      bool ok = true;
      for (int t = 0; t < k && ok; ++t) {
        auto r = recovered_count(f[static_cast<std::size_t>(t)],
                                 shuffled_eta[static_cast<std::size_t>(map[static_cast<std::size_t>(t)])],
                                 alpha_star, n, tol);
        if (r) s[static_cast<std::size_t>(t)] = *r;
        else ok = false;
      }
      if (ok) result.passing.push_back({Permutation(map), std::move(s)});
    } while (std::next_permutation(map.begin(), map.end()));
  } else {
    // Candidate positions per client, then all perfect matchings among them.
    std::vector<std::vector<std::pair<int, long long>>> candidates(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t)
      for (int j = 0; j < k; ++j)
        if (auto r = recovered_count(f[static_cast<std::size_t>(t)], shuffled_eta[static_cast<std::size_t>(j)],
                                     alpha_star, n, tol))
          candidates[static_cast<std::size_t>(t)].push_back({j, *r});
    std::vector<std::size_t> order(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) order[static_cast<std::size_t>(t)] = static_cast<std::size_t>(t);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return candidates[a].size() < candidates[b].size();
    });
    std::vector<int> assignment(static_cast<std::size_t>(k), 0);
    std::vector<long long> counts(static_cast<std::size_t>(k), 0);
    std::vector<char> used(static_cast<std::size_t>(k), 0);
    pruned_dfs(candidates, order, 0, assignment, counts, used, result);
    // DFS order is candidate-count order; normalize to lexicographic.
    std::sort(result.passing.begin(), result.passing.end(),
              [](const auto& a, const auto& b) { return a.assignment.map() < b.assignment.map(); });
  }

  // Position maps that merely permute tied noise values recover the same
  // per-client counts; they are one hypothesis, not several. Keep one
  // representative per distinct recovered s-vector.
  result.position_assignments = static_cast<long long>(result.passing.size());
  std::vector<DeshuffleResult::PassingAssignment> distinct;
  std::vector<std::vector<long long>> seen;
  for (auto& pa : result.passing) {
    if (std::find(seen.begin(), seen.end(), pa.s) == seen.end()) {
      seen.push_back(pa.s);
      distinct.push_back(std::move(pa));
    }
  }
  result.passing = std::move(distinct);

  result.unique = result.passing.size() == 1;
  if (ground_truth && result.unique)
    result.correct_recovered = result.passing.front().s == *ground_truth;
  return result;
}

EmpiricalNoiseModel EmpiricalNoiseModel::from_samples(const std::vector<double>& samples,
                                                      int bins) {
  if (samples.empty() || bins < 1)
    throw std::invalid_argument("EmpiricalNoiseModel: need samples and bins");
  EmpiricalNoiseModel m;
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  m.lo_ = *lo_it;
  double span = *hi_it - *lo_it;
  if (span <= 0.0) span = 1.0;
  m.width_ = span / bins;
  m.density_.assign(static_cast<std::size_t>(bins), 0.0);
  for (double x : samples) {
    auto b = static_cast<long long>((x - m.lo_) / m.width_);
    b = std::clamp(b, 0LL, static_cast<long long>(bins) - 1);
    m.density_[static_cast<std::size_t>(b)] += 1.0;
  }
  const double norm = static_cast<double>(samples.size()) * m.width_;
  for (auto& d : m.density_) d /= norm;
  return m;
}

double EmpiricalNoiseModel::density(double x) const {
  const double pos = (x - lo_) / width_;
  if (pos < 0.0) return 0.0;
  auto b = static_cast<std::size_t>(pos);
  // right edge belongs to the last bin, matching how samples were counted
  if (b == density_.size() && pos == static_cast<double>(b)) b -= 1;
  if (b >= density_.size()) return 0.0;
  return density_[b];
}

PosteriorResult scalar_posterior(double f_t, double alpha_star, int n, const NoiseModel& model,
                                 const std::vector<double>* prior) {
  if (n < 1) throw std::invalid_argument("scalar_posterior: n must be >= 1");
  if (prior && static_cast<int>(prior->size()) != n + 1)
    throw std::invalid_argument("scalar_posterior: prior must have n + 1 entries");
  const auto density = [&](double x) {
    if (const auto* g = std::get_if<GaussianNoiseModel>(&model)) {
      const double z = (x - g->mean) / g->sigma;
      return std::exp(-0.5 * z * z) / (g->sigma * std::sqrt(2.0 * M_PI));
    }
    return std::get<EmpiricalNoiseModel>(model).density(x);
  };

  PosteriorResult result;
  result.probs.resize(static_cast<std::size_t>(n) + 1);
  double total = 0.0;
  for (int s = 0; s <= n; ++s) {
    const double pi = prior ? (*prior)[static_cast<std::size_t>(s)] : 1.0;
    const double p = density(f_t - alpha_star * s) * pi;
    result.probs[static_cast<std::size_t>(s)] = p;
    total += p;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    result.degenerate = true;
    std::fill(result.probs.begin(), result.probs.end(), 1.0 / (n + 1));
    return result;
  }
  for (auto& p : result.probs) p /= total;
  return result;
}

BitVector bits_from_permutation(const Permutation& p) {
  const int n = p.size() / 2;
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) bits[static_cast<std::size_t>(j)] = p(2 * j) == 2 * j + 1 ? 1 : 0;
  return BitVector(std::move(bits));
}

AttackOutcome gaussian_map_attack(const Matrix& d, double alpha_star, int n, int big_k,
                                  SearchSpace search) {
  const int m = 2 * n;
  if (d.rows() != m || d.cols() != m)
    throw std::invalid_argument("gaussian_map_attack: matrix must be 2n x 2n");
  const double mean_entry = (1.0 - alpha_star) / m;
  const double sigma_k2 =
      static_cast<double>(m - 1) / (static_cast<double>(m) * m * static_cast<double>(big_k));

  // Residual-from-mean energy, scanning candidates for the two smallest.
  const auto distance2 = [&](const Permutation& cand) {
    double d2 = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const double e = d(a, b) - (cand(a) == b ? alpha_star : 0.0) - mean_entry;
        d2 += e * e;
      }
    return d2;
  };

  AttackOutcome out;
  double best = std::numeric_limits<double>::infinity();
  double second = best;
  if (search == SearchSpace::FullEnum) {
    if (m > 8) throw std::invalid_argument("gaussian_map_attack: FullEnum needs 2n <= 8");
    for (const auto& cand : all_permutations(m)) {
      const double d2 = distance2(cand);
      if (d2 < best) {
        second = best;
        best = d2;
        out.guess_perm = cand;
      } else if (d2 < second) {
        second = d2;
      }
    }
    out.guess_bits = bits_from_permutation(*out.guess_perm);
  } else {
    if (n > 20) throw std::invalid_argument("gaussian_map_attack: BlockEnum needs n <= 20");
    // Over block-diagonal candidates the energy separates per block, so the
    // argmin is the per-block winner and the runner-up flips the weakest
    // block.
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    double margin = std::numeric_limits<double>::infinity();
    const auto block_energy = [&](int j, int bit) {
      const int r = 2 * j;
      double e = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const int hit = bit == 1 ? (a != b) : (a == b);
          const double v = d(r + a, r + b) - (hit ? alpha_star : 0.0) - mean_entry;
          e += v * v;
        }
      return e;
    };
    best = 0.0;
    for (int j = 0; j < n; ++j) {
      const double e0 = block_energy(j, 0);
      const double e1 = block_energy(j, 1);
      bits[static_cast<std::size_t>(j)] = e1 < e0 ? 1 : 0;
      best += std::min(e0, e1);
      margin = std::min(margin, std::abs(e1 - e0));
    }
    second = best + margin;
    out.guess_bits = BitVector(bits);
    out.guess_perm = encode_bitstream(*out.guess_bits);
  }
  out.score = (second - best) / (2.0 * sigma_k2);
  return out;
}

AttackOutcome hungarian_attack(const Matrix& d, double alpha_star) {
  (void)alpha_star;  // argmax_sigma sum_a D[a, sigma(a)] does not depend on the scale
  AttackOutcome out;
  out.guess_perm = Permutation(max_profit_assignment(d));
  if (d.rows() % 2 == 0) out.guess_bits = bits_from_permutation(*out.guess_perm);
  double profit = 0.0;
  for (int a = 0; a < d.rows(); ++a) profit += d(a, (*out.guess_perm)(a));
  out.score = profit;
  return out;
}

AttackOutcome block_threshold_attack(const Matrix& d, double alpha_star) {
  const int m = static_cast<int>(d.rows());
  if (d.rows() != d.cols() || m % 2 != 0)
    throw std::invalid_argument("block_threshold_attack: matrix must be square of even size");
  const int n = m / 2;
  const double threshold = alpha_star / 2.0 + (1.0 - alpha_star) / m;
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
  double min_margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    const double entry = d(2 * j, 2 * j + 1);
    bits[static_cast<std::size_t>(j)] = entry >= threshold ? 1 : 0;
    min_margin = std::min(min_margin, std::abs(entry - threshold));
  }
  AttackOutcome out;
  out.guess_bits = BitVector(std::move(bits));
  out.guess_perm = encode_bitstream(*out.guess_bits);
  out.score = min_margin;
  return out;
}

McDensityResult mc_density_estimate(const Matrix& r_target, int big_k, double alpha_star,
                                    long long n_samples, RngStream& rng, bool exhaustive) {
  if (!is_doubly_stochastic(r_target, 1e-6))
    throw std::invalid_argument("mc_density_estimate: target must be doubly stochastic");
  constexpr std::size_t kMaxExamples = 10;
  McDensityResult result;
  if (exhaustive) {
    TupleCensus census = exhaustive_tuple_census(r_target, big_k, alpha_star);
    result.hit_count = census.count;
    result.samples = census.total_tuples;
    for (std::size_t i = 0; i < census.consistent.size() && i < kMaxExamples; ++i)
      result.feasible_examples.push_back(census.consistent[i]);
  } else {
    if (n_samples < 1) throw std::invalid_argument("mc_density_estimate: need samples");
    const int m = static_cast<int>(r_target.rows());
    result.samples = n_samples;
    std::vector<Permutation> tuple;
    for (long long it = 0; it < n_samples; ++it) {
      tuple.clear();
      for (int i = 0; i < big_k; ++i) tuple.push_back(fisher_yates(m, rng));
      TupleFeasibility f = tuple_feasibility(tuple, r_target, alpha_star);
      if (f.feasible) {
        ++result.hit_count;
        if (result.feasible_examples.size() < kMaxExamples)
          result.feasible_examples.push_back(TupleWitness{tuple, *f.alpha});
      }
    }
  }
  result.hit_rate = static_cast<double>(result.hit_count) / static_cast<double>(result.samples);
  result.ci = wilson_interval(result.hit_count, result.samples);
  return result;
}

}  // namespace polyveil
