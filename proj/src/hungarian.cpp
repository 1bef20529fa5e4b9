#include "polyveil/hungarian.hpp"

#include <limits>

namespace polyveil {

std::vector<int> min_cost_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols() || cost.rows() < 1)
    throw std::invalid_argument("min_cost_assignment: cost matrix must be square");
  const int m = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();

  // 1-indexed arrays with a virtual 0 row/column, the classic potentials
  // formulation.
  std::vector<double> u(static_cast<std::size_t>(m) + 1, 0.0), v(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(m) + 1, 0), way(static_cast<std::size_t>(m) + 1, 0);

  for (int i = 1; i <= m; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)]) - 1] = j - 1;
  return row_to_col;
}

std::vector<int> max_profit_assignment(const Matrix& profit) {
  return min_cost_assignment(-profit);
}

}  // namespace polyveil
