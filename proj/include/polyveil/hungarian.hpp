#ifndef POLYVEIL_HUNGARIAN_HPP
#define POLYVEIL_HUNGARIAN_HPP

#include "polyveil/linalg.hpp"

namespace polyveil {

/// Minimum-cost perfect assignment on a square cost matrix via shortest
/// augmenting paths with potentials, O(m^3). Returns the row -> column map.
/// Deterministic: equal-cost solutions resolve by scan order.
std::vector<int> min_cost_assignment(const Matrix& cost);

/// Assignment maximizing the sum of selected entries.
std::vector<int> max_profit_assignment(const Matrix& profit);

}  // namespace polyveil

#endif  // POLYVEIL_HUNGARIAN_HPP
