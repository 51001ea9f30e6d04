#pragma once

// Dense transportation problem solved by a primal network simplex.
//
//   minimise   sum_ij cost(i,j) x_ij
//   subject to sum_j x_ij = supply_i,  sum_i x_ij = demand_j,  x >= 0
//
// Its LP dual, max sum_i supply_i u_i - sum_j demand_j v_j subject to
// u_i - v_j <= cost(i,j), is the discretised Lipschitz problem the worst-case
// module needs. Deterministic: block pricing scans arcs in index order from
// the last pivot position, and the leaving arc follows the strongly-feasible
// (last blocking arc on the cycle) rule, which also rules out cycling.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dlvp {

struct TransportSolution {
  /// sum cost * flow over real arcs.
  double cost = 0.0;
  /// Dual variables; u_i - v_j <= cost(i,j) up to the pricing tolerance.
  std::vector<double> supply_potential;
  std::vector<double> demand_potential;
  /// Flow still routed through the artificial root (imbalance of the data).
  double unrouted = 0.0;
  std::size_t pivots = 0;
};

struct TransportOptions {
  /// Reduced costs above -tol * max_cost count as nonnegative.
  double tol = 1e-12;
  std::size_t max_pivots = 50'000'000;
};

/// cost is row-major: cost[i * demand.size() + j]. Supplies and demands must
/// be positive; totals may differ by rounding, the excess stays unrouted.
TransportSolution solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                                  const std::vector<double>& cost, const TransportOptions& opts = {});

}  // namespace dlvp
