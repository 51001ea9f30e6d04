#include "dlvp/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "dlvp/errors.hpp"

namespace dlvp {

namespace {

// Spanning-tree basis over supplies [0, P), demands [P, P+D) and an
// artificial root P+D. Every non-root node stores the arc to its parent.
class NetworkSimplex {
 public:
  NetworkSimplex(const std::vector<double>& supply, const std::vector<double>& demand,
                 const std::vector<double>& cost, const TransportOptions& opts)
      : supply_(supply), demand_(demand), cost_(cost), opts_(opts),
        P_(supply.size()), D_(demand.size()), root_(P_ + D_), nodes_(P_ + D_ + 1),
        parent_(nodes_), arc_(nodes_), up_(nodes_), flow_(nodes_), depth_(nodes_), pi_(nodes_),
        child_start_(nodes_ + 1), child_list_(nodes_), stack_(nodes_) {
    max_cost_ = 0.0;
    for (double c : cost_) max_cost_ = std::max(max_cost_, std::abs(c));
    artificial_ = (max_cost_ + 1.0) * static_cast<double>(nodes_);
    threshold_ = std::max(opts_.tol * max_cost_, 1e-14 * artificial_);

    parent_[root_] = root_;
    for (std::size_t i = 0; i < P_; ++i) {
      parent_[i] = root_;
      arc_[i] = kArtificial;
      up_[i] = true;
      flow_[i] = supply_[i];
    }
    for (std::size_t j = 0; j < D_; ++j) {
      const std::size_t v = P_ + j;
      parent_[v] = root_;
      arc_[v] = kArtificial;
      up_[v] = false;
      flow_[v] = demand_[j];
    }
    rebuild();
  }

  TransportSolution run() {
    const std::size_t total = P_ * D_;
    const std::size_t block = std::max<std::size_t>(16, static_cast<std::size_t>(std::sqrt(double(total))));
    std::size_t next = 0;
    std::size_t pivots = 0;
    while (true) {
      // Block pricing from `next`, wrapping once around the arc list.
      double best = -threshold_;
      std::int64_t best_arc = -1;
      std::size_t i = next / D_;
      std::size_t j = next % D_;
      std::size_t scanned = 0;
      while (scanned < total) {
        const std::size_t a = i * D_ + j;
        const double rc = cost_[a] + pi_[i] - pi_[P_ + j];
        if (rc < best) {
          best = rc;
          best_arc = static_cast<std::int64_t>(a);
        }
        ++scanned;
        if (++j == D_) {
          j = 0;
          if (++i == P_) i = 0;
        }
        if (best_arc >= 0 && scanned % block == 0) break;
      }
      if (best_arc < 0) break;
      next = i * D_ + j;
      pivot(static_cast<std::size_t>(best_arc));
      if (++pivots > opts_.max_pivots) {
        throw AccuracyError(fmt::format("network simplex exceeded {} pivots", opts_.max_pivots), current_cost(), 0.0);
      }
    }

    TransportSolution sol;
    sol.cost = current_cost();
    sol.pivots = pivots;
    sol.supply_potential.resize(P_);
    sol.demand_potential.resize(D_);
    // Potentials use rc = c + pi_i - pi_j; the dual pair is u = -pi_i, v = -pi_j.
    for (std::size_t i = 0; i < P_; ++i) sol.supply_potential[i] = -pi_[i];
    for (std::size_t j = 0; j < D_; ++j) sol.demand_potential[j] = -pi_[P_ + j];
    for (std::size_t x = 0; x < root_; ++x) {
      if (arc_[x] == kArtificial) sol.unrouted += flow_[x];
    }
    return sol;
  }

 private:
  static constexpr std::int64_t kArtificial = -1;

  double arc_cost(std::size_t x) const {
    return arc_[x] == kArtificial ? artificial_ : cost_[static_cast<std::size_t>(arc_[x])];
  }

  double current_cost() const {
    double total = 0.0;
    for (std::size_t x = 0; x < root_; ++x) {
      if (arc_[x] != kArtificial) total += cost_[static_cast<std::size_t>(arc_[x])] * flow_[x];
    }
    return total;
  }

  // Depths and potentials from the parent array.
  void rebuild() {
    std::fill(child_start_.begin(), child_start_.end(), 0);
    for (std::size_t x = 0; x < root_; ++x) ++child_start_[parent_[x] + 1];
    for (std::size_t x = 0; x < nodes_; ++x) child_start_[x + 1] += child_start_[x];
    std::vector<std::size_t>& fill = fill_;
    fill.assign(child_start_.begin(), child_start_.end() - 1);
    for (std::size_t x = 0; x < root_; ++x) child_list_[fill[parent_[x]]++] = x;

    std::size_t top = 0;
    stack_[top++] = root_;
    depth_[root_] = 0;
    pi_[root_] = 0.0;
    while (top > 0) {
      const std::size_t v = stack_[--top];
      for (std::size_t c = child_start_[v]; c < child_start_[v + 1]; ++c) {
        const std::size_t x = child_list_[c];
        depth_[x] = depth_[v] + 1;
        // Tree arcs have zero reduced cost.
        pi_[x] = up_[x] ? pi_[v] - arc_cost(x) : pi_[v] + arc_cost(x);
        stack_[top++] = x;
      }
    }
  }

  void pivot(std::size_t e) {
    const std::size_t u = e / D_;
    const std::size_t w = P_ + e % D_;

    std::size_t a = u;
    std::size_t b = w;
    while (a != b) {
      if (depth_[a] > depth_[b]) {
        a = parent_[a];
      } else if (depth_[b] > depth_[a]) {
        b = parent_[b];
      } else {
        a = parent_[a];
        b = parent_[b];
      }
    }
    const std::size_t join = a;

    // Cycle orientation follows u -> w. On the u side tree arcs are traversed
    // parent -> child, on the w side child -> parent. Ties go to the last
    // blocking arc met when walking the cycle from the join.
    double delta = std::numeric_limits<double>::infinity();
    std::size_t leaving = nodes_;
    bool leaving_on_u_side = false;
    for (std::size_t x = u; x != join; x = parent_[x]) {
      if (up_[x] && flow_[x] < delta) {
        delta = flow_[x];
        leaving = x;
        leaving_on_u_side = true;
      }
    }
    for (std::size_t x = w; x != join; x = parent_[x]) {
      if (!up_[x] && flow_[x] <= delta) {
        delta = flow_[x];
        leaving = x;
        leaving_on_u_side = false;
      }
    }
    if (leaving == nodes_) throw AccuracyError("transportation problem is unbounded", current_cost(), 0.0);

    for (std::size_t x = u; x != join; x = parent_[x]) flow_[x] += up_[x] ? -delta : delta;
    for (std::size_t x = w; x != join; x = parent_[x]) flow_[x] += up_[x] ? delta : -delta;
    flow_[leaving] = 0.0;

    // Re-hang the subtree cut off by the leaving arc from the entering arc,
    // reversing the parent chain between the entering endpoint and `leaving`.
    std::size_t x = leaving_on_u_side ? u : w;
    std::size_t new_parent = leaving_on_u_side ? w : u;
    std::int64_t new_arc = static_cast<std::int64_t>(e);
    bool new_up = leaving_on_u_side;
    double new_flow = delta;
    while (true) {
      const std::size_t old_parent = parent_[x];
      const std::int64_t old_arc = arc_[x];
      const bool old_up = up_[x];
      const double old_flow = flow_[x];
      parent_[x] = new_parent;
      arc_[x] = new_arc;
      up_[x] = new_up;
      flow_[x] = new_flow;
      if (x == leaving) break;
      new_parent = x;
      new_arc = old_arc;
      new_up = !old_up;
      new_flow = old_flow;
      x = old_parent;
    }
    rebuild();
  }

  const std::vector<double>& supply_;
  const std::vector<double>& demand_;
  const std::vector<double>& cost_;
  TransportOptions opts_;
  std::size_t P_;
  std::size_t D_;
  std::size_t root_;
  std::size_t nodes_;
  double max_cost_ = 0.0;
  double artificial_ = 0.0;
  double threshold_ = 0.0;

  std::vector<std::size_t> parent_;
  std::vector<std::int64_t> arc_;
  std::vector<char> up_;
  std::vector<double> flow_;
  std::vector<std::size_t> depth_;
  std::vector<double> pi_;
  std::vector<std::size_t> child_start_;
  std::vector<std::size_t> child_list_;
  std::vector<std::size_t> stack_;
  std::vector<std::size_t> fill_;
};

}  // namespace

TransportSolution solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                                  const std::vector<double>& cost, const TransportOptions& opts) {
  if (cost.size() != supply.size() * demand.size()) {
    throw DomainError(fmt::format("cost matrix has {} entries, expected {} x {}", cost.size(), supply.size(),
                                  demand.size()));
  }
  for (double s : supply) {
    if (!(s > 0.0)) throw DomainError(fmt::format("supplies must be positive, got {}", s));
  }
  for (double d : demand) {
    if (!(d > 0.0)) throw DomainError(fmt::format("demands must be positive, got {}", d));
  }
  if (supply.empty() || demand.empty()) {
    TransportSolution sol;
    sol.supply_potential.assign(supply.size(), 0.0);
    sol.demand_potential.assign(demand.size(), 0.0);
    for (double s : supply) sol.unrouted += s;
    for (double d : demand) sol.unrouted += d;
    return sol;
  }
  return NetworkSimplex(supply, demand, cost, opts).run();
}

}  // namespace dlvp
