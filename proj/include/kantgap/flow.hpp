#pragma once

#include <optional>
#include <vector>

#include "kantgap/measure.hpp"

namespace kantgap {

/// Node potentials for the two sides of the transport network.
/// Reduced costs c(i,j) - u(i) - v(j) are nonnegative on every finite cell
/// and vanish on cells that carry flow.
template <class Scalar>
struct PotentialPair {
  Vector<Scalar> u;
  Vector<Scalar> v;
};

template <class Scalar>
struct Breakpoint {
  Scalar mass;
  Scalar cost;
  PotentialPair<Scalar> potentials;
};

/// Convex piecewise-linear map m -> minimal cost of shipping mass m under
/// rowSums <= mu, colSums <= nu. Starts at (0,0) and ends at maxMass.
template <class Scalar>
class TransportProfile {
 public:
  explicit TransportProfile(std::vector<Breakpoint<Scalar>> breakpoints)
      : breakpoints_(std::move(breakpoints)) {
    if (breakpoints_.empty() || !isZero<Scalar>(breakpoints_.front().mass))
      throw std::logic_error("profile must start at mass 0");
  }

  const std::vector<Breakpoint<Scalar>>& breakpoints() const { return breakpoints_; }
  const Scalar& maxMass() const { return breakpoints_.back().mass; }

  /// Slope of each linear piece; size = breakpoints - 1.
  std::vector<Scalar> slopes() const {
    std::vector<Scalar> out;
    for (std::size_t k = 1; k < breakpoints_.size(); ++k)
      out.push_back((breakpoints_[k].cost - breakpoints_[k - 1].cost) /
                    (breakpoints_[k].mass - breakpoints_[k - 1].mass));
    return out;
  }

 private:
  std::vector<Breakpoint<Scalar>> breakpoints_;
};

/// Everything a single successive-shortest-path run produces.
template <class Scalar>
struct FlowSolution {
  TransportProfile<Scalar> profile;
  Coupling<Scalar> coupling;
  PotentialPair<Scalar> potentials;
  Scalar mass;
  Scalar cost;
  /// True when no augmenting path remains (mass = maxMass).
  bool saturated = false;
  /// Source side of the final residual network, meaningful when saturated.
  VectorMask cutX;
  VectorMask cutY;
};

namespace detail {

/// Successive shortest augmenting paths with node potentials on the network
/// source -> X (capacity mu_i) -> Y (finite cells, unbounded) -> sink
/// (capacity nu_j). Infinite cells have no arc. Zero-weight atoms stay in
/// the network with zero capacity so indices line up with the input.
///
/// Dijkstra scans nodes in (distance, index) order and only accepts strict
/// improvements, so ties between equal-cost paths resolve lexicographically
/// by (X index, Y index).
template <class Scalar>
class SuccessiveShortestPaths {
 public:
  SuccessiveShortestPaths(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu, const Marginal<Scalar>& nu)
      : c_(c), mu_(mu.weights()), nu_(nu.weights()), nx_(mu.size()), ny_(nu.size()) {
    requireShape(c, mu, nu);
    flow_ = Matrix<Scalar>::Zero(nx_, ny_);
    rowFlow_ = Vector<Scalar>::Zero(nx_);
    colFlow_ = Vector<Scalar>::Zero(ny_);
    potential_.assign(nodeCount(), Scalar(0));
  }

  FlowSolution<Scalar> run(const std::optional<Scalar>& limit) {
    std::vector<Breakpoint<Scalar>> breakpoints{{Scalar(0), Scalar(0), currentPotentials()}};
    std::optional<Scalar> lastSlope;
    Scalar shipped(0);
    Scalar cost(0);
    bool saturated = false;

    while (true) {
      if (limit && !approxLess<Scalar>(shipped, *limit)) break;
      if (!shortestPaths()) {
        saturated = true;
        break;
      }
      const Scalar& sinkDist = *dist_[sink()];
      for (int node = 0; node < nodeCount(); ++node)
        potential_[node] += (dist_[node] && *dist_[node] < sinkDist) ? *dist_[node] : sinkDist;

      Scalar amount = bottleneck();
      if (limit && *limit - shipped < amount) amount = *limit - shipped;
      const Scalar slope = augment(amount);
      shipped += amount;
      cost += amount * slope;

      if (lastSlope && approxEq<Scalar>(slope, *lastSlope)) {
        breakpoints.back() = {shipped, cost, currentPotentials()};
      } else {
        if (lastSlope && slope < *lastSlope && !approxEq<Scalar>(slope, *lastSlope))
          throw std::logic_error("augmenting path costs decreased");
        breakpoints.push_back({shipped, cost, currentPotentials()});
      }
      lastSlope = slope;
    }

    FlowSolution<Scalar> out{TransportProfile<Scalar>(std::move(breakpoints)),
                             Coupling<Scalar>::fromDense(flow_),
                             currentPotentials(),
                             shipped,
                             cost,
                             saturated,
                             VectorMask::Constant(nx_, false),
                             VectorMask::Constant(ny_, false)};
    if (saturated) {
      for (int i = 0; i < nx_; ++i) out.cutX(i) = dist_[xNode(i)].has_value();
      for (int j = 0; j < ny_; ++j) out.cutY(j) = dist_[yNode(j)].has_value();
    }
    return out;
  }

 private:
  int nodeCount() const { return nx_ + ny_ + 2; }
  int source() const { return 0; }
  int xNode(int i) const { return 1 + i; }
  int yNode(int j) const { return 1 + nx_ + j; }
  int sink() const { return 1 + nx_ + ny_; }

  PotentialPair<Scalar> currentPotentials() const {
    PotentialPair<Scalar> p{Vector<Scalar>(nx_), Vector<Scalar>(ny_)};
    for (int i = 0; i < nx_; ++i) p.u(i) = -potential_[xNode(i)];
    for (int j = 0; j < ny_; ++j) p.v(j) = potential_[yNode(j)];
    return p;
  }

  void relax(int from, int to, const Scalar& arcCost) {
    Scalar candidate = *dist_[from] + arcCost + potential_[from] - potential_[to];
    if (!dist_[to] || candidate < *dist_[to]) {
      dist_[to] = std::move(candidate);
      pred_[to] = from;
    }
  }

  /// Dijkstra on reduced costs. Returns whether the sink is reachable.
  bool shortestPaths() {
    dist_.assign(nodeCount(), std::nullopt);
    pred_.assign(nodeCount(), -1);
    std::vector<bool> done(nodeCount(), false);
    dist_[source()] = Scalar(0);

    while (true) {
      int u = -1;
      for (int node = 0; node < nodeCount(); ++node)
        if (!done[node] && dist_[node] && (u < 0 || *dist_[node] < *dist_[u])) u = node;
      if (u < 0) break;
      done[u] = true;

      if (u == source()) {
        for (int i = 0; i < nx_; ++i)
          if (isPositive<Scalar>(mu_(i) - rowFlow_(i))) relax(u, xNode(i), Scalar(0));
      } else if (u <= nx_) {
        const int i = u - 1;
        for (int j = 0; j < ny_; ++j)
          if (c_.isFinite(i, j)) relax(u, yNode(j), c_.value(i, j));
      } else if (u < sink()) {
        const int j = u - 1 - nx_;
        for (int i = 0; i < nx_; ++i)
          if (isPositive<Scalar>(flow_(i, j))) relax(u, xNode(i), -c_.value(i, j));
        if (isPositive<Scalar>(nu_(j) - colFlow_(j))) relax(u, sink(), Scalar(0));
      }
      // Arcs leaving the sink cannot shorten any path that matters: the
      // potential update caps every distance at the sink distance.
    }
    return dist_[sink()].has_value();
  }

  Scalar bottleneck() const {
    std::optional<Scalar> best;
    auto consider = [&best](const Scalar& cap) {
      if (!best || cap < *best) best = cap;
    };
    for (int node = sink(); node != source(); node = pred_[node]) {
      const int from = pred_[node];
      if (from == source()) {
        consider(mu_(node - 1) - rowFlow_(node - 1));
      } else if (node == sink()) {
        consider(nu_(from - 1 - nx_) - colFlow_(from - 1 - nx_));
      } else if (from > nx_) {
        consider(flow_(node - 1, from - 1 - nx_));
      }
    }
    return *best;
  }

  /// Pushes `amount` along the predecessor path; returns the path's cost.
  Scalar augment(const Scalar& amount) {
    Scalar pathCost(0);
    for (int node = sink(); node != source(); node = pred_[node]) {
      const int from = pred_[node];
      if (from == source()) {
        rowFlow_(node - 1) += amount;
      } else if (node == sink()) {
        colFlow_(from - 1 - nx_) += amount;
      } else if (from <= nx_) {
        const int i = from - 1, j = node - 1 - nx_;
        flow_(i, j) += amount;
        pathCost += c_.value(i, j);
      } else {
        const int i = node - 1, j = from - 1 - nx_;
        flow_(i, j) -= amount;
        if (isZero<Scalar>(flow_(i, j))) flow_(i, j) = Scalar(0);
        pathCost -= c_.value(i, j);
      }
    }
    return pathCost;
  }

  const CostMatrix<Scalar>& c_;
  Vector<Scalar> mu_;
  Vector<Scalar> nu_;
  int nx_;
  int ny_;
  Matrix<Scalar> flow_;
  Vector<Scalar> rowFlow_;
  Vector<Scalar> colFlow_;
  std::vector<Scalar> potential_;
  std::vector<std::optional<Scalar>> dist_;
  std::vector<int> pred_;
};

}  // namespace detail

/// Runs the parametric solver, optionally stopping once `massLimit` is shipped.
template <class Scalar>
FlowSolution<Scalar> solve_flow(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu, const Marginal<Scalar>& nu,
                                const std::optional<Scalar>& massLimit = std::nullopt) {
  detail::SuccessiveShortestPaths<Scalar> solver(c, mu, nu);
  return solver.run(massLimit);
}

template <class Scalar>
TransportProfile<Scalar> solve_profile(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu,
                                       const Marginal<Scalar>& nu) {
  return solve_flow(c, mu, nu).profile;
}

/// Linear interpolation between breakpoints; Infinite beyond maxMass.
template <class Scalar>
ExtendedCost<Scalar> evaluate_profile(const TransportProfile<Scalar>& p, const Scalar& m) {
  if (m < 0 && !isZero<Scalar>(m)) throw Error(ErrorCode::NegativeMass, "mass must be >= 0");
  const auto& bps = p.breakpoints();
  if (approxEq<Scalar>(m, bps.back().mass)) return bps.back().cost;
  if (m > bps.back().mass) return ExtendedCost<Scalar>::infinity();
  for (std::size_t k = 1; k < bps.size(); ++k) {
    if (m <= bps[k].mass) {
      const auto& lo = bps[k - 1];
      const auto& hi = bps[k];
      return lo.cost + (m - lo.mass) * (hi.cost - lo.cost) / (hi.mass - lo.mass);
    }
  }
  return bps.back().cost;
}

/// Optimal partial coupling of mass exactly m together with its certifying
/// potentials.
template <class Scalar>
FlowSolution<Scalar> solve_at_mass(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu,
                                   const Marginal<Scalar>& nu, const Scalar& m) {
  if (m < 0 && !isZero<Scalar>(m)) throw Error(ErrorCode::NegativeMass, "mass must be >= 0");
  FlowSolution<Scalar> sol = solve_flow(c, mu, nu, std::optional<Scalar>(m));
  if (!approxEq<Scalar>(sol.mass, m))
    throw Error(ErrorCode::InfeasibleMass,
                "mass " + formatScalar(m) + " exceeds the maximal finite-cost mass " + formatScalar(sol.mass));
  return sol;
}

template <class Scalar>
Coupling<Scalar> optimal_coupling_at(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu,
                                     const Marginal<Scalar>& nu, const Scalar& m) {
  return solve_at_mass(c, mu, nu, m).coupling;
}

}  // namespace kantgap
