#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rewire/phase_graph.hpp"

namespace rewire {

// Weighted graph Laplacian L = D - A with self-loops dropped (they are
// inert for the random walk) and parallel edges merged into weights.
struct LaplacianView {
  struct WEdge {
    int u = 0;
    int v = 0;
    double w = 0.0;
  };

  int n = 0;
  std::vector<WEdge> edges;    // u < v, consolidated, loopless
  std::vector<double> degree;  // weighted degrees
  double max_degree = 0.0;

  static LaplacianView from_graph(const PhaseGraph& graph);
  static LaplacianView from_weighted_edges(int n, std::vector<WEdge> edges);

  std::vector<double> apply(const std::vector<double>& v) const;  // L v
  bool connected() const;
};

// A probability mass over nodes tagged with its process time.
struct MassVector {
  std::vector<double> values;
  double time = 0.0;
};

MassVector make_point_mass(int n, int node);
MassVector make_uniform_mass(int n, const std::vector<int>& support);

// Entry validation: nonnegative within 1e-12, total mass within 1e-10 of 1.
void validate_mass(const MassVector& pi);

// Descending order with ties broken by node index ascending.
std::vector<int> sorted_desc_order(const std::vector<double>& values);
// prefix[s] = sum of the s largest entries, s = 0..n.
std::vector<double> sorted_prefix_sums(const std::vector<double>& values);

struct GapResult {
  double lambda2 = 0.0;
  bool connected = true;
};

// Second-smallest Laplacian eigenvalue (dense symmetric solve; refuses
// n > budget).  Disconnected graphs report lambda2 = 0 with the flag unset.
GapResult spectral_gap(const LaplacianView& lap, int budget = 2048);

// phi^2 / (2 * max_degree): the decay rate certified by the ratio profile.
double lambda_star(double phi_ratio_k, double max_degree);

// pi(t) = exp(-tL) pi0 by uniformization: Poisson-weighted powers of the
// stochastic operator I - L/rate, truncated once the Poisson tail drops
// below truncation_tol.  Max-norm error <= truncation_tol.
MassVector heat_kernel(const LaplacianView& lap, const MassVector& pi0, double t,
                       double truncation_tol = 1e-12);

// Sum over |S| <= k of the k-set spread bound: for every s <= k and t in
// t_grid, the s largest entries of pi(t) must total at most
//   s/(k+1) + sqrt(k+1) * exp(-lambda_star * t).
struct SpreadViolation {
  double t = 0.0;
  int s = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct SpreadReport {
  int checks = 0;
  double min_slack = 0.0;  // min over (t,s) of rhs - lhs
  std::vector<SpreadViolation> violations;
};

SpreadReport check_partial_spread(const LaplacianView& lap, int k, double phi_ratio_k,
                                  const MassVector& pi0, const std::vector<double>& t_grid,
                                  double tolerance = 1e-9);

// Collapse everything past the first k positions of `order` into one
// supernode (index k).  Edges internal to the collapsed set are dropped;
// weights between kept nodes and into the supernode are preserved.
struct CollapsedGraph {
  LaplacianView lap;        // k+1 nodes
  std::vector<int> order;   // order[u] = base node at position u
  int k = 0;
};

CollapsedGraph collapse(const LaplacianView& lap, const std::vector<int>& order, int k);

struct CollapseCheck {
  double lambda2 = 0.0;
  double lambda_star = 0.0;
  bool ok = false;
};

// lambda2(collapsed) >= phi_ratio_k^2 / (2 * base max degree), any ordering.
CollapseCheck check_collapsed_gap(const LaplacianView& lap, const std::vector<int>& order, int k,
                                  double phi_ratio_k, double tolerance = 1e-9);

// Exact derivative of the sorted prefix mass at cut position m versus the
// degree-4 pairing bound with window d_m = floor(min(gamma*m, d)/4):
//   d/dt pi_[m] = sum_{i in top-m} sum_{j not in top-m} a_ij (pi_j - pi_i)
//   bound      = -4 * (sum of sorted entries m-d_m+1..m
//                      - sum of sorted entries m+1..m+d_m)
struct DerivativeBound {
  double lhs = 0.0;  // exact derivative
  double rhs = 0.0;  // pairing bound; claim is lhs <= rhs
  int d_m = 0;
};

DerivativeBound sorted_mass_derivative_bound(const LaplacianView& lap,
                                             const MassVector& pi, int m, double gamma,
                                             double d);

// Auxiliary one-dimensional comparison process: mass starts uniform on
// positions 1..k of the line [1..n] and hops +-d' (d' = floor(d/4)) at rate
// 4, but only between positions that both lie inside
//   I = [k - (2/3)*kappa*d, k + (2/3)*kappa*d],  kappa = 4/gamma,
// clipped to [1, n].  Positions outside I are frozen.
struct NuResult {
  MassVector nu;        // values indexed by position-1
  bool frozen = false;  // d' == 0: nothing can move
  int dprime = 0;
  double interval_lo = 0.0;  // before clipping
  double interval_hi = 0.0;
};

NuResult aux_nu_process(int n, int k, double gamma, double d, double t);

// exp(-mu * h(r)) with h(r) = r ln r - r + 1, h(0) = 1: a lower-tail bound
// P(X <= r mu) for Poisson-dominated counts.  Requires 0 <= r < 1.
double chernoff_tail(double mu, double r);

// Any set obeys |E(S,S~)| >= lambda2 |S| |S~| / n >= (lambda2/2) |S| for
// |S| <= n/2, so lambda2/2 is a certified per-set expansion floor usable as
// a hypothesis gamma without exhaustive enumeration.
double certified_gamma_floor(double lambda2);

// Time-stepped dominance of the collapsed walk over the sorted mass: both
// start from pi0 (nu as the collapsed sorted initial mass), advance in exact
// exp(-hL) substeps with the collapse order re-derived each step, and the
// sorted entries must stay below the matching collapsed entries.
struct DominanceReport {
  double max_excess = 0.0;  // max over steps/entries of sorted - collapsed
  int steps = 0;
  bool ok = false;
};

DominanceReport check_collapsed_walk_dominance(const LaplacianView& lap, int k,
                                               const MassVector& pi0, double t_end,
                                               double tolerance = 1e-6);

}  // namespace rewire
