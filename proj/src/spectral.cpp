#include "rewire/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "rewire/interchange.hpp"  // poisson_h

namespace rewire {

namespace {

Eigen::MatrixXd dense_laplacian(const LaplacianView& lap) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(lap.n, lap.n);
  for (const auto& e : lap.edges) {
    L(e.u, e.v) -= e.w;
    L(e.v, e.u) -= e.w;
    L(e.u, e.u) += e.w;
    L(e.v, e.v) += e.w;
  }
  return L;
}

}  // namespace

LaplacianView LaplacianView::from_weighted_edges(int n, std::vector<WEdge> raw) {
  if (n < 1) throw std::invalid_argument("Laplacian needs at least one node");
  std::map<std::pair<int, int>, double> merged;
  for (const auto& e : raw) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw std::invalid_argument("Laplacian edge endpoint out of range");
    }
    if (e.w < 0) throw std::invalid_argument("Laplacian edge weight must be nonnegative");
    if (e.u == e.v || e.w == 0.0) continue;  // loops and null edges are walk-inert
    merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.w;
  }
  LaplacianView lap;
  lap.n = n;
  lap.degree.assign(n, 0.0);
  lap.edges.reserve(merged.size());
  for (const auto& [key, w] : merged) {
    lap.edges.push_back({key.first, key.second, w});
    lap.degree[key.first] += w;
    lap.degree[key.second] += w;
  }
  lap.max_degree = lap.degree.empty() ? 0.0 : *std::max_element(lap.degree.begin(), lap.degree.end());
  return lap;
}

LaplacianView LaplacianView::from_graph(const PhaseGraph& graph) {
  std::vector<WEdge> edges;
  edges.reserve(graph.edges.size());
  for (const auto& [u, v] : graph.edges) edges.push_back({u, v, 1.0});
  return from_weighted_edges(graph.n, std::move(edges));
}

std::vector<double> LaplacianView::apply(const std::vector<double>& v) const {
  if (static_cast<int>(v.size()) != n) throw std::invalid_argument("vector length mismatch");
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) out[i] = degree[i] * v[i];
  for (const auto& e : edges) {
    out[e.u] -= e.w * v[e.v];
    out[e.v] -= e.w * v[e.u];
  }
  return out;
}

bool LaplacianView::connected() const {
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : adj[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == n;
}

MassVector make_point_mass(int n, int node) {
  if (node < 0 || node >= n) throw std::invalid_argument("point mass node out of range");
  MassVector pi;
  pi.values.assign(n, 0.0);
  pi.values[node] = 1.0;
  return pi;
}

MassVector make_uniform_mass(int n, const std::vector<int>& support) {
  if (support.empty()) throw std::invalid_argument("uniform mass needs nonempty support");
  MassVector pi;
  pi.values.assign(n, 0.0);
  const double w = 1.0 / static_cast<double>(support.size());
  for (int v : support) {
    if (v < 0 || v >= n) throw std::invalid_argument("support node out of range");
    if (pi.values[v] != 0.0) throw std::invalid_argument("support node repeated");
    pi.values[v] = w;
  }
  return pi;
}

void validate_mass(const MassVector& pi) {
  double total = 0.0;
  for (double x : pi.values) {
    if (x < -1e-12) throw std::invalid_argument("mass entry is negative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("mass does not sum to 1");
}

std::vector<int> sorted_desc_order(const std::vector<double>& values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  return order;
}

std::vector<double> sorted_prefix_sums(const std::vector<double>& values) {
  const std::vector<int> order = sorted_desc_order(values);
  std::vector<double> prefix(values.size() + 1, 0.0);
  for (std::size_t s = 0; s < order.size(); ++s) {
    prefix[s + 1] = prefix[s] + values[order[s]];
  }
  return prefix;
}

GapResult spectral_gap(const LaplacianView& lap, int budget) {
  if (lap.n > budget) {
    throw std::invalid_argument("dense eigensolve refused beyond budget of " +
                                std::to_string(budget) + " nodes");
  }
  GapResult result;
  result.connected = lap.connected();
  if (!result.connected) {
    result.lambda2 = 0.0;
    return result;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_laplacian(lap),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");
  result.lambda2 = solver.eigenvalues()(1);
  return result;
}

double lambda_star(double phi_ratio_k, double max_degree) {
  if (max_degree <= 0) throw std::invalid_argument("max degree must be positive");
  if (phi_ratio_k < 0) throw std::invalid_argument("phi must be nonnegative");
  return phi_ratio_k * phi_ratio_k / (2.0 * max_degree);
}

namespace {

// Smallest M with P(Poisson(lam) > M) <= tol, accumulated in log space.
int poisson_truncation_terms(double lam, double tol) {
  if (lam <= 0) return 0;
  const double log_lam = std::log(lam);
  double cumulative = 0.0;
  int m = 0;
  const int hard_cap = static_cast<int>(lam + 12.0 * std::sqrt(lam) + 64.0);
  for (; m <= hard_cap; ++m) {
    cumulative += std::exp(-lam + m * log_lam - std::lgamma(m + 1.0));
    if (cumulative >= 1.0 - tol) return m;
  }
  return hard_cap;
}

}  // namespace

MassVector heat_kernel(const LaplacianView& lap, const MassVector& pi0, double t,
                       double truncation_tol) {
  if (static_cast<int>(pi0.values.size()) != lap.n) {
    throw std::invalid_argument("mass vector length mismatch");
  }
  if (t < 0) throw std::invalid_argument("heat kernel time must be nonnegative");
  MassVector out;
  out.time = pi0.time + t;
  if (t == 0.0 || lap.max_degree == 0.0) {
    out.values = pi0.values;
    return out;
  }

  const double rate = lap.max_degree;  // uniformization rate
  const double lam = rate * t;
  const int terms = poisson_truncation_terms(lam, truncation_tol);
  const double log_lam = std::log(lam);

  std::vector<double> v = pi0.values;          // P^m pi0
  std::vector<double> acc(lap.n, 0.0);
  std::vector<double> next(lap.n, 0.0);
  for (int m = 0; m <= terms; ++m) {
    if (m > 0) {
      // next = (I - L/rate) v, applied sparsely
      for (int i = 0; i < lap.n; ++i) next[i] = (1.0 - lap.degree[i] / rate) * v[i];
      for (const auto& e : lap.edges) {
        next[e.u] += e.w / rate * v[e.v];
        next[e.v] += e.w / rate * v[e.u];
      }
      std::swap(v, next);
    }
    const double weight = std::exp(-lam + m * log_lam - std::lgamma(m + 1.0));
    for (int i = 0; i < lap.n; ++i) acc[i] += weight * v[i];
  }
  out.values = std::move(acc);
  return out;
}

SpreadReport check_partial_spread(const LaplacianView& lap, int k, double phi_ratio_k,
                                  const MassVector& pi0, const std::vector<double>& t_grid,
                                  double tolerance) {
  if (k < 1 || k >= lap.n) throw std::invalid_argument("spread check requires 1 <= k < n");
  validate_mass(pi0);
  const double rate = lambda_star(phi_ratio_k, lap.max_degree);
  const double excess = std::sqrt(static_cast<double>(k + 1));

  SpreadReport report;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    const MassVector pi = heat_kernel(lap, pi0, t);
    const std::vector<double> prefix = sorted_prefix_sums(pi.values);
    for (int s = 1; s <= k; ++s) {
      const double lhs = prefix[s];
      const double rhs = static_cast<double>(s) / (k + 1) + excess * std::exp(-rate * t);
      const double slack = rhs - lhs;
      report.min_slack = std::min(report.min_slack, slack);
      ++report.checks;
      if (slack < -tolerance) report.violations.push_back({t, s, lhs, rhs});
    }
  }
  return report;
}

CollapsedGraph collapse(const LaplacianView& lap, const std::vector<int>& order, int k) {
  if (static_cast<int>(order.size()) != lap.n) {
    throw std::invalid_argument("collapse order must be a permutation of the nodes");
  }
  if (k < 1 || k >= lap.n) throw std::invalid_argument("collapse requires 1 <= k < n");
  std::vector<int> position(lap.n, -1);
  for (int u = 0; u < lap.n; ++u) {
    const int node = order[u];
    if (node < 0 || node >= lap.n || position[node] != -1) {
      throw std::invalid_argument("collapse order must be a permutation of the nodes");
    }
    position[node] = u;
  }

  std::vector<LaplacianView::WEdge> edges;
  for (const auto& e : lap.edges) {
    const int pu = std::min(position[e.u], k);
    const int pv = std::min(position[e.v], k);
    if (pu == k && pv == k) continue;  // internal to the supernode: dropped
    edges.push_back({pu, pv, e.w});
  }
  CollapsedGraph cg;
  cg.lap = LaplacianView::from_weighted_edges(k + 1, std::move(edges));
  cg.order = order;
  cg.k = k;
  return cg;
}

CollapseCheck check_collapsed_gap(const LaplacianView& lap, const std::vector<int>& order, int k,
                                  double phi_ratio_k, double tolerance) {
  const CollapsedGraph cg = collapse(lap, order, k);
  CollapseCheck check;
  check.lambda2 = spectral_gap(cg.lap).lambda2;
  check.lambda_star = lambda_star(phi_ratio_k, lap.max_degree);  // base-graph degree
  check.ok = check.lambda2 >= check.lambda_star - tolerance;
  return check;
}

DerivativeBound sorted_mass_derivative_bound(const LaplacianView& lap, const MassVector& pi,
                                             int m, double gamma, double d) {
  if (m < 1 || m >= lap.n) throw std::invalid_argument("cut position m must satisfy 1 <= m < n");
  if (!(gamma > 0.0) || !(d >= 0.0)) throw std::invalid_argument("invalid gamma or d");
  validate_mass(pi);

  const std::vector<int> order = sorted_desc_order(pi.values);
  std::vector<char> in_top(lap.n, 0);
  for (int s = 0; s < m; ++s) in_top[order[s]] = 1;

  DerivativeBound out;
  for (const auto& e : lap.edges) {
    if (in_top[e.u] == in_top[e.v]) continue;
    const double inside = in_top[e.u] ? pi.values[e.u] : pi.values[e.v];
    const double outside = in_top[e.u] ? pi.values[e.v] : pi.values[e.u];
    out.lhs += e.w * (outside - inside);
  }

  int d_m = static_cast<int>(std::floor(std::min(gamma * m, d) / 4.0 + 1e-12));
  d_m = std::min({d_m, m, lap.n - m});
  out.d_m = d_m;
  double top_window = 0.0;
  double bottom_window = 0.0;
  for (int j = 0; j < d_m; ++j) {
    top_window += pi.values[order[m - 1 - j]];
    bottom_window += pi.values[order[m + j]];
  }
  out.rhs = -4.0 * (top_window - bottom_window);
  return out;
}

NuResult aux_nu_process(int n, int k, double gamma, double d, double t) {
  if (n < 1 || k < 1 || k > n) throw std::invalid_argument("aux process requires 1 <= k <= n");
  if (!(gamma > 0.0)) throw std::invalid_argument("aux process requires gamma > 0");
  if (!(d >= 0.0) || t < 0) throw std::invalid_argument("invalid d or t");

  NuResult result;
  result.dprime = static_cast<int>(std::floor(d / 4.0 + 1e-12));
  const double kappa = 4.0 / gamma;
  result.interval_lo = k - (2.0 / 3.0) * kappa * d;
  result.interval_hi = k + (2.0 / 3.0) * kappa * d;
  // Positions are 1-based in the interval arithmetic; clip to the line.
  const auto in_interval = [&](int pos) {
    return pos >= 1 && pos <= n && pos >= result.interval_lo - 1e-12 &&
           pos <= result.interval_hi + 1e-12;
  };

  std::vector<int> support(k);
  std::iota(support.begin(), support.end(), 0);  // positions 1..k, 0-based storage
  MassVector nu0 = make_uniform_mass(n, support);

  if (result.dprime == 0) {
    result.frozen = true;
    result.nu = std::move(nu0);
    result.nu.time = t;
    return result;
  }

  std::vector<LaplacianView::WEdge> edges;
  for (int pos = 1; pos + result.dprime <= n; ++pos) {
    if (in_interval(pos) && in_interval(pos + result.dprime)) {
      edges.push_back({pos - 1, pos - 1 + result.dprime, 4.0});
    }
  }
  const LaplacianView lattice = LaplacianView::from_weighted_edges(n, std::move(edges));
  result.frozen = lattice.edges.empty();
  result.nu = heat_kernel(lattice, nu0, t);
  return result;
}

double chernoff_tail(double mu, double r) {
  if (!(mu > 0.0)) throw std::invalid_argument("chernoff bound requires mu > 0");
  if (r < 0.0 || r >= 1.0) {
    throw std::invalid_argument("lower-tail chernoff bound requires 0 <= r < 1");
  }
  return std::exp(-mu * poisson_h(r));
}

double certified_gamma_floor(double lambda2) {
  if (lambda2 < 0) throw std::invalid_argument("lambda2 must be nonnegative");
  return lambda2 / 2.0;
}

DominanceReport check_collapsed_walk_dominance(const LaplacianView& lap, int k,
                                               const MassVector& pi0, double t_end,
                                               double tolerance) {
  if (k < 1 || k >= lap.n) throw std::invalid_argument("dominance check requires 1 <= k < n");
  validate_mass(pi0);
  if (lap.max_degree == 0.0) throw std::invalid_argument("graph has no edges");

  const double h = 1e-3 / lap.max_degree;
  const int steps = std::max(1, static_cast<int>(std::ceil(t_end / h)));
  const double step = t_end / steps;

  MassVector pi = pi0;
  // nu starts as the collapse of the sorted initial mass: entry i holds the
  // (i+1)-th largest initial value, the supernode holds the rest.
  std::vector<int> order = sorted_desc_order(pi.values);
  MassVector nu;
  nu.values.assign(k + 1, 0.0);
  for (int i = 0; i < lap.n; ++i) {
    nu.values[std::min(i, k)] += pi.values[order[i]];
  }

  DominanceReport report;
  report.max_excess = -std::numeric_limits<double>::infinity();
  report.steps = steps;
  for (int s = 0; s <= steps; ++s) {
    order = sorted_desc_order(pi.values);
    for (int i = 0; i < lap.n; ++i) {
      const double excess = pi.values[order[i]] - nu.values[std::min(i, k)];
      report.max_excess = std::max(report.max_excess, excess);
    }
    if (s == steps) break;
    const CollapsedGraph cg = collapse(lap, order, k);
    pi = heat_kernel(lap, pi, step);
    nu = heat_kernel(cg.lap, nu, step);
  }
  report.ok = report.max_excess <= tolerance;
  return report;
}

}  // namespace rewire
