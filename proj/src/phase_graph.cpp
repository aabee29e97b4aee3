#include "rewire/phase_graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace rewire {

namespace {

void build_incidence(PhaseGraph& g) {
  g.incident.assign(g.n, {});
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    auto [u, v] = g.edges[e];
    if (u < 0 || u >= g.n || v < 0 || v >= g.n) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    g.incident[u].push_back({e, v});
    g.incident[v].push_back({e, u});  // self-loops land twice, degree += 2
  }
}

void require_proper_subset(int n, int size) {
  if (size <= 0) throw std::invalid_argument("subset must be nonempty");
  if (size >= n) throw std::invalid_argument("subset must be a proper subset");
}

}  // namespace

PhaseGraph PhaseGraph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 1) throw std::invalid_argument("graph needs at least one node");
  PhaseGraph g;
  g.n = n;
  g.edges = std::move(edges);
  g.cycle_edge_count = 0;
  build_incidence(g);
  return g;
}

int PhaseGraph::max_degree() const {
  int d = 0;
  for (const auto& inc : incident) d = std::max(d, static_cast<int>(inc.size()));
  return d;
}

bool PhaseGraph::connected() const {
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const Slot& s : incident[v]) {
      if (!seen[s.other]) {
        seen[s.other] = 1;
        ++reached;
        stack.push_back(s.other);
      }
    }
  }
  return reached == n;
}

PhaseGraph build_phase_graph(const PointerConfig& config, Color fixed) {
  config.validate();
  PhaseGraph g;
  g.n = config.n;
  g.edges.reserve(2 * config.n);
  for (int i = 0; i < config.n; ++i) {
    g.edges.emplace_back(i, (i + 1) % config.n);
  }
  const std::vector<int>& p = config.perm(fixed);
  for (int i = 0; i < config.n; ++i) {
    g.edges.emplace_back(i, p[i]);
  }
  g.cycle_edge_count = config.n;
  build_incidence(g);
  return g;
}

std::uint64_t members_to_mask(int n, const std::vector<int>& members) {
  if (n > 64) throw std::invalid_argument("bitmask form limited to n <= 64");
  std::uint64_t mask = 0;
  for (int v : members) {
    if (v < 0 || v >= n) throw std::invalid_argument("subset member out of range");
    if (mask & (1ULL << v)) throw std::invalid_argument("subset member repeated");
    mask |= 1ULL << v;
  }
  return mask;
}

std::vector<int> mask_to_members(int n, std::uint64_t mask) {
  std::vector<int> members;
  for (int v = 0; v < n; ++v) {
    if (mask & (1ULL << v)) members.push_back(v);
  }
  return members;
}

int edge_boundary_mask(const PhaseGraph& graph, std::uint64_t mask) {
  const int size = __builtin_popcountll(mask);
  require_proper_subset(graph.n, size);
  int cut = 0;
  for (const auto& [u, v] : graph.edges) {
    const bool a = (mask >> u) & 1;
    const bool b = (mask >> v) & 1;
    cut += (a != b);  // self-loops have a == b and never count
  }
  return cut;
}

int edge_boundary(const PhaseGraph& graph, const std::vector<int>& members) {
  return edge_boundary_mask(graph, members_to_mask(graph.n, members));
}

int count_arcs_mask(int n, std::uint64_t mask) {
  const int size = __builtin_popcountll(mask);
  require_proper_subset(n, size);
  // Arc starts are members whose cycle predecessor is outside S.
  int arcs = 0;
  for (int v = 0; v < n; ++v) {
    const int prev = (v + n - 1) % n;
    if (((mask >> v) & 1) && !((mask >> prev) & 1)) ++arcs;
  }
  return arcs;
}

int count_arcs(int n, const std::vector<int>& members) {
  return count_arcs_mask(n, members_to_mask(n, members));
}

Cut cut_info(const PointerConfig& config, Color fixed, const std::vector<int>& members) {
  PhaseGraph g = build_phase_graph(config, fixed);
  const std::uint64_t mask = members_to_mask(g.n, members);
  const int size = __builtin_popcountll(mask);
  require_proper_subset(g.n, size);

  Cut cut;
  cut.members = members;
  std::sort(cut.members.begin(), cut.members.end());
  cut.arcs = count_arcs_mask(g.n, mask);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    auto [u, v] = g.edges[e];
    const bool crossing = (((mask >> u) & 1) != ((mask >> v) & 1));
    if (!crossing) continue;
    ++cut.boundary_total;
    if (e >= g.cycle_edge_count) ++cut.boundary_pointer;
  }
  return cut;
}

int outgoing_pointer_cut(const PointerConfig& config, Color color, const std::vector<int>& members) {
  config.validate();
  const std::uint64_t mask = members_to_mask(config.n, members);
  require_proper_subset(config.n, __builtin_popcountll(mask));
  const std::vector<int>& p = config.perm(color);
  int out = 0;
  for (int i = 0; i < config.n; ++i) {
    if (((mask >> i) & 1) && !((mask >> p[i]) & 1)) ++out;
  }
  return out;
}

}  // namespace rewire
