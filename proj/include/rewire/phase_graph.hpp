#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rewire/pointer_config.hpp"

namespace rewire {

// Undirected multigraph given as an explicit edge list plus an incidence
// index.  Self-loops and parallel edges are allowed and keep their
// multiplicity; a self-loop contributes 2 to its node's degree.
//
// A *phase graph* is the special case built from a pointer configuration:
// the n cycle edges (i, i+1 mod n) followed by the n pointer edges
// (i, p_i) of one color, all unoriented, 4-regular by construction.
struct PhaseGraph {
  struct Slot {
    int edge;   // edge index
    int other;  // opposite endpoint (== the node itself for a self-loop)
  };

  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<Slot>> incident;  // self-loops appear twice
  int cycle_edge_count = 0;                 // n for phase graphs, 0 for raw ones

  static PhaseGraph from_edges(int n, std::vector<std::pair<int, int>> edges);

  bool is_phase_graph() const { return cycle_edge_count > 0; }
  int degree(int v) const { return static_cast<int>(incident[v].size()); }
  int max_degree() const;
  bool connected() const;
};

// Cycle edges plus the unoriented pointer edges of `fixed`.
PhaseGraph build_phase_graph(const PointerConfig& config, Color fixed);

// Number of edges with exactly one endpoint in S, counting multiplicity.
// Self-loops never cross a cut.  S must be a proper nonempty subset.
int edge_boundary(const PhaseGraph& graph, const std::vector<int>& members);
int edge_boundary_mask(const PhaseGraph& graph, std::uint64_t mask);

// Number of maximal contiguous cycle arcs of S on the n-cycle.
int count_arcs(int n, const std::vector<int>& members);
int count_arcs_mask(int n, std::uint64_t mask);

// Cut summary for a phase graph.  boundary_total = boundary_pointer + 2*arcs.
struct Cut {
  std::vector<int> members;
  int boundary_total = 0;
  int boundary_pointer = 0;  // pointer edges crossing, either direction
  int arcs = 0;
};

Cut cut_info(const PointerConfig& config, Color fixed, const std::vector<int>& members);

// Pointers of `color` issued from inside S that land outside S.  This is the
// Σ_{i∈S} 1{p_i ∉ S} count used by the concentration checks; it never exceeds
// boundary_pointer.
int outgoing_pointer_cut(const PointerConfig& config, Color color, const std::vector<int>& members);

std::uint64_t members_to_mask(int n, const std::vector<int>& members);
std::vector<int> mask_to_members(int n, std::uint64_t mask);

}  // namespace rewire
