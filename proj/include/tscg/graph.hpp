#pragma once

#include "tscg/types.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tscg {

/// Directed edge from -> to, tagged with which coefficient matrices carry it.
struct DirectedEdge {
  Index from = 0;  // parent node (0-based)
  Index to = 0;    // child node
  bool in_A = false;
  bool in_B = false;

  friend bool operator<(const DirectedEdge& a, const DirectedEdge& b) {
    return std::pair(a.from, a.to) < std::pair(b.from, b.to);
  }
  friend bool operator==(const DirectedEdge& a, const DirectedEdge& b) {
    return a.from == b.from && a.to == b.to && a.in_A == b.in_A && a.in_B == b.in_B;
  }
};

/// Mixed graph: undirected edges within chain components, directed edges
/// across components, components = connected components of the undirected
/// edge set, plus an optional causal ordering of the components.
struct ChainGraph {
  Index p = 0;
  std::set<std::pair<Index, Index>> undirected;      // k < l, 0-based
  std::vector<DirectedEdge> directed;                // sorted by (from, to)
  std::vector<std::vector<Index>> components;        // each sorted; list ordered by smallest member
  std::optional<std::vector<int>> ordering;          // permutation of component indices

  int component_of(Index node) const;
  bool has_directed(Index from, Index to) const;
};

/// Checks the ChainGraph structural invariants (edge ranges, component
/// partition consistency, single edge per pair, ordering validity).
/// Returns a list of violations; empty means valid.
std::vector<std::string> validate_chain_graph(const ChainGraph& g);

struct CoefficientPair {
  Mat A;
  Mat B;
};

/// Connected components of [p] under the undirected edge set, each sorted,
/// listed in increasing order of their smallest member.
std::vector<std::vector<Index>> components_from_undirected(
    Index p, const std::set<std::pair<Index, Index>>& undirected);

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::string> violations;
};

/// TSCG feasibility: some ordering of the chain components makes A and B
/// block lower triangular with zero diagonal blocks, i.e. every nonzero of
/// A/B runs between two distinct components and the induced component
/// digraph is acyclic (consistent with graph.ordering when present).
FeasibilityReport is_feasible(const ChainGraph& graph, const CoefficientPair& coeffs);

struct EdgeMetrics {
  double recall = 0.0;
  double precision = 0.0;
  double mcc = 0.0;
  long tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Confusion counts of an estimated edge set against the truth over a
/// universe of the stated size; empty-denominator rates are reported as 0.
template <typename T>
EdgeMetrics edge_metrics(const std::set<T>& estimated, const std::set<T>& truth,
                         long universe_size);

/// Structural Hamming distance over unordered node pairs: +1 when exactly
/// one graph has an edge on the pair, +1 when both do but the kind
/// (undirected vs directed) or the direction differs.
long shd(const ChainGraph& estimated, const ChainGraph& truth);

}  // namespace tscg
