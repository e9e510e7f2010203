#include "tscg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>

namespace tscg {

int ChainGraph::component_of(Index node) const {
  for (size_t g = 0; g < components.size(); ++g)
    if (std::binary_search(components[g].begin(), components[g].end(), node))
      return static_cast<int>(g);
  return -1;
}

bool ChainGraph::has_directed(Index from, Index to) const {
  return std::any_of(directed.begin(), directed.end(), [&](const DirectedEdge& e) {
    return e.from == from && e.to == to;
  });
}

std::vector<std::vector<Index>> components_from_undirected(
    Index p, const std::set<std::pair<Index, Index>>& undirected) {
  std::vector<std::vector<Index>> adjacency(static_cast<size_t>(p));
  for (const auto& [k, l] : undirected) {
    if (k < 0 || l < 0 || k >= p || l >= p)
      throw invalid_input("undirected edge endpoint out of range");
    if (k == l) throw invalid_input("self loop in undirected edge set");
    adjacency[static_cast<size_t>(k)].push_back(l);
    adjacency[static_cast<size_t>(l)].push_back(k);
  }
  std::vector<bool> seen(static_cast<size_t>(p), false);
  std::vector<std::vector<Index>> components;
  for (Index start = 0; start < p; ++start) {
    if (seen[static_cast<size_t>(start)]) continue;
    std::vector<Index> comp;
    std::queue<Index> frontier;
    frontier.push(start);
    seen[static_cast<size_t>(start)] = true;
    while (!frontier.empty()) {
      const Index v = frontier.front();
      frontier.pop();
      comp.push_back(v);
      for (Index w : adjacency[static_cast<size_t>(v)]) {
        if (!seen[static_cast<size_t>(w)]) {
          seen[static_cast<size_t>(w)] = true;
          frontier.push(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  // BFS from increasing start nodes already yields smallest-member order.
  return components;
}

std::vector<std::string> validate_chain_graph(const ChainGraph& g) {
  std::vector<std::string> problems;
  auto node_name = [](Index v) { return std::to_string(v + 1); };

  for (const auto& [k, l] : g.undirected) {
    if (k < 0 || l < 0 || k >= g.p || l >= g.p || k >= l)
      problems.push_back("bad undirected edge (" + node_name(k) + "," + node_name(l) + ")");
  }
  for (const auto& e : g.directed) {
    if (e.from < 0 || e.to < 0 || e.from >= g.p || e.to >= g.p || e.from == e.to)
      problems.push_back("bad directed edge " + node_name(e.from) + "->" + node_name(e.to));
    if (!e.in_A && !e.in_B)
      problems.push_back("directed edge " + node_name(e.from) + "->" + node_name(e.to) +
                         " has no provenance");
    const auto key = std::minmax(e.from, e.to);
    if (g.undirected.count({key.first, key.second}))
      problems.push_back("pair (" + node_name(key.first) + "," + node_name(key.second) +
                         ") is both undirected and directed");
    if (g.has_directed(e.to, e.from))
      problems.push_back("pair (" + node_name(e.from) + "," + node_name(e.to) +
                         ") is directed both ways");
  }
  if (g.components != components_from_undirected(g.p, g.undirected))
    problems.push_back("components do not match the undirected edge set");
  if (g.ordering) {
    std::vector<int> sorted = *g.ordering;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(g.components.size());
    std::iota(expect.begin(), expect.end(), 0);
    if (sorted != expect) {
      problems.push_back("ordering is not a permutation of the components");
    } else {
      std::vector<int> position(g.components.size());
      for (size_t s = 0; s < g.ordering->size(); ++s)
        position[static_cast<size_t>((*g.ordering)[s])] = static_cast<int>(s);
      for (const auto& e : g.directed) {
        const int cf = g.component_of(e.from);
        const int ct = g.component_of(e.to);
        if (cf >= 0 && ct >= 0 &&
            position[static_cast<size_t>(cf)] >= position[static_cast<size_t>(ct)])
          problems.push_back("directed edge " + node_name(e.from) + "->" + node_name(e.to) +
                             " violates the causal ordering");
      }
    }
  }
  return problems;
}

namespace {

// Topological order of the component digraph; empty optional when cyclic.
std::optional<std::vector<int>> topo_order(int n, const std::set<std::pair<int, int>>& edges) {
  std::vector<int> indegree(static_cast<size_t>(n), 0);
  std::vector<std::vector<int>> out(static_cast<size_t>(n));
  for (const auto& [a, b] : edges) {
    out[static_cast<size_t>(a)].push_back(b);
    ++indegree[static_cast<size_t>(b)];
  }
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int v = 0; v < n; ++v)
    if (indegree[static_cast<size_t>(v)] == 0) ready.push(v);
  std::vector<int> order;
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int w : out[static_cast<size_t>(v)])
      if (--indegree[static_cast<size_t>(w)] == 0) ready.push(w);
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  return order;
}

}  // namespace

FeasibilityReport is_feasible(const ChainGraph& graph, const CoefficientPair& coeffs) {
  FeasibilityReport report;
  const Index p = graph.p;
  if (coeffs.A.rows() != p || coeffs.A.cols() != p || coeffs.B.rows() != p ||
      coeffs.B.cols() != p)
    throw invalid_input("coefficient matrices must be p x p");

  auto note = [&](const std::string& msg) {
    report.feasible = false;
    report.violations.push_back(msg);
  };

  std::vector<int> comp(static_cast<size_t>(p));
  for (Index v = 0; v < p; ++v) comp[static_cast<size_t>(v)] = graph.component_of(v);

  std::set<std::pair<int, int>> component_edges;
  for (Index k = 0; k < p; ++k) {
    for (Index l = 0; l < p; ++l) {
      const bool in_a = coeffs.A(k, l) != 0.0;
      const bool in_b = coeffs.B(k, l) != 0.0;
      if (!in_a && !in_b) continue;
      const std::string entry = "(" + std::to_string(k + 1) + "," + std::to_string(l + 1) + ")";
      if (k == l) {
        note((in_a ? std::string("A") : std::string("B")) + entry + " on the diagonal");
        continue;
      }
      const int ck = comp[static_cast<size_t>(k)];
      const int cl = comp[static_cast<size_t>(l)];
      if (ck == cl) {
        note(std::string(in_a ? "A" : "B") + entry +
             " lies inside a component's diagonal block");
        continue;
      }
      component_edges.insert({cl, ck});  // parent component -> child component
    }
  }

  const auto order = topo_order(static_cast<int>(graph.components.size()), component_edges);
  if (!order) note("component digraph has a cycle; no causal ordering exists");

  if (graph.ordering && order) {
    std::vector<int> position(graph.components.size());
    for (size_t s = 0; s < graph.ordering->size(); ++s)
      position[static_cast<size_t>((*graph.ordering)[s])] = static_cast<int>(s);
    for (const auto& [from_comp, to_comp] : component_edges) {
      if (position[static_cast<size_t>(from_comp)] >= position[static_cast<size_t>(to_comp)])
        note("coefficient block between components " + std::to_string(from_comp + 1) +
             " and " + std::to_string(to_comp + 1) + " violates the stated ordering");
    }
  }
  return report;
}

namespace {

EdgeMetrics metrics_from_counts(long tp, long fp, long fn, long tn) {
  EdgeMetrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.tn = tn;
  m.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  const double denom = static_cast<double>(tp + fp) * static_cast<double>(tp + fn) *
                       static_cast<double>(tn + fp) * static_cast<double>(tn + fn);
  m.mcc = denom > 0.0 ? (static_cast<double>(tp) * static_cast<double>(tn) -
                         static_cast<double>(fp) * static_cast<double>(fn)) /
                            std::sqrt(denom)
                      : 0.0;
  return m;
}

}  // namespace

template <typename T>
EdgeMetrics edge_metrics(const std::set<T>& estimated, const std::set<T>& truth,
                         long universe_size) {
  long tp = 0;
  for (const auto& e : estimated) tp += truth.count(e) ? 1 : 0;
  const long fp = static_cast<long>(estimated.size()) - tp;
  const long fn = static_cast<long>(truth.size()) - tp;
  const long tn = universe_size - tp - fp - fn;
  if (tn < 0 || static_cast<long>(estimated.size()) > universe_size ||
      static_cast<long>(truth.size()) > universe_size)
    throw invalid_input("edge sets exceed the stated universe");
  return metrics_from_counts(tp, fp, fn, tn);
}

template EdgeMetrics edge_metrics<std::pair<Index, Index>>(
    const std::set<std::pair<Index, Index>>&, const std::set<std::pair<Index, Index>>&, long);

namespace {

enum class PairKind { None, Undirected, DirLowHigh, DirHighLow };

// Edge kind on the unordered pair {k, l} with k < l.
PairKind pair_kind(const ChainGraph& g, Index k, Index l) {
  if (g.undirected.count({k, l})) return PairKind::Undirected;
  if (g.has_directed(k, l)) return PairKind::DirLowHigh;
  if (g.has_directed(l, k)) return PairKind::DirHighLow;
  return PairKind::None;
}

}  // namespace

long shd(const ChainGraph& estimated, const ChainGraph& truth) {
  if (estimated.p != truth.p) throw invalid_input("SHD requires graphs on the same nodes");
  long dist = 0;
  for (Index k = 0; k < truth.p; ++k) {
    for (Index l = k + 1; l < truth.p; ++l) {
      const PairKind a = pair_kind(estimated, k, l);
      const PairKind b = pair_kind(truth, k, l);
      if (a != b) ++dist;
    }
  }
  return dist;
}

}  // namespace tscg
