#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hypernull {

using NodeId = std::uint32_t;
using Count = std::uint64_t;

// A hyperedge: node ids sorted ascending. Canonical form is the sorted list,
// so set equality is vector equality.
struct Edge {
  std::vector<NodeId> nodes;

  Edge() = default;
  explicit Edge(std::vector<NodeId> sorted_nodes) : nodes(std::move(sorted_nodes)) {}
  Edge(std::initializer_list<NodeId> list) : nodes(list) { std::sort(nodes.begin(), nodes.end()); }

  // Sorts the input; duplicates are kept (see is_degenerate()).
  static Edge from_unsorted(std::vector<NodeId> raw) {
    std::sort(raw.begin(), raw.end());
    return Edge(std::move(raw));
  }

  std::size_t size() const noexcept { return nodes.size(); }
  bool empty() const noexcept { return nodes.empty(); }
  auto begin() const noexcept { return nodes.begin(); }
  auto end() const noexcept { return nodes.end(); }
  NodeId operator[](std::size_t i) const { return nodes[i]; }

  bool contains(NodeId v) const { return std::binary_search(nodes.begin(), nodes.end(), v); }

  bool is_sorted_strict() const {
    return std::adjacent_find(nodes.begin(), nodes.end(), std::greater_equal<NodeId>{}) == nodes.end();
  }
  bool is_degenerate() const {
    return std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end();
  }

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge& a, const Edge& b) { return a.nodes <=> b.nodes; }
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ e.size();
    for (NodeId v : e.nodes) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }
};

// |a ∩ b| for sorted edges.
inline std::size_t intersection_size(const Edge& a, const Edge& b) {
  std::size_t count = 0;
  auto i = a.nodes.begin();
  auto j = b.nodes.begin();
  while (i != a.nodes.end() && j != b.nodes.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

using MultiplicityIndex = std::unordered_map<Edge, Count, EdgeHash>;

struct DegreeSequence {
  std::vector<Count> d;
  friend bool operator==(const DegreeSequence&, const DegreeSequence&) = default;
  std::size_t size() const noexcept { return d.size(); }
  Count total() const { return std::accumulate(d.begin(), d.end(), Count{0}); }
};

struct DimensionSequence {
  std::vector<Count> k;
  friend bool operator==(const DimensionSequence&, const DimensionSequence&) = default;
  std::size_t size() const noexcept { return k.size(); }
  Count total() const { return std::accumulate(k.begin(), k.end(), Count{0}); }
};

enum class ViolationKind {
  DegenerateEdge,
  UnsortedEdge,
  EmptyEdge,
  NodeOutOfRange,
  MultiplicityMismatch,
  HandshakeMismatch,
};

struct Violation {
  ViolationKind kind;
  std::size_t edge_index = 0;
  std::string message;
};

inline const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DegenerateEdge: return "degenerate-edge";
    case ViolationKind::UnsortedEdge: return "unsorted-edge";
    case ViolationKind::EmptyEdge: return "empty-edge";
    case ViolationKind::NodeOutOfRange: return "node-out-of-range";
    case ViolationKind::MultiplicityMismatch: return "multiplicity-mismatch";
    case ViolationKind::HandshakeMismatch: return "handshake-mismatch";
  }
  return "unknown";
}

// Node count plus a multiset of hyperedges. The edge order is storage only.
// The multiplicity index maps each distinct edge to the number of copies.
class Hypergraph {
 public:
  Hypergraph() = default;
  explicit Hypergraph(std::size_t n) : n_(n) {}
  Hypergraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) { rebuild_index(); }

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_[i]; }
  const MultiplicityIndex& multiplicity_index() const noexcept { return index_; }

  Count multiplicity(const Edge& e) const {
    auto it = index_.find(e);
    return it == index_.end() ? 0 : it->second;
  }

  void add_edge(Edge e) {
    ++index_[e];
    edges_.push_back(std::move(e));
  }

  // Replaces edge i and updates the index incrementally.
  void replace_edge(std::size_t i, Edge e) {
    unindex(edges_[i]);
    ++index_[e];
    edges_[i] = std::move(e);
  }

  void rebuild_index() {
    index_.clear();
    index_.reserve(edges_.size());
    for (const auto& e : edges_) ++index_[e];
  }

  // Test hook for corrupting the index; never used by library code.
  MultiplicityIndex& mutable_index_for_testing() { return index_; }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  void unindex(const Edge& e) {
    auto it = index_.find(e);
    if (it == index_.end()) return;
    if (--it->second == 0) index_.erase(it);
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  MultiplicityIndex index_;
};

inline DegreeSequence degree_sequence(const Hypergraph& h) {
  DegreeSequence out{std::vector<Count>(h.num_nodes(), 0)};
  for (const auto& e : h.edges())
    for (NodeId v : e) ++out.d[v];
  return out;
}

inline DimensionSequence dimension_sequence(const Hypergraph& h) {
  DimensionSequence out;
  out.k.reserve(h.num_edges());
  for (const auto& e : h.edges()) out.k.push_back(e.size());
  return out;
}

inline Count multiplicity(const Hypergraph& h, const Edge& e) { return h.multiplicity(e); }

// Edge multiset in sorted order; equal for hypergraphs that differ only by edge order.
inline std::vector<Edge> canonical_edges(const Hypergraph& h) {
  std::vector<Edge> out = h.edges();
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Violation> validate(const Hypergraph& h) {
  std::vector<Violation> out;
  Count dim_total = 0;
  for (std::size_t i = 0; i < h.num_edges(); ++i) {
    const Edge& e = h.edge(i);
    dim_total += e.size();
    if (e.empty()) out.push_back({ViolationKind::EmptyEdge, i, "edge " + std::to_string(i) + " is empty"});
    if (e.is_degenerate()) {
      out.push_back({ViolationKind::DegenerateEdge, i, "edge " + std::to_string(i) + " repeats a node"});
    } else if (!e.is_sorted_strict()) {
      out.push_back({ViolationKind::UnsortedEdge, i, "edge " + std::to_string(i) + " is not sorted"});
    }
    for (NodeId v : e) {
      if (v >= h.num_nodes()) {
        out.push_back({ViolationKind::NodeOutOfRange, i,
                       "edge " + std::to_string(i) + " has node " + std::to_string(v) + " >= n"});
        break;
      }
    }
  }

  MultiplicityIndex recount;
  for (const auto& e : h.edges()) ++recount[e];
  if (recount != h.multiplicity_index()) {
    out.push_back({ViolationKind::MultiplicityMismatch, 0, "multiplicity index disagrees with a recount"});
  }

  Count deg_total = 0;
  for (const auto& e : h.edges())
    for (NodeId v : e)
      if (v < h.num_nodes()) ++deg_total;
  if (deg_total != dim_total) {
    out.push_back({ViolationKind::HandshakeMismatch, 0, "sum of degrees differs from sum of edge sizes"});
  }
  return out;
}

inline bool is_valid(const Hypergraph& h) { return validate(h).empty(); }

// Necessary conditions only: sum(d) = sum(k), k_e <= n, d_v <= m, k_e >= 1.
inline bool is_configurable(const DegreeSequence& d, const DimensionSequence& k) {
  if (d.total() != k.total()) return false;
  for (Count ke : k.k)
    if (ke == 0 || ke > d.size()) return false;
  for (Count dv : d.d)
    if (dv > k.size()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Dyadic projection

enum class ProjectionMode { Simple, Multi };

struct NodePair {
  NodeId u;
  NodeId v;
  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

struct ProjectedGraph {
  std::size_t n = 0;
  ProjectionMode mode = ProjectionMode::Simple;
  // Sorted neighbour lists; in Multi mode a neighbour appears once and the
  // pair multiplicity lives in `multiplicity`, aligned with `neighbors`.
  std::vector<std::vector<NodeId>> neighbors;
  std::vector<std::vector<Count>> multiplicity;

  std::size_t degree(NodeId v) const { return neighbors[v].size(); }

  bool adjacent(NodeId u, NodeId v) const {
    const auto& nb = neighbors[u];
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  Count pair_multiplicity(NodeId u, NodeId v) const {
    const auto& nb = neighbors[u];
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return 0;
    if (mode == ProjectionMode::Simple) return 1;
    return multiplicity[u][static_cast<std::size_t>(it - nb.begin())];
  }

  // Distinct unordered pairs.
  std::size_t num_pairs() const {
    std::size_t total = 0;
    for (const auto& nb : neighbors) total += nb.size();
    return total / 2;
  }

  // Pairs counted with multiplicity (equals num_pairs() in Simple mode).
  Count num_multi_pairs() const {
    if (mode == ProjectionMode::Simple) return num_pairs();
    Count total = 0;
    for (const auto& row : multiplicity)
      for (Count c : row) total += c;
    return total / 2;
  }
};

inline ProjectedGraph project(const Hypergraph& h, ProjectionMode mode) {
  const std::size_t n = h.num_nodes();
  std::vector<std::vector<NodeId>> raw(n);
  for (const auto& e : h.edges()) {
    for (std::size_t a = 0; a < e.size(); ++a) {
      for (std::size_t b = a + 1; b < e.size(); ++b) {
        raw[e[a]].push_back(e[b]);
        raw[e[b]].push_back(e[a]);
      }
    }
  }
  ProjectedGraph g;
  g.n = n;
  g.mode = mode;
  g.neighbors.resize(n);
  if (mode == ProjectionMode::Multi) g.multiplicity.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto& list = raw[v];
    std::sort(list.begin(), list.end());
    auto& nb = g.neighbors[v];
    for (std::size_t i = 0; i < list.size();) {
      std::size_t j = i;
      while (j < list.size() && list[j] == list[i]) ++j;
      nb.push_back(list[i]);
      if (mode == ProjectionMode::Multi) g.multiplicity[v].push_back(j - i);
      i = j;
    }
  }
  return g;
}

// The projection as a hypergraph of 2-edges: one edge per distinct pair
// (Simple) or one per unit of pair multiplicity (Multi).
inline Hypergraph to_dyadic_hypergraph(const ProjectedGraph& g) {
  Hypergraph out(g.n);
  for (NodeId u = 0; u < g.n; ++u) {
    const auto& nb = g.neighbors[u];
    for (std::size_t i = 0; i < nb.size(); ++i) {
      NodeId v = nb[i];
      if (v <= u) continue;
      Count copies = g.mode == ProjectionMode::Multi ? g.multiplicity[u][i] : 1;
      for (Count c = 0; c < copies; ++c) out.add_edge(Edge(std::vector<NodeId>{u, v}));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bipartite incidence view

struct Incidence {
  NodeId node;
  std::size_t edge;
  friend bool operator==(const Incidence&, const Incidence&) = default;
  friend auto operator<=>(const Incidence&, const Incidence&) = default;
};

struct BipartiteGraph {
  std::size_t num_left = 0;   // nodes of the hypergraph
  std::size_t num_right = 0;  // edges of the hypergraph
  std::vector<Incidence> links;

  std::vector<Count> left_degrees() const {
    std::vector<Count> out(num_left, 0);
    for (const auto& l : links) ++out[l.node];
    return out;
  }
  std::vector<Count> right_degrees() const {
    std::vector<Count> out(num_right, 0);
    for (const auto& l : links) ++out[l.edge];
    return out;
  }
};

inline BipartiteGraph to_bipartite(const Hypergraph& h) {
  BipartiteGraph b;
  b.num_left = h.num_nodes();
  b.num_right = h.num_edges();
  for (std::size_t i = 0; i < h.num_edges(); ++i)
    for (NodeId v : h.edge(i)) b.links.push_back({v, i});
  return b;
}

// Inverse of to_bipartite; right node i becomes edge i.
inline Hypergraph from_bipartite(const BipartiteGraph& b) {
  std::vector<std::vector<NodeId>> members(b.num_right);
  for (const auto& l : b.links) members[l.edge].push_back(l.node);
  std::vector<Edge> edges;
  edges.reserve(b.num_right);
  for (auto& m : members) edges.push_back(Edge::from_unsorted(std::move(m)));
  return Hypergraph(b.num_left, std::move(edges));
}

}  // namespace hypernull
