#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "hypernull/errors.hpp"
#include "hypernull/hypergraph.hpp"
#include "hypernull/sampling.hpp"

namespace hypernull {

// Exhaustive ground truth for tiny (d, k). Everything here is exponential
// and guarded by explicit limits.

struct SpaceEnumeration {
  DegreeSequence degrees;
  DimensionSequence dimensions;
  std::vector<Hypergraph> states;       // edges sorted lexicographically
  std::vector<Count> weights_stub;      // stub labelings per state
  std::map<std::vector<Edge>, std::size_t> index;

  std::size_t size() const noexcept { return states.size(); }

  // Index of h's state, or size() if h is not in the space.
  std::size_t find(const Hypergraph& h) const {
    auto it = index.find(canonical_edges(h));
    return it == index.end() ? states.size() : it->second;
  }

  // Stationary law of the chain for `model`: uniform (vertex) or
  // proportional to the stub-labeling count (stub).
  std::vector<double> target(Model model) const {
    std::vector<double> p(states.size(), 0.0);
    if (states.empty()) return p;
    if (model == Model::Vertex) {
      std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(states.size()));
      return p;
    }
    double total = 0.0;
    for (Count w : weights_stub) total += static_cast<double>(w);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<double>(weights_stub[i]) / total;
    return p;
  }
};

// Pi d_v! / Pi_c m_c!, the number of stub-labeled hypergraphs mapping to h.
// Throws LimitExceeded if Pi d_v! exceeds `limit`.
inline Count count_stub_labelings(const Hypergraph& h, Count limit = 1'000'000'000'000ULL) {
  Count numerator = 1;
  for (Count dv : degree_sequence(h).d) {
    for (Count f = 2; f <= dv; ++f) {
      if (numerator > limit / f) throw LimitExceeded("stub-labeling count: product of degree factorials too large");
      numerator *= f;
    }
  }
  Count denominator = 1;
  for (const auto& [edge, copies] : h.multiplicity_index())
    for (Count f = 2; f <= copies; ++f) denominator *= f;
  return numerator / denominator;
}

// Direct count: every assignment of each node's labeled stubs to its
// incident edges, collected as a set of distinct stub partitions.
inline Count count_stub_labelings_direct(const Hypergraph& h, Count limit = 1'000'000) {
  const auto d = degree_sequence(h);
  Count total = 1;
  for (Count dv : d.d) {
    for (Count f = 2; f <= dv; ++f) {
      total *= f;
      if (total > limit) throw LimitExceeded("direct stub-labeling count above limit");
    }
  }

  // slots[v] lists the edges containing v; perms[v] maps slot -> stub label.
  std::vector<std::vector<std::size_t>> slots(h.num_nodes());
  for (std::size_t e = 0; e < h.num_edges(); ++e)
    for (NodeId v : h.edge(e)) slots[v].push_back(e);
  std::vector<std::vector<std::uint32_t>> perms(h.num_nodes());
  for (std::size_t v = 0; v < h.num_nodes(); ++v) {
    perms[v].resize(slots[v].size());
    for (std::uint32_t i = 0; i < perms[v].size(); ++i) perms[v][i] = i;
  }

  using Stub = std::pair<NodeId, std::uint32_t>;
  using Block = std::vector<Stub>;
  std::set<std::vector<Block>> partitions;
  while (true) {
    std::vector<Block> blocks(h.num_edges());
    for (std::size_t v = 0; v < h.num_nodes(); ++v)
      for (std::size_t s = 0; s < slots[v].size(); ++s)
        blocks[slots[v][s]].emplace_back(static_cast<NodeId>(v), perms[v][s]);
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end());
    partitions.insert(std::move(blocks));

    std::size_t v = 0;
    while (v < h.num_nodes() && !std::next_permutation(perms[v].begin(), perms[v].end())) ++v;
    if (v == h.num_nodes()) break;
  }
  return partitions.size();
}

namespace detail {

struct SpaceSearch {
  std::size_t n;
  std::vector<Count> sizes;  // descending
  std::vector<Count> capacity;
  std::vector<Edge> current;
  SpaceEnumeration* out;
  std::size_t state_limit;

  void record() {
    std::vector<Edge> edges = current;
    std::sort(edges.begin(), edges.end());
    if (out->index.count(edges)) return;
    if (out->states.size() >= state_limit)
      throw LimitExceeded("space has more than " + std::to_string(state_limit) + " states");
    out->index.emplace(edges, out->states.size());
    out->states.emplace_back(n, std::move(edges));
  }

  bool feasible(std::size_t next_edge) const {
    const Count remaining = sizes.size() - next_edge;
    for (Count c : capacity)
      if (c > remaining) return false;
    return true;
  }

  void fill(std::size_t e) {
    if (e == sizes.size()) {
      record();
      return;
    }
    const bool same_as_previous = e > 0 && sizes[e - 1] == sizes[e];
    std::vector<NodeId> chosen;
    choose(e, 0, chosen, same_as_previous);
  }

  void choose(std::size_t e, NodeId start, std::vector<NodeId>& chosen, bool bounded) {
    if (chosen.size() == sizes[e]) {
      Edge edge(chosen);
      if (bounded && edge < current[e - 1]) return;
      current.push_back(std::move(edge));
      if (feasible(e + 1)) fill(e + 1);
      current.pop_back();
      return;
    }
    for (NodeId v = start; v < n; ++v) {
      if (capacity[v] == 0) continue;
      if (n - v < sizes[e] - chosen.size()) break;
      --capacity[v];
      chosen.push_back(v);
      choose(e, v + 1, chosen, bounded);
      chosen.pop_back();
      ++capacity[v];
    }
  }
};

}  // namespace detail

// All hypergraphs with degree sequence d and dimension multiset k, each once.
// Edges within a run of equal sizes are generated in non-decreasing order,
// which removes multiset-order duplicates.
inline SpaceEnumeration enumerate_space(const DegreeSequence& d, const DimensionSequence& k,
                                        std::size_t state_limit = 100'000) {
  if (d.total() != k.total()) throw PreconditionError("enumerate_space: sum of degrees differs from sum of sizes");
  SpaceEnumeration out;
  out.degrees = d;
  out.dimensions = k;
  detail::SpaceSearch search{d.size(), k.k, d.d, {}, &out, state_limit};
  std::sort(search.sizes.begin(), search.sizes.end(), std::greater<>{});
  for (Count s : search.sizes)
    if (s == 0 || s > d.size()) return out;
  if (search.feasible(0)) search.fill(0);

  out.weights_stub.reserve(out.states.size());
  for (const auto& h : out.states) out.weights_stub.push_back(count_stub_labelings(h));
  return out;
}

struct ExactDistribution {
  std::vector<double> values;  // per state, aligned with SpaceEnumeration::states
  double mean_vertex = 0.0;
  double mean_stub = 0.0;
};

inline ExactDistribution exact_statistic_distribution(const SpaceEnumeration& space,
                                                      const std::function<double(const Hypergraph&)>& statistic) {
  ExactDistribution out;
  out.values.reserve(space.size());
  for (const auto& h : space.states) out.values.push_back(statistic(h));
  const auto pv = space.target(Model::Vertex);
  const auto ps = space.target(Model::Stub);
  for (std::size_t i = 0; i < space.size(); ++i) {
    out.mean_vertex += pv[i] * out.values[i];
    out.mean_stub += ps[i] * out.values[i];
  }
  return out;
}

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < std::max(p.size(), q.size()); ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    sum += std::abs(a - b);
  }
  return 0.5 * sum;
}

// Long-run state frequencies of the chain over `steps` steps (one visit
// recorded per step). States outside the space are an invariant violation.
inline std::vector<double> chain_state_frequencies(const SpaceEnumeration& space, const Hypergraph& start,
                                                   Model model, std::uint64_t steps, std::uint64_t seed) {
  std::vector<std::uint64_t> visits(space.size(), 0);
  ChainState state(start, seed);
  for (std::uint64_t t = 0; t < steps; ++t) {
    mcmc_step(state, model);
    const auto i = space.find(state.hypergraph());
    if (i == space.size()) throw InvariantViolation("chain left the enumerated space");
    ++visits[i];
  }
  std::vector<double> freq(space.size());
  for (std::size_t i = 0; i < freq.size(); ++i) freq[i] = static_cast<double>(visits[i]) / static_cast<double>(steps);
  return freq;
}

inline std::vector<double> bipartite_state_frequencies(const SpaceEnumeration& space, const Hypergraph& start,
                                                       std::uint64_t steps, std::uint64_t seed) {
  std::vector<std::uint64_t> visits(space.size(), 0);
  BipartiteSwapState state(to_bipartite(start), seed);
  for (std::uint64_t t = 0; t < steps; ++t) {
    state.step();
    const auto i = space.find(state.hypergraph());
    if (i == space.size()) throw InvariantViolation("swap chain left the enumerated space");
    ++visits[i];
  }
  std::vector<double> freq(space.size());
  for (std::size_t i = 0; i < freq.size(); ++i) freq[i] = static_cast<double>(visits[i]) / static_cast<double>(steps);
  return freq;
}

}  // namespace hypernull
