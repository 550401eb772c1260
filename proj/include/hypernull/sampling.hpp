#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypernull/errors.hpp"
#include "hypernull/hypergraph.hpp"
#include "hypernull/random.hpp"

namespace hypernull {

// STUB targets the stub-labeled model, VERTEX the vertex-labeled (uniform) model.
enum class Model { Stub, Vertex };

inline const char* to_string(Model m) { return m == Model::Stub ? "stub" : "vertex"; }

inline std::optional<Model> parse_model(const std::string& s) {
  if (s == "stub") return Model::Stub;
  if (s == "vertex") return Model::Vertex;
  return std::nullopt;
}

struct ChainConfig {
  Model model = Model::Vertex;
  std::uint64_t burn_in = 0;
  std::uint64_t interval = 1;
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Stub matching

// Shuffles the stub list and cuts it into runs of k_e. An attempt that puts
// two stubs of one node into the same edge is discarded as a whole.
inline Hypergraph stub_matching(const DegreeSequence& d, const DimensionSequence& k,
                                std::uint64_t max_attempts, std::uint64_t seed) {
  if (d.total() != k.total()) throw PreconditionError("stub matching: sum of degrees differs from sum of sizes");
  for (Count ke : k.k) {
    if (ke == 0) throw PreconditionError("stub matching: edge size 0");
    if (ke > d.size()) throw PreconditionError("stub matching: edge larger than node count");
  }

  std::vector<NodeId> stubs;
  stubs.reserve(d.total());
  for (std::size_t v = 0; v < d.size(); ++v) stubs.insert(stubs.end(), d.d[v], static_cast<NodeId>(v));

  Rng rng(seed);
  std::vector<Edge> edges(k.size());
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    rng.shuffle(std::span<NodeId>(stubs));
    bool degenerate = false;
    std::size_t cursor = 0;
    for (std::size_t e = 0; e < k.size() && !degenerate; ++e) {
      std::vector<NodeId> nodes(stubs.begin() + cursor, stubs.begin() + cursor + k.k[e]);
      cursor += k.k[e];
      edges[e] = Edge::from_unsorted(std::move(nodes));
      degenerate = edges[e].is_degenerate();
    }
    if (!degenerate) return Hypergraph(d.size(), std::move(edges));
  }
  throw AttemptsExhausted("stub matching: every one of " + std::to_string(max_attempts) +
                          " attempts produced a degenerate edge");
}

// ---------------------------------------------------------------------------
// Pairwise reshuffle

inline double binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0.0;
  r = std::min(r, n - r);
  double out = 1.0;
  for (std::uint64_t i = 1; i <= r; ++i) out = out * static_cast<double>(n - r + i) / static_cast<double>(i);
  return std::round(out);
}

// Probability of one particular stub-level reshuffle outcome for edges of
// sizes a and b sharing j nodes: 2^-j / C(a + b - 2j, a - j).
inline double q_mu(std::uint64_t size_a, std::uint64_t size_b, std::uint64_t j) {
  if (j > std::min(size_a, size_b)) throw std::domain_error("q_mu: intersection larger than an edge");
  return std::ldexp(1.0, -static_cast<int>(j)) / binomial(size_a + size_b - 2 * j, size_a - j);
}

// Number of distinct vertex-level outcomes of a reshuffle.
inline double reshuffle_outcome_count(std::uint64_t size_a, std::uint64_t size_b, std::uint64_t j) {
  return binomial(size_a + size_b - 2 * j, size_a - j);
}

struct ReshuffleOutcome {
  std::size_t first = 0;
  std::size_t second = 0;
  Edge old_first;
  Edge old_second;
  Edge new_first;
  Edge new_second;
  std::size_t intersection = 0;
  double acceptance = 1.0;
  bool accepted = false;

  bool changes_state() const { return new_first != old_first || new_second != old_second; }
};

// Keeps the intersection in both edges and splits the symmetric difference
// uniformly, |a| - j nodes to the first edge. Does not modify `h`.
inline ReshuffleOutcome propose_reshuffle(const Hypergraph& h, std::size_t i, std::size_t j, Rng& rng) {
  ReshuffleOutcome out;
  out.first = i;
  out.second = j;
  out.old_first = h.edge(i);
  out.old_second = h.edge(j);
  const auto& a = out.old_first.nodes;
  const auto& b = out.old_second.nodes;

  std::vector<NodeId> shared;
  std::vector<NodeId> pool;
  shared.reserve(std::min(a.size(), b.size()));
  pool.reserve(a.size() + b.size());
  std::size_t p = 0;
  std::size_t q = 0;
  while (p < a.size() || q < b.size()) {
    if (q == b.size() || (p < a.size() && a[p] < b[q])) {
      pool.push_back(a[p++]);
    } else if (p == a.size() || b[q] < a[p]) {
      pool.push_back(b[q++]);
    } else {
      shared.push_back(a[p]);
      ++p;
      ++q;
    }
  }
  out.intersection = shared.size();

  const std::size_t take = a.size() - shared.size();
  rng.partial_shuffle(std::span<NodeId>(pool), take);

  std::vector<NodeId> first(shared);
  first.insert(first.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
  std::vector<NodeId> second(std::move(shared));
  second.insert(second.end(), pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end());
  out.new_first = Edge::from_unsorted(std::move(first));
  out.new_second = Edge::from_unsorted(std::move(second));
  return out;
}

// Mutable sampler state: one hypergraph, one RNG stream, one step counter.
// The initial degree and dimension sequences are kept for conservation checks.
class ChainState {
 public:
  ChainState(Hypergraph h, std::uint64_t seed)
      : h_(std::move(h)), rng_(seed), degrees_(degree_sequence(h_)), dims_(dimension_sequence(h_)) {}

  const Hypergraph& hypergraph() const noexcept { return h_; }
  Rng& rng() noexcept { return rng_; }
  std::uint64_t steps() const noexcept { return steps_; }
  std::uint64_t accepted() const noexcept { return accepted_; }
  const DegreeSequence& initial_degrees() const noexcept { return degrees_; }
  const DimensionSequence& initial_dimensions() const noexcept { return dims_; }

  void apply(const ReshuffleOutcome& move) {
    if (!move.changes_state()) return;
    h_.replace_edge(move.first, move.new_first);
    h_.replace_edge(move.second, move.new_second);
  }

  void record_step(bool accepted) {
    ++steps_;
    if (accepted) ++accepted_;
  }

  bool conserved() const { return degree_sequence(h_) == degrees_ && dimension_sequence(h_) == dims_; }

  // Throws InvariantViolation if (d, k) drifted or the hypergraph fails validate().
  void check_invariants() const {
    if (!conserved()) throw InvariantViolation("chain state no longer has its initial degree/dimension sequences");
    auto violations = validate(h_);
    if (!violations.empty()) throw InvariantViolation("chain state invalid: " + violations.front().message);
  }

 private:
  Hypergraph h_;
  Rng rng_;
  DegreeSequence degrees_;
  DimensionSequence dims_;
  std::uint64_t steps_ = 0;
  std::uint64_t accepted_ = 0;
};

// Reshuffles edges i and j of the state and applies the result.
inline ReshuffleOutcome pairwise_reshuffle(ChainState& state, std::size_t i, std::size_t j) {
  if (i == j) throw PreconditionError("pairwise reshuffle needs two distinct edges");
  ReshuffleOutcome out = propose_reshuffle(state.hypergraph(), i, j, state.rng());
  out.accepted = true;
  state.apply(out);
  return out;
}

inline ReshuffleOutcome mcmc_step_stub(ChainState& state) {
  const auto m = state.hypergraph().num_edges();
  if (m < 2) throw PreconditionError("chain step needs at least two edges");
  auto [i, j] = state.rng().distinct_pair(m);
  ReshuffleOutcome out = pairwise_reshuffle(state, i, j);
  state.record_step(true);
  return out;
}

// Uniform vertex-level proposal accepted with probability 1/(m_a m_b), the
// multiplicities taken in the current hypergraph. Together with the uniform
// split this reproduces the 2^j / (m_a m_b) reweighting of the stub kernel.
inline ReshuffleOutcome mcmc_step_vertex(ChainState& state) {
  const auto& h = state.hypergraph();
  const auto m = h.num_edges();
  if (m < 2) throw PreconditionError("chain step needs at least two edges");
  auto [i, j] = state.rng().distinct_pair(m);
  ReshuffleOutcome out = propose_reshuffle(h, i, j, state.rng());
  const Count mult = h.multiplicity(out.old_first) * h.multiplicity(out.old_second);
  out.acceptance = 1.0 / static_cast<double>(mult);
  out.accepted = mult == 1 || state.rng().uniform01() < out.acceptance;
  if (out.accepted) state.apply(out);
  state.record_step(out.accepted);
  return out;
}

inline ReshuffleOutcome mcmc_step(ChainState& state, Model model) {
  return model == Model::Stub ? mcmc_step_stub(state) : mcmc_step_vertex(state);
}

// Aperiodicity is guaranteed when at least two edges have size >= 2 (stub
// chain). The vertex-labeled statement asks for two edges of size > 2.
inline bool stub_aperiodicity_condition(const DimensionSequence& k) {
  return std::count_if(k.k.begin(), k.k.end(), [](Count s) { return s >= 2; }) >= 2;
}

inline bool vertex_aperiodicity_condition(const DimensionSequence& k) {
  return std::count_if(k.k.begin(), k.k.end(), [](Count s) { return s > 2; }) >= 2;
}

inline std::optional<std::string> aperiodicity_warning(const DimensionSequence& k, Model model) {
  if (model == Model::Stub && !stub_aperiodicity_condition(k))
    return "fewer than two edges of size >= 2: the stub chain is not guaranteed to be aperiodic";
  if (model == Model::Vertex && !vertex_aperiodicity_condition(k))
    return "fewer than two edges of size > 2: the vertex chain's aperiodicity guarantee does not apply";
  return std::nullopt;
}

struct ChainStats {
  std::uint64_t steps = 0;
  std::uint64_t accepted = 0;
  std::uint64_t samples = 0;
  std::optional<std::string> warning;
};

inline void check_chain_config(const Hypergraph& h0, const ChainConfig& config) {
  if (h0.num_edges() < 2) throw PreconditionError("the chain needs at least two edges (m >= 2)");
  if (config.interval == 0) throw PreconditionError("sample interval must be >= 1");
  auto violations = validate(h0);
  if (!violations.empty()) throw PreconditionError("initial hypergraph invalid: " + violations.front().message);
}

// Runs burn_in steps, then emits one sample every `interval` steps until
// `samples` have been emitted. Rejected moves count as steps.
// on_sample(const Hypergraph&, std::size_t sample_index).
template <class OnSample>
ChainStats run_chain(const Hypergraph& h0, const ChainConfig& config, OnSample&& on_sample) {
  check_chain_config(h0, config);
  ChainStats stats;
  stats.warning = aperiodicity_warning(dimension_sequence(h0), config.model);

  ChainState state(h0, config.seed);
  for (std::uint64_t t = 0; t < config.burn_in; ++t) mcmc_step(state, config.model);
  for (std::uint64_t s = 0; s < config.samples; ++s) {
    for (std::uint64_t t = 0; t < config.interval; ++t) mcmc_step(state, config.model);
    state.check_invariants();
    on_sample(state.hypergraph(), static_cast<std::size_t>(s));
    ++stats.samples;
  }
  stats.steps = state.steps();
  stats.accepted = state.accepted();
  return stats;
}

inline std::vector<Hypergraph> sample_chain(const Hypergraph& h0, const ChainConfig& config) {
  std::vector<Hypergraph> out;
  out.reserve(config.samples);
  run_chain(h0, config, [&](const Hypergraph& h, std::size_t) { out.push_back(h); });
  return out;
}

// ---------------------------------------------------------------------------
// Bipartite edge-swap chain

// Swaps (u,e),(v,f) -> (u,f),(v,e), rejecting swaps that would repeat an
// incidence. Pushed through the inverse incidence map this samples the
// stub-labeled model, and serves as an independent check on mcmc_step_stub.
class BipartiteSwapState {
 public:
  BipartiteSwapState(BipartiteGraph b, std::uint64_t seed) : b_(std::move(b)), rng_(seed) {
    members_.resize(b_.num_right);
    for (const auto& l : b_.links) members_[l.edge].push_back(l.node);
    for (auto& m : members_) {
      std::sort(m.begin(), m.end());
      if (std::adjacent_find(m.begin(), m.end()) != m.end())
        throw PreconditionError("bipartite graph has a repeated incidence");
    }
  }

  const BipartiteGraph& graph() const noexcept { return b_; }
  std::uint64_t steps() const noexcept { return steps_; }
  std::uint64_t rejected() const noexcept { return rejected_; }

  // Returns true when the state changed.
  bool step() {
    ++steps_;
    if (b_.links.size() < 2) return false;
    auto [x, y] = rng_.distinct_pair(b_.links.size());
    Incidence& a = b_.links[x];
    Incidence& c = b_.links[y];
    if (a.edge == c.edge || a.node == c.node) return false;
    if (has(c.edge, a.node) || has(a.edge, c.node)) {
      ++rejected_;
      return false;
    }
    erase(a.edge, a.node);
    erase(c.edge, c.node);
    insert(a.edge, c.node);
    insert(c.edge, a.node);
    std::swap(a.edge, c.edge);
    return true;
  }

  Hypergraph hypergraph() const { return from_bipartite(b_); }

 private:
  bool has(std::size_t e, NodeId v) const { return std::binary_search(members_[e].begin(), members_[e].end(), v); }
  void erase(std::size_t e, NodeId v) {
    auto& m = members_[e];
    m.erase(std::lower_bound(m.begin(), m.end(), v));
  }
  void insert(std::size_t e, NodeId v) {
    auto& m = members_[e];
    m.insert(std::lower_bound(m.begin(), m.end(), v), v);
  }

  BipartiteGraph b_;
  Rng rng_;
  std::vector<std::vector<NodeId>> members_;
  std::uint64_t steps_ = 0;
  std::uint64_t rejected_ = 0;
};

// on_sample(const BipartiteGraph&, std::size_t sample_index). config.model is ignored.
template <class OnSample>
ChainStats bipartite_swap_chain(const BipartiteGraph& b, const ChainConfig& config, OnSample&& on_sample) {
  if (config.interval == 0) throw PreconditionError("sample interval must be >= 1");
  BipartiteSwapState state(b, config.seed);
  ChainStats stats;
  for (std::uint64_t t = 0; t < config.burn_in; ++t) state.step();
  for (std::uint64_t s = 0; s < config.samples; ++s) {
    for (std::uint64_t t = 0; t < config.interval; ++t) state.step();
    on_sample(state.graph(), static_cast<std::size_t>(s));
    ++stats.samples;
  }
  stats.steps = state.steps();
  stats.accepted = state.steps() - state.rejected();
  return stats;
}

}  // namespace hypernull
