#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypernull/errors.hpp"
#include "hypernull/hypergraph.hpp"
#include "hypernull/random.hpp"
#include "hypernull/sampling.hpp"

namespace hypernull {

// ---------------------------------------------------------------------------
// Average local clustering on the projected graph

struct ClusteringReport {
  double c_bar = 0.0;
  std::vector<Count> triangles;  // T_v
  std::vector<Count> wedges;     // W_v = C(deg_v, 2)
};

// Uses distinct neighbours only, so a Multi projection gives the same value as
// its Simple counterpart. Nodes with fewer than two neighbours contribute 0 and
// still count in the denominator.
inline ClusteringReport avg_local_clustering(const ProjectedGraph& g) {
  const std::size_t n = g.n;
  ClusteringReport out;
  out.triangles.assign(n, 0);
  out.wedges.assign(n, 0);
  if (n == 0) return out;

  // Orient each pair from lower to higher (degree, id); every triangle is
  // then found exactly once from its lowest node.
  auto before = [&](NodeId a, NodeId b) {
    const auto da = g.degree(a);
    const auto db = g.degree(b);
    return da < db || (da == db && a < b);
  };
  std::vector<std::vector<NodeId>> out_nb(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : g.neighbors[u])
      if (before(u, v)) out_nb[u].push_back(v);

  std::vector<char> mark(n, 0);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : out_nb[u]) mark[v] = 1;
    for (NodeId v : out_nb[u]) {
      for (NodeId w : out_nb[v]) {
        if (!mark[w]) continue;
        ++out.triangles[u];
        ++out.triangles[v];
        ++out.triangles[w];
      }
    }
    for (NodeId v : out_nb[u]) mark[v] = 0;
  }

  double sum = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    const Count deg = g.degree(v);
    out.wedges[v] = deg * (deg - (deg > 0 ? 1 : 0)) / 2;
    if (out.wedges[v] > 0) sum += static_cast<double>(out.triangles[v]) / static_cast<double>(out.wedges[v]);
  }
  out.c_bar = sum / static_cast<double>(n);
  return out;
}

inline double avg_local_clustering(const Hypergraph& h) {
  return avg_local_clustering(project(h, ProjectionMode::Simple)).c_bar;
}

// ---------------------------------------------------------------------------
// Generalized Spearman degree-assortativity

enum class ChoiceKind { Uniform, Top2, TopBottom };

inline const char* to_string(ChoiceKind k) {
  switch (k) {
    case ChoiceKind::Uniform: return "uniform";
    case ChoiceKind::Top2: return "top2";
    case ChoiceKind::TopBottom: return "topbottom";
  }
  return "unknown";
}

inline std::optional<ChoiceKind> parse_choice(const std::string& s) {
  if (s == "uniform") return ChoiceKind::Uniform;
  if (s == "top2" || s == "top-2") return ChoiceKind::Top2;
  if (s == "topbottom" || s == "top-bottom") return ChoiceKind::TopBottom;
  return std::nullopt;
}

struct ChoiceFunction {
  ChoiceKind kind = ChoiceKind::Uniform;
  std::uint64_t tie_break_seed = 0;
};

// Two distinct nodes of `e` (size >= 2). Top2 takes the two largest degrees,
// TopBottom the largest and smallest; ties are broken uniformly via `rng`.
inline std::pair<NodeId, NodeId> choose_pair(const Edge& e, const std::vector<Count>& degrees, ChoiceKind kind,
                                             Rng& rng) {
  if (e.size() < 2) throw std::invalid_argument("choose_pair needs an edge of size >= 2");
  if (kind == ChoiceKind::Uniform) {
    auto [a, b] = rng.distinct_pair(e.size());
    return {e[a], e[b]};
  }
  std::vector<NodeId> order = e.nodes;
  rng.shuffle(std::span<NodeId>(order));
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return degrees[a] > degrees[b]; });
  if (kind == ChoiceKind::Top2) return {order[0], order[1]};
  return {order.front(), order.back()};
}

// 1-based ranks with ties given their average rank.
inline std::vector<double> average_ranks(const std::vector<Count>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = avg;
    i = j;
  }
  return ranks;
}

struct AssortativityResult {
  double rho = 0.0;
  ChoiceKind kind = ChoiceKind::Uniform;
  std::size_t repetitions = 1;
  std::vector<double> per_draw;  // one coefficient per repetition
  std::vector<double> ranks;
};

namespace detail {

// Pearson correlation of the symmetrized sample {(x_i, y_i), (y_i, x_i)}.
// Both columns then share mean and variance, so rho = cov / var.
inline double symmetric_correlation(const std::vector<std::pair<double, double>>& pairs) {
  double sum = 0.0;
  for (const auto& [x, y] : pairs) sum += x + y;
  const double mean = sum / (2.0 * static_cast<double>(pairs.size()));
  double cov = 0.0;
  double var = 0.0;
  for (const auto& [x, y] : pairs) {
    const double dx = x - mean;
    const double dy = y - mean;
    cov += 2.0 * dx * dy;
    var += dx * dx + dy * dy;
  }
  if (var <= 1e-12 * std::max(1.0, mean * mean)) throw DegenerateStatistic("assortativity: zero rank variance");
  return cov / var;
}

}  // namespace detail

inline AssortativityResult spearman_assortativity(const Hypergraph& h, const ChoiceFunction& choice,
                                                  std::size_t reps = 32, std::uint64_t seed = 0) {
  const auto degrees = degree_sequence(h).d;
  AssortativityResult out;
  out.kind = choice.kind;
  out.ranks = average_ranks(degrees);

  std::vector<const Edge*> polyadic;
  for (const auto& e : h.edges())
    if (e.size() >= 2) polyadic.push_back(&e);
  if (polyadic.size() < 2) throw DegenerateStatistic("assortativity: fewer than two edges of size >= 2");

  out.repetitions = choice.kind == ChoiceKind::Uniform ? std::max<std::size_t>(reps, 1) : 1;
  Rng rng(choice.kind == ChoiceKind::Uniform ? seed : choice.tie_break_seed);
  std::vector<std::pair<double, double>> pairs(polyadic.size());
  for (std::size_t r = 0; r < out.repetitions; ++r) {
    for (std::size_t i = 0; i < polyadic.size(); ++i) {
      auto [u, v] = choose_pair(*polyadic[i], degrees, choice.kind, rng);
      pairs[i] = {out.ranks[u], out.ranks[v]};
    }
    out.per_draw.push_back(detail::symmetric_correlation(pairs));
  }
  // Identical draws (e.g. all edges dyadic) must give that value exactly,
  // which a floating-point sum/divide does not guarantee.
  const bool all_equal = std::all_of(out.per_draw.begin(), out.per_draw.end(),
                                     [&](double x) { return x == out.per_draw.front(); });
  out.rho = all_equal ? out.per_draw.front()
                      : std::accumulate(out.per_draw.begin(), out.per_draw.end(), 0.0) /
                            static_cast<double>(out.per_draw.size());
  return out;
}

// Spearman coefficient of the unweighted projected graph, ranks taken from
// projected degrees.
inline double dyadic_spearman(const ProjectedGraph& g) {
  std::vector<Count> degrees(g.n);
  for (NodeId v = 0; v < g.n; ++v) degrees[v] = g.degree(v);
  const auto ranks = average_ranks(degrees);
  std::vector<std::pair<double, double>> pairs;
  for (NodeId u = 0; u < g.n; ++u)
    for (NodeId v : g.neighbors[u])
      if (u < v) pairs.emplace_back(ranks[u], ranks[v]);
  if (pairs.size() < 2) throw DegenerateStatistic("assortativity: fewer than two dyadic edges");
  return detail::symmetric_correlation(pairs);
}

// ---------------------------------------------------------------------------
// Intersection profiles

enum class ProfileKind { Conditional, Marginal };
enum class ProfileSource { Empirical, NullMonteCarlo, Analytic };

inline const char* to_string(ProfileSource s) {
  switch (s) {
    case ProfileSource::Empirical: return "EMPIRICAL";
    case ProfileSource::NullMonteCarlo: return "NULL_MC";
    case ProfileSource::Analytic: return "ANALYTIC";
  }
  return "unknown";
}

struct IntersectionProfile {
  ProfileKind kind = ProfileKind::Marginal;
  Count k = 0;  // conditional only
  Count l = 0;
  std::vector<double> probability;  // indexed by intersection size j
  std::vector<Count> counts;        // pair counts per j (empirical only)
  Count pairs = 0;                  // pairs averaged over (or sampled)
  ProfileSource source = ProfileSource::Empirical;

  double at(std::size_t j) const { return j < probability.size() ? probability[j] : 0.0; }

  double mean() const {
    double m = 0.0;
    for (std::size_t j = 0; j < probability.size(); ++j) m += static_cast<double>(j) * probability[j];
    return m;
  }
};

inline std::vector<std::vector<std::uint32_t>> incidence_lists(const Hypergraph& h) {
  std::vector<std::vector<std::uint32_t>> inc(h.num_nodes());
  for (std::size_t e = 0; e < h.num_edges(); ++e)
    for (NodeId v : h.edge(e)) inc[v].push_back(static_cast<std::uint32_t>(e));
  return inc;
}

namespace detail {

// Histogram of |a ∩ b| over pairs (a, b) with a in `left`, b accepted by
// `pairs_with(a_index, b_index)`, counting only nonzero intersections via the
// node -> edges index. Entry 0 is left for the caller.
template <class Accept>
std::vector<Count> nonzero_intersection_histogram(const Hypergraph& h, const std::vector<std::uint32_t>& left,
                                                  std::size_t max_j, Accept&& pairs_with) {
  const auto inc = incidence_lists(h);
  std::vector<std::uint32_t> counter(h.num_edges(), 0);
  std::vector<std::uint32_t> touched;
  std::vector<Count> hist(max_j + 1, 0);
  for (std::uint32_t a : left) {
    for (NodeId v : h.edge(a)) {
      for (std::uint32_t b : inc[v]) {
        if (!pairs_with(a, b)) continue;
        if (counter[b]++ == 0) touched.push_back(b);
      }
    }
    for (std::uint32_t b : touched) {
      ++hist[counter[b]];
      counter[b] = 0;
    }
    touched.clear();
  }
  return hist;
}

inline void normalize(IntersectionProfile& p) {
  p.probability.assign(p.counts.size(), 0.0);
  for (std::size_t j = 0; j < p.counts.size(); ++j)
    p.probability[j] = static_cast<double>(p.counts[j]) / static_cast<double>(p.pairs);
}

}  // namespace detail

// r_{kl}(j | H): distribution of |a ∩ b| over edges a of size k and b of size
// l (unordered distinct pairs when k == l).
inline IntersectionProfile conditional_profile(const Hypergraph& h, Count k, Count l) {
  if (k > l) std::swap(k, l);
  std::vector<std::uint32_t> of_k;
  Count num_l = 0;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    if (h.edge(e).size() == k) of_k.push_back(static_cast<std::uint32_t>(e));
    if (h.edge(e).size() == l) ++num_l;
  }
  const Count num_k = of_k.size();
  const Count pairs = k == l ? num_k * (num_k - (num_k > 0 ? 1 : 0)) / 2 : num_k * num_l;
  if (pairs == 0)
    throw NoPairs("no edge pairs of sizes (" + std::to_string(k) + ", " + std::to_string(l) + ")");

  IntersectionProfile p;
  p.kind = ProfileKind::Conditional;
  p.k = k;
  p.l = l;
  p.pairs = pairs;
  p.counts = detail::nonzero_intersection_histogram(h, of_k, k, [&](std::uint32_t a, std::uint32_t b) {
    return h.edge(b).size() == l && (k != l || b > a);
  });
  Count nonzero = 0;
  for (std::size_t j = 1; j < p.counts.size(); ++j) nonzero += p.counts[j];
  p.counts[0] = pairs - nonzero;
  detail::normalize(p);
  return p;
}

// Marginal profile r(j | H) over all unordered pairs of distinct edges.
// With `sampled_pairs` set, estimates from that many uniform random pairs.
inline IntersectionProfile marginal_profile(const Hypergraph& h, std::optional<Count> sampled_pairs = std::nullopt,
                                            std::uint64_t seed = 0) {
  const Count m = h.num_edges();
  if (m < 2) throw NoPairs("marginal profile needs at least two edges");
  std::size_t max_size = 0;
  for (const auto& e : h.edges()) max_size = std::max(max_size, e.size());

  IntersectionProfile p;
  p.kind = ProfileKind::Marginal;
  if (sampled_pairs) {
    Rng rng(seed);
    p.pairs = *sampled_pairs;
    p.counts.assign(max_size + 1, 0);
    for (Count s = 0; s < *sampled_pairs; ++s) {
      auto [a, b] = rng.distinct_pair(m);
      ++p.counts[intersection_size(h.edge(a), h.edge(b))];
    }
    if (p.pairs > 0) detail::normalize(p);
    return p;
  }

  std::vector<std::uint32_t> all(m);
  std::iota(all.begin(), all.end(), std::uint32_t{0});
  p.pairs = m * (m - 1) / 2;
  p.counts = detail::nonzero_intersection_histogram(h, all, max_size,
                                                    [](std::uint32_t a, std::uint32_t b) { return b > a; });
  Count nonzero = 0;
  for (std::size_t j = 1; j < p.counts.size(); ++j) nonzero += p.counts[j];
  p.counts[0] = p.pairs - nonzero;
  detail::normalize(p);
  return p;
}

// (1/n) (E[D^2] - E[D]) / E[D]^2 with plug-in moments of d.
inline double analytic_overlap_rate(const DegreeSequence& d) {
  if (d.size() == 0) throw std::domain_error("analytic profile needs n >= 1");
  double s1 = 0.0;
  double s2 = 0.0;
  for (Count v : d.d) {
    s1 += static_cast<double>(v);
    s2 += static_cast<double>(v) * static_cast<double>(v);
  }
  const double n = static_cast<double>(d.size());
  const double m1 = s1 / n;
  const double m2 = s2 / n;
  if (m1 == 0.0) return 0.0;
  return (m2 - m1) / (m1 * m1) / n;
}

namespace detail {
inline double analytic_term(double rate, Count k, Count l, Count j) {
  double factorial = 1.0;
  for (Count i = 2; i <= j; ++i) factorial *= static_cast<double>(i);
  return factorial * binomial(k, j) * binomial(l, j) * std::pow(rate, static_cast<double>(j));
}
}  // namespace detail

// Large-n approximation of the stub-model conditional profile for j >= 1:
// j! C(k,j) C(l,j) rate^j. The j = 0 entry is the complement of the rest.
inline double analytic_profile(const DegreeSequence& d, Count k, Count l, Count j) {
  if (j > std::min(k, l)) throw std::domain_error("analytic profile: j exceeds min(k, l)");
  const double rate = analytic_overlap_rate(d);
  if (j > 0) return detail::analytic_term(rate, k, l, j);
  double rest = 0.0;
  for (Count i = 1; i <= std::min(k, l); ++i) rest += detail::analytic_term(rate, k, l, i);
  return 1.0 - rest;
}

inline IntersectionProfile analytic_conditional_profile(const DegreeSequence& d, Count k, Count l) {
  IntersectionProfile p;
  p.kind = ProfileKind::Conditional;
  p.k = std::min(k, l);
  p.l = std::max(k, l);
  p.source = ProfileSource::Analytic;
  for (Count j = 0; j <= std::min(k, l); ++j) p.probability.push_back(analytic_profile(d, k, l, j));
  return p;
}

// Count of unordered distinct edge pairs per size pair (k <= l).
inline std::map<std::pair<Count, Count>, Count> size_pair_counts(const Hypergraph& h) {
  std::map<Count, Count> by_size;
  for (const auto& e : h.edges()) ++by_size[e.size()];
  std::map<std::pair<Count, Count>, Count> out;
  for (auto a = by_size.begin(); a != by_size.end(); ++a) {
    if (a->second >= 2) out[{a->first, a->first}] = a->second * (a->second - 1) / 2;
    for (auto b = std::next(a); b != by_size.end(); ++b) out[{a->first, b->first}] = a->second * b->second;
  }
  return out;
}

// Mixture of the analytic conditional profiles weighted by how often each
// size pair occurs among distinct edge pairs of h.
inline IntersectionProfile analytic_marginal_profile(const Hypergraph& h) {
  const auto d = degree_sequence(h);
  const auto weights = size_pair_counts(h);
  std::size_t max_size = 0;
  for (const auto& e : h.edges()) max_size = std::max(max_size, e.size());
  IntersectionProfile p;
  p.kind = ProfileKind::Marginal;
  p.source = ProfileSource::Analytic;
  p.probability.assign(max_size + 1, 0.0);
  Count total = 0;
  for (const auto& [sizes, count] : weights) total += count;
  p.pairs = total;
  if (total == 0) return p;
  for (const auto& [sizes, count] : weights) {
    const double w = static_cast<double>(count) / static_cast<double>(total);
    for (Count j = 0; j <= std::min(sizes.first, sizes.second); ++j)
      p.probability[j] += w * analytic_profile(d, sizes.first, sizes.second, j);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Mean intersection size per size pair

struct IntersectionCell {
  Count pairs = 0;
  Count total_intersection = 0;  // sum of |a ∩ b| over the pairs
  double mean() const { return pairs ? static_cast<double>(total_intersection) / static_cast<double>(pairs) : 0.0; }
};

// <J>_{kl} for every size pair present, keyed with k <= l. Sums over nodes:
// a node in c_k edges of size k and c_l of size l lies in c_k c_l such
// intersections (C(c_k, 2) when k == l).
inline std::map<std::pair<Count, Count>, IntersectionCell> mean_intersection_grid(const Hypergraph& h) {
  std::map<std::pair<Count, Count>, IntersectionCell> grid;
  for (const auto& [sizes, count] : size_pair_counts(h)) grid[sizes].pairs = count;

  std::vector<std::map<Count, Count>> per_node(h.num_nodes());
  for (const auto& e : h.edges())
    for (NodeId v : e) ++per_node[v][e.size()];
  for (const auto& hist : per_node) {
    for (auto a = hist.begin(); a != hist.end(); ++a) {
      if (a->second >= 2) grid[{a->first, a->first}].total_intersection += a->second * (a->second - 1) / 2;
      for (auto b = std::next(a); b != hist.end(); ++b)
        grid[{a->first, b->first}].total_intersection += a->second * b->second;
    }
  }
  return grid;
}

struct RatioCell {
  Count k = 0;
  Count l = 0;
  double observed = 0.0;
  std::optional<double> null_mean;  // unset: no null sample had a nonzero value
  std::optional<double> ratio;
  std::size_t null_samples = 0;
};

struct RatioGrid {
  std::vector<Count> sizes;
  std::vector<RatioCell> cells;  // k <= l, sorted

  const RatioCell* find(Count k, Count l) const {
    if (k > l) std::swap(k, l);
    for (const auto& c : cells)
      if (c.k == k && c.l == l) return &c;
    return nullptr;
  }
};

// Observed <J>_{kl} over its mean under the null chain. A null sample
// contributes to a cell only if it has pairs of those sizes.
inline RatioGrid null_ratio_grid(const Hypergraph& h, const ChainConfig& config) {
  RatioGrid out;
  const auto observed = mean_intersection_grid(h);
  std::map<std::pair<Count, Count>, std::pair<double, std::size_t>> null_sum;
  run_chain(h, config, [&](const Hypergraph& sample, std::size_t) {
    for (const auto& [key, cell] : mean_intersection_grid(sample)) {
      if (cell.pairs == 0) continue;
      auto& acc = null_sum[key];
      acc.first += cell.mean();
      ++acc.second;
    }
  });

  std::map<Count, bool> sizes;
  for (const auto& [key, cell] : observed) {
    sizes[key.first] = true;
    sizes[key.second] = true;
    RatioCell rc;
    rc.k = key.first;
    rc.l = key.second;
    rc.observed = cell.mean();
    auto it = null_sum.find(key);
    if (it != null_sum.end() && it->second.second > 0) {
      rc.null_samples = it->second.second;
      const double mean = it->second.first / static_cast<double>(it->second.second);
      if (mean > 0.0) {
        rc.null_mean = mean;
        rc.ratio = rc.observed / mean;
      }
    }
    out.cells.push_back(rc);
  }
  for (const auto& [s, unused] : sizes) out.sizes.push_back(s);
  return out;
}

}  // namespace hypernull
