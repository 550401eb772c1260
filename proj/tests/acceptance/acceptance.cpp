// Acceptance checks. One PASS/FAIL line per criterion; exit status is
// nonzero if any selected criterion fails.
//
//   acceptance [--criterion N]...
//
// Criteria 1, 4 and 6 need email-Enron in Benson format under
// $HYPERNULL_DATA_DIR/email-Enron/ (default: the configured data directory).

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hypernull/hypernull.hpp"

using namespace hypernull;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

std::string data_dir() {
  if (const char* env = std::getenv("HYPERNULL_DATA_DIR")) return env;
#ifdef HYPERNULL_DEFAULT_DATA_DIR
  return HYPERNULL_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

std::optional<Hypergraph> load_enron(std::string& why) {
  const fs::path prefix = fs::path(data_dir()) / "email-Enron" / "email-Enron";
  const auto paths = benson_paths(prefix.string());
  if (!fs::exists(paths.nverts) || !fs::exists(paths.simplices)) {
    why = "email-Enron not found at " + prefix.string() + "-{nverts,simplices,times}.txt (set HYPERNULL_DATA_DIR)";
    return std::nullopt;
  }
  return load_benson(prefix.string()).hypergraph;
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------------------

// email-Enron row of the clustering table: observed value and four null means.
Outcome criterion1() {
  std::string why;
  auto h = load_enron(why);
  if (!h) return {false, why};
  std::ostringstream out;
  bool pass = h->num_nodes() == 143 && h->num_edges() == 10886;
  out << "n=" << h->num_nodes() << " m=" << h->num_edges();
  const double observed = avg_local_clustering(*h);
  pass = pass && std::abs(observed - 0.658) <= 0.001;
  out << "; observed " << fmt(observed) << " (0.658 +/- 0.001)";

  struct Row {
    Model model;
    Space space;
    double mean;
    double sd;
  };
  const std::vector<Row> rows{{Model::Vertex, Space::Hypergraph, 0.825, 0.003},
                              {Model::Stub, Space::Hypergraph, 0.808, 0.004},
                              {Model::Vertex, Space::Projected, 0.638, 0.005},
                              {Model::Stub, Space::Projected, 0.797, 0.003}};
  NullConfig config;
  config.seed = 2019;
  config.chains = workers();
  for (const auto& row : rows) {
    const auto r = null_test(*h, clustering_statistic(), row.model, row.space, config);
    const bool ok = std::abs(r.null_mean - row.mean) <= 3 * row.sd;
    pass = pass && ok;
    out << "; " << to_string(row.model) << "-" << to_string(row.space) << " null " << fmt(r.null_mean) << " sd "
        << fmt(r.null_sd, 2) << " (target " << row.mean << " +/- " << fmt(3 * row.sd, 2) << (ok ? ")" : ", MISS)");
  }
  return {pass, out.str()};
}

// Exact stationarity on enumerable spaces.
Outcome criterion2() {
  struct Case {
    DegreeSequence d;
    DimensionSequence k;
  };
  const std::vector<Case> cases{{{{1, 1, 1, 1}}, {{2, 2}}},
                                {{{2, 2, 1, 1}}, {{2, 2, 2}}},
                                {{{2, 2, 2, 1, 1}}, {{3, 3, 2}}},
                                {{{2, 2, 1, 1, 1, 1}}, {{3, 2, 2, 1}}}};
  const std::uint64_t steps = 1'000'000;
  bool pass = true;
  bool has_parallel_state = false;
  std::ostringstream out;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto space = enumerate_space(cases[c].d, cases[c].k);
    for (const auto& s : space.states)
      for (const auto& [e, mult] : s.multiplicity_index()) has_parallel_state = has_parallel_state || mult > 1;
    out << (c ? "; " : "") << "space " << c + 1 << " (" << space.size() << " states):";
    for (Model model : {Model::Vertex, Model::Stub}) {
      const auto freq = chain_state_frequencies(space, space.states.front(), model, steps, derive_seed(7, c * 2 + (model == Model::Stub)));
      const double tv = total_variation(freq, space.target(model));
      pass = pass && tv < 0.02;
      out << " tv_" << to_string(model) << "=" << fmt(tv, 3);
    }
    const auto swap = bipartite_state_frequencies(space, space.states.front(), steps, derive_seed(8, c));
    out << " tv_swap=" << fmt(total_variation(swap, space.target(Model::Stub)), 3);
  }
  pass = pass && has_parallel_state && cases.size() >= 3;
  out << "; parallel-edge state present: " << (has_parallel_state ? "yes" : "no") << "; threshold 0.02";
  return {pass, out.str()};
}

// Reshuffle law: outcome frequencies and the closed form of q_mu.
Outcome criterion3() {
  bool pass = true;
  std::ostringstream out;
  struct Case {
    std::uint64_t k, l, j;
  };
  const std::uint64_t trials = 1'000'000;
  for (const auto& c : std::vector<Case>{{2, 2, 0}, {3, 2, 1}, {3, 3, 2}}) {
    // Edges share nodes 0..j-1; the rest are disjoint.
    std::vector<NodeId> a, b;
    NodeId next = 0;
    for (std::uint64_t i = 0; i < c.j; ++i) {
      a.push_back(next);
      b.push_back(next++);
    }
    while (a.size() < c.k) a.push_back(next++);
    while (b.size() < c.l) b.push_back(next++);
    const Hypergraph h(next, {Edge(a), Edge(b)});
    Rng rng(derive_seed(3, c.k * 100 + c.l * 10 + c.j));
    std::map<Edge, std::uint64_t> counts;
    for (std::uint64_t t = 0; t < trials; ++t) ++counts[propose_reshuffle(h, 0, 1, rng).new_first];

    const double outcomes = reshuffle_outcome_count(c.k, c.l, c.j);
    const double p = 1.0 / outcomes;
    const double mu = p * static_cast<double>(trials);
    const double sigma = std::sqrt(static_cast<double>(trials) * p * (1 - p));
    double worst = 0.0;
    for (const auto& [e, n] : counts) worst = std::max(worst, std::abs(static_cast<double>(n) - mu) / sigma);
    const bool ok = counts.size() == static_cast<std::size_t>(outcomes) && worst <= 4.0;
    pass = pass && ok;
    out << "(" << c.k << "," << c.l << "," << c.j << "): " << counts.size() << "/" << outcomes
        << " outcomes, max |z| " << fmt(worst, 3) << "; ";
  }

  // q_mu against exact integer arithmetic.
  std::size_t checked = 0;
  std::size_t mismatched = 0;
  for (std::uint64_t k = 1; k <= 10; ++k)
    for (std::uint64_t l = 1; l <= 10; ++l)
      for (std::uint64_t j = 0; j <= std::min(k, l); ++j) {
        const std::uint64_t n = k + l - 2 * j;
        const std::uint64_t r = k - j;
        std::uint64_t choose = 1;
        for (std::uint64_t i = 1; i <= r; ++i) choose = choose * (n - r + i) / i;
        const double exact = 1.0 / static_cast<double>((std::uint64_t{1} << j) * choose);
        ++checked;
        if (std::abs(q_mu(k, l, j) - exact) > 1e-15 * exact) ++mismatched;
      }
  pass = pass && mismatched == 0;
  out << "q_mu closed form: " << checked - mismatched << "/" << checked << " match";
  return {pass, out.str()};
}

// Conservation on email-Enron over 1e5 steps of each chain.
Outcome criterion4() {
  std::string why;
  auto h = load_enron(why);
  if (!h) return {false, why};
  bool pass = true;
  std::ostringstream out;
  for (Model model : {Model::Vertex, Model::Stub}) {
    ChainState state(*h, derive_seed(4, model == Model::Stub));
    std::size_t checks = 0;
    bool ok = true;
    for (std::uint64_t t = 1; t <= 100'000; ++t) {
      mcmc_step(state, model);
      if (t % 10'000 == 0) {
        ++checks;
        ok = ok && state.conserved() && is_valid(state.hypergraph());
      }
    }
    pass = pass && ok;
    out << (model == Model::Stub ? "; " : "") << to_string(model) << ": " << state.steps() << " steps, " << checks << " checks "
        << (ok ? "ok" : "FAILED");
  }
  return {pass, out.str()};
}

// Large-n analytic profile against Monte Carlo under the stub model.
Outcome criterion5() {
  SynthSpec spec;
  spec.n = 10'000;
  spec.degree = {1, 5};
  spec.edge_size = {3, 3};
  spec.max_attempts = 1'000'000;
  const auto h = synth(spec, 5);
  const auto d = degree_sequence(h);

  NullConfig config;
  config.samples = 400;
  config.seed = 55;
  config.chains = workers();
  auto profiles = run_null_chains<std::pair<double, double>>(h, Model::Stub, config, [](const Hypergraph& s, std::size_t) {
    const auto p = conditional_profile(s, 3, 3);
    return std::make_pair(p.at(1), p.at(2));
  });
  double r1 = 0.0, r2 = 0.0;
  for (const auto& [a, b] : profiles) {
    r1 += a;
    r2 += b;
  }
  r1 /= static_cast<double>(profiles.size());
  r2 /= static_cast<double>(profiles.size());
  const double a1 = analytic_profile(d, 3, 3, 1);
  const double a2 = analytic_profile(d, 3, 3, 2);
  const double e1 = std::abs(r1 - a1) / a1;
  const double e2 = std::abs(r2 - a2) / a2;
  std::ostringstream out;
  out << "m=" << h.num_edges() << ", " << profiles.size() << " stub-chain samples; r33(1) MC " << fmt(r1, 5)
      << " vs analytic " << fmt(a1, 5) << " (rel err " << fmt(e1, 3) << ", limit 0.05); r33(2) MC " << fmt(r2, 5)
      << " vs analytic " << fmt(a2, 5) << " (rel err " << fmt(e2, 3) << ", limit 0.15)";
  return {e1 <= 0.05 && e2 <= 0.15, out.str()};
}

// Intersection profile of email-Enron against the vertex-labeled null.
Outcome criterion6() {
  std::string why;
  auto h = load_enron(why);
  if (!h) return {false, why};
  NullConfig config;
  config.seed = 66;
  config.samples = 200;
  config.chains = workers();
  const auto res = profile_null(*h, Model::Vertex, config, false);
  bool pass = res.observed.at(1) < res.null_mean.at(1);
  std::ostringstream out;
  out << "r(1) observed " << fmt(res.observed.at(1)) << " vs null " << fmt(res.null_mean.at(1));
  for (std::size_t j = 3; j <= 6; ++j) {
    const double ratio = res.ratio(j);
    pass = pass && ratio >= 10.0;
    out << "; j=" << j << " ratio " << fmt(ratio, 3);
  }
  return {pass, out.str()};
}

// Five toy copies: projected dyadic Spearman above its null mean, all three
// hypergraph coefficients below theirs (vertex-labeled null).
Outcome criterion7() {
  const auto h = toy_copies(5);
  NullConfig config;
  config.seed = 77;
  config.chains = workers();
  bool pass = true;
  std::ostringstream out;
  const auto projected = null_test(h, assortativity_statistic(ChoiceKind::Uniform), Model::Vertex, Space::Projected, config);
  pass = pass && projected.observed > projected.null_mean;
  out << "projected: observed " << fmt(projected.observed) << " null " << fmt(projected.null_mean);
  for (ChoiceKind kind : {ChoiceKind::Uniform, ChoiceKind::Top2, ChoiceKind::TopBottom}) {
    const auto r = null_test(h, assortativity_statistic(kind), Model::Vertex, Space::Hypergraph, config);
    pass = pass && r.observed < r.null_mean;
    out << "; " << to_string(kind) << ": observed " << fmt(r.observed) << " null " << fmt(r.null_mean);
  }
  return {pass, out.str()};
}

// All-2-edge input: choice functions coincide and the vertex chain accepts
// with probability 1/(m_a m_b).
Outcome criterion8() {
  Rng rng(8);
  Hypergraph h(30);
  for (int e = 0; e < 60; ++e) {
    auto [u, v] = rng.distinct_pair(12);  // a dense core, so parallel edges occur
    h.add_edge(Edge::from_unsorted({static_cast<NodeId>(u), static_cast<NodeId>(v)}));
  }
  for (NodeId v = 12; v + 1 < 30; v += 2) h.add_edge(Edge{v, static_cast<NodeId>(v + 1)});

  std::ostringstream out;
  const double uniform = spearman_assortativity(h, {ChoiceKind::Uniform, 1}, 32, 2).rho;
  const double top2 = spearman_assortativity(h, {ChoiceKind::Top2, 3}).rho;
  const double topbottom = spearman_assortativity(h, {ChoiceKind::TopBottom, 4}).rho;
  bool pass = uniform == top2 && top2 == topbottom;
  out << "rho uniform/top2/topbottom = " << fmt(uniform, 17) << "/" << fmt(top2, 17) << "/" << fmt(topbottom, 17);

  // Recount multiplicities independently at every step.
  std::uint64_t formula_mismatch = 0;
  std::map<Count, std::pair<std::uint64_t, std::uint64_t>> by_product;  // m_a m_b -> (proposed, accepted)
  ChainState chain(h, 89);
  for (int t = 0; t < 200'000; ++t) {
    MultiplicityIndex recount;
    for (const auto& e : chain.hypergraph().edges()) ++recount[e];
    const auto move = mcmc_step_vertex(chain);
    const Count product = recount[move.old_first] * recount[move.old_second];
    if (move.acceptance != 1.0 / static_cast<double>(product)) ++formula_mismatch;
    auto& slot = by_product[product];
    ++slot.first;
    slot.second += move.accepted;
  }
  pass = pass && formula_mismatch == 0;
  out << "; acceptance formula mismatches " << formula_mismatch << "/200000";
  for (const auto& [product, counts] : by_product) {
    if (counts.first < 1000) continue;
    const double p = 1.0 / static_cast<double>(product);
    const double rate = static_cast<double>(counts.second) / static_cast<double>(counts.first);
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(counts.first));
    const bool ok = product == 1 ? rate == 1.0 : std::abs(rate - p) <= 4 * sigma;
    pass = pass && ok;
    out << "; m_a*m_b=" << product << ": accepted " << fmt(rate, 4) << " of " << counts.first << " (expect "
        << fmt(p, 4) << ")";
  }
  return {pass, out.str()};
}

const std::map<int, std::pair<std::string, std::function<Outcome()>>>& registry() {
  static const std::map<int, std::pair<std::string, std::function<Outcome()>>> r{
      {1, {"email-Enron clustering: observed and four null means", criterion1}},
      {2, {"exact stationarity on enumerable spaces (TV < 0.02)", criterion2}},
      {3, {"pairwise reshuffle outcome law and q_mu closed form", criterion3}},
      {4, {"conservation of (d, k) on email-Enron, 1e5 steps per chain", criterion4}},
      {5, {"analytic r33(1), r33(2) vs stub-model Monte Carlo, n = 1e4", criterion5}},
      {6, {"email-Enron intersection profile vs vertex null", criterion6}},
      {7, {"five toy copies: assortativity directions", criterion7}},
      {8, {"all-2-edge input: choice functions coincide, acceptance 1/(m_a m_b)", criterion8}},
  };
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty())
    for (const auto& [id, entry] : registry()) selected.push_back(id);

  bool all_pass = true;
  for (int id : selected) {
    auto it = registry().find(id);
    if (it == registry().end()) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " - " << it->second.first << ": " << o.detail
              << std::endl;
  }
  return all_pass ? 0 : 1;
}
