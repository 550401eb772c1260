#include <gtest/gtest.h>

#include <map>

#include "support.hpp"

using namespace hypernull;

namespace {

// Pascal's triangle in exact integers.
std::uint64_t choose_exact(std::uint64_t n, std::uint64_t r) {
  std::vector<std::vector<std::uint64_t>> c(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (std::uint64_t i = 0; i <= n; ++i) {
    c[i][0] = 1;
    for (std::uint64_t k = 1; k <= i; ++k) c[i][k] = c[i - 1][k - 1] + (k <= i - 1 ? c[i - 1][k] : 0);
  }
  return r > n ? 0 : c[n][r];
}

}  // namespace

TEST(StubMatching, RespectsSequences) {
  DegreeSequence d{{2, 2, 1, 1, 1, 1}};
  DimensionSequence k{{3, 3, 2}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto h = stub_matching(d, k, 1000, seed);
    EXPECT_TRUE(is_valid(h));
    EXPECT_EQ(degree_sequence(h), d);
    EXPECT_EQ(dimension_sequence(h), k);
  }
}

TEST(StubMatching, UniformOverPerfectMatchingsOfFourNodes) {
  std::map<std::vector<Edge>, int> counts;
  const int draws = 30000;
  for (int s = 0; s < draws; ++s) ++counts[canonical_edges(stub_matching({{1, 1, 1, 1}}, {{2, 2}}, 10, s))];
  ASSERT_EQ(counts.size(), 3u);
  for (const auto& [state, c] : counts) EXPECT_NEAR(c / double(draws), 1.0 / 3.0, 0.015);
}

TEST(StubMatching, Preconditions) {
  EXPECT_THROW(stub_matching({{1, 1, 1}}, {{2, 2}}, 10, 0), PreconditionError);
  EXPECT_THROW(stub_matching({{1, 1}}, {{2, 0}}, 10, 0), PreconditionError);
  EXPECT_THROW(stub_matching({{3, 1}}, {{2, 2}}, 50, 0), AttemptsExhausted);
}

TEST(Reshuffle, QMuAgreesWithIntegerBinomials) {
  EXPECT_DOUBLE_EQ(q_mu(2, 2, 0), 1.0 / 6.0);
  for (std::uint64_t k = 1; k <= 10; ++k) {
    for (std::uint64_t l = 1; l <= 10; ++l) {
      for (std::uint64_t j = 0; j <= std::min(k, l); ++j) {
        const double expected = 1.0 / (double(1ULL << j) * double(choose_exact(k + l - 2 * j, k - j)));
        EXPECT_DOUBLE_EQ(q_mu(k, l, j), expected) << k << "," << l << "," << j;
        EXPECT_DOUBLE_EQ(reshuffle_outcome_count(k, l, j), double(choose_exact(k + l - 2 * j, k - j)));
      }
    }
  }
  EXPECT_THROW(q_mu(2, 3, 3), std::domain_error);
}

TEST(Reshuffle, KeepsIntersectionAndUnion) {
  Hypergraph h(7, {Edge{0, 1, 2, 3}, Edge{2, 3, 4, 5, 6}});
  Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    const auto move = propose_reshuffle(h, 0, 1, rng);
    EXPECT_EQ(move.intersection, 2u);
    EXPECT_EQ(move.new_first.size(), 4u);
    EXPECT_EQ(move.new_second.size(), 5u);
    EXPECT_FALSE(move.new_first.is_degenerate());
    EXPECT_FALSE(move.new_second.is_degenerate());
    EXPECT_EQ(intersection_size(move.new_first, move.new_second), 2u);
    EXPECT_TRUE(move.new_first.contains(2) && move.new_first.contains(3));
    EXPECT_TRUE(move.new_second.contains(2) && move.new_second.contains(3));
  }
}

TEST(Reshuffle, IdenticalEdgesHaveOneOutcome) {
  Hypergraph h(3, {Edge{0, 1, 2}, Edge{0, 1, 2}});
  Rng rng(1);
  const auto move = propose_reshuffle(h, 0, 1, rng);
  EXPECT_FALSE(move.changes_state());
  EXPECT_EQ(reshuffle_outcome_count(3, 3, 3), 1.0);
}

TEST(Reshuffle, DisjointTwoEdgesGiveSixOutcomesUniformly) {
  Hypergraph h(4, {Edge{0, 1}, Edge{2, 3}});
  Rng rng(11);
  std::map<Edge, int> seen;
  const int draws = 60000;
  for (int t = 0; t < draws; ++t) ++seen[propose_reshuffle(h, 0, 1, rng).new_first];
  ASSERT_EQ(seen.size(), 6u);
  for (const auto& [e, c] : seen) EXPECT_NEAR(c / double(draws), 1.0 / 6.0, 0.01);
}

TEST(Chain, StubStepAlwaysAccepts) {
  ChainState state(toy_copies(2), 3);
  for (int t = 0; t < 200; ++t) EXPECT_TRUE(mcmc_step_stub(state).accepted);
  EXPECT_EQ(state.accepted(), state.steps());
}

TEST(Chain, VertexAcceptanceWithUniqueEdgesIsOne) {
  ChainState state(Hypergraph(6, {Edge{0, 1, 2}, Edge{3, 4, 5}}), 9);
  const auto move = mcmc_step_vertex(state);
  EXPECT_DOUBLE_EQ(move.acceptance, 1.0);
  EXPECT_TRUE(move.accepted);
}

TEST(Chain, VertexAcceptanceWithOneParallelCopyIsHalf) {
  // Edges 0 and 1 are parallel; the move pairs one of them with {2,3}.
  const Hypergraph h(4, {Edge{0, 1}, Edge{0, 1}, Edge{2, 3}});
  int paired = 0;
  int accepted = 0;
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    ChainState state(h, seed);
    const auto move = mcmc_step_vertex(state);
    if (move.old_first == move.old_second) {
      EXPECT_DOUBLE_EQ(move.acceptance, 0.25);
      continue;
    }
    EXPECT_DOUBLE_EQ(move.acceptance, 0.5);
    ++paired;
    accepted += move.accepted;
  }
  EXPECT_NEAR(accepted / double(paired), 0.5, 0.02);
}

TEST(Chain, RejectionLeavesStateUnchanged) {
  const Hypergraph h(4, {Edge{0, 1}, Edge{0, 1}, Edge{2, 3}});
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    ChainState state(h, seed);
    const auto move = mcmc_step_vertex(state);
    if (!move.accepted) {
      EXPECT_EQ(state.hypergraph(), h);
    }
    EXPECT_EQ(state.steps(), 1u);
  }
}

TEST(Chain, ConservesSequencesAndIndexOnRandomInputs) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto h = hypernull::testing::random_hypergraph(seed, 7, 9, 4);
    for (Model model : {Model::Stub, Model::Vertex}) {
      ChainState state(h, seed + 100);
      for (int t = 0; t < 2000; ++t) mcmc_step(state, model);
      EXPECT_NO_THROW(state.check_invariants());
      EXPECT_EQ(degree_sequence(state.hypergraph()), degree_sequence(h));
      EXPECT_EQ(dimension_sequence(state.hypergraph()), dimension_sequence(h));
      EXPECT_TRUE(is_valid(state.hypergraph()));
    }
  }
}

TEST(Chain, ToyStubSamplesKeepDimensions) {
  ChainConfig config{Model::Stub, 30, 3, 40, 7};
  for (const auto& s : sample_chain(toy_hypergraph(), config))
    EXPECT_EQ(dimension_sequence(s).k, (std::vector<Count>{6, 2, 2}));
}

TEST(Chain, DeterministicGivenSeed) {
  const auto h = toy_copies(3);
  ChainConfig config{Model::Vertex, 20, 5, 10, 77};
  EXPECT_EQ(sample_chain(h, config), sample_chain(h, config));
  config.seed = 78;
  auto other = sample_chain(h, config);
  config.seed = 77;
  EXPECT_NE(sample_chain(h, config), other);
}

TEST(Chain, StepAccounting) {
  ChainConfig config{Model::Vertex, 13, 4, 6, 1};
  std::size_t emitted = 0;
  const auto stats = run_chain(toy_copies(2), config, [&](const Hypergraph&, std::size_t i) { EXPECT_EQ(i, emitted++); });
  EXPECT_EQ(stats.steps, 13u + 4u * 6u);
  EXPECT_EQ(stats.samples, 6u);
  EXPECT_LE(stats.accepted, stats.steps);
}

TEST(Chain, Preconditions) {
  EXPECT_THROW(sample_chain(Hypergraph(3, {Edge{0, 1}}), {Model::Stub, 1, 1, 1, 0}), PreconditionError);
  EXPECT_THROW(sample_chain(toy_hypergraph(), {Model::Stub, 1, 0, 1, 0}), PreconditionError);
  ChainState state(Hypergraph(3, {Edge{0, 1}}), 0);
  EXPECT_THROW(mcmc_step_vertex(state), PreconditionError);
  EXPECT_THROW(mcmc_step_stub(state), PreconditionError);
}

TEST(Chain, CorruptedStateIsAnInvariantViolation) {
  ChainState state(toy_hypergraph(), 0);
  ReshuffleOutcome bogus;
  bogus.first = 1;
  bogus.second = 2;
  bogus.old_first = Edge{6, 7};
  bogus.old_second = Edge{7, 8};
  bogus.new_first = Edge{6, 8};
  bogus.new_second = Edge{6, 8};
  state.apply(bogus);
  EXPECT_THROW(state.check_invariants(), InvariantViolation);
}

TEST(Aperiodicity, Conditions) {
  EXPECT_FALSE(aperiodicity_warning({{2, 2}}, Model::Stub).has_value());
  EXPECT_TRUE(aperiodicity_warning({{2, 1}}, Model::Stub).has_value());
  EXPECT_TRUE(aperiodicity_warning({{2, 2, 2}}, Model::Vertex).has_value());
  EXPECT_TRUE(aperiodicity_warning({{3, 2, 2}}, Model::Vertex).has_value());
  EXPECT_FALSE(aperiodicity_warning({{3, 3, 2}}, Model::Vertex).has_value());
  ChainConfig config{Model::Vertex, 1, 1, 1, 0};
  EXPECT_TRUE(run_chain(Hypergraph(4, {Edge{0, 1}, Edge{2, 3}}), config, [](const Hypergraph&, std::size_t) {})
                  .warning.has_value());
}

TEST(BipartiteSwap, ConservesDegreesAndSimplicity) {
  const auto h = toy_copies(2);
  BipartiteSwapState state(to_bipartite(h), 5);
  for (int t = 0; t < 5000; ++t) state.step();
  const auto out = state.hypergraph();
  EXPECT_TRUE(is_valid(out));
  EXPECT_EQ(degree_sequence(out), degree_sequence(h));
  EXPECT_EQ(dimension_sequence(out), dimension_sequence(h));
  EXPECT_GT(state.steps() - state.rejected(), 0u);
}

TEST(BipartiteSwap, RejectsRepeatedIncidence) {
  BipartiteGraph b{2, 1, {{0, 0}, {0, 0}}};
  EXPECT_THROW(BipartiteSwapState(b, 0), PreconditionError);
}

TEST(Model, ParseRoundTrip) {
  EXPECT_EQ(parse_model("stub"), Model::Stub);
  EXPECT_EQ(parse_model("vertex"), Model::Vertex);
  EXPECT_FALSE(parse_model("edge").has_value());
  EXPECT_STREQ(to_string(Model::Stub), "stub");
}
