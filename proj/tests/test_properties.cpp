#include <gtest/gtest.h>

#include <map>

#include "gridfsc/environment.hpp"
#include "gridfsc/executors.hpp"
#include "gridfsc/generators.hpp"
#include "gridfsc/solver.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gridfsc;

namespace {

constexpr ExecutorConfig kVariants[] = {{ExecutorKind::backtracking, false, 0},
                                        {ExecutorKind::reversing, false, 0},
                                        {ExecutorKind::backtracking, true, 0},
                                        {ExecutorKind::reversing, true, 0}};

ExecutionResult execute(const GridMap& m, ExecutorConfig cfg) {
  cfg.step_budget = default_step_budget(m.cell_count());
  BasicEnvironment env(m);
  return run_executor(support::learned_fsc(), env, cfg);
}

}  // namespace

TEST(Property, GeneratedMazesArePerfect) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const int w = 5 + 2 * static_cast<int>(seed % 7);
    const int h = 5 + 2 * static_cast<int>(seed % 5);
    const GridMap m = generate_maze(w, h, seed);
    const oracle::Raw raw(serialize_map(m));
    ASSERT_TRUE(oracle::is_perfect_maze(raw)) << "seed " << seed;
    EXPECT_TRUE(oracle::bfs_distance(raw, *raw.find('s'), *raw.find('e')));
  }
}

TEST(Property, MapTextRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    for (const GridMap& m : {generate_maze(11, 9, seed), generate_lake(15, 12, seed)}) {
      const GridMap back = parse_map(serialize_map(m), m.id());
      EXPECT_EQ(serialize_map(back), serialize_map(m));
      EXPECT_EQ(back.require_start(), m.require_start());
      EXPECT_EQ(back.require_end(), m.require_end());
    }
  }
}

TEST(Property, LakeEndpointsConnected) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const oracle::Raw raw(serialize_map(generate_lake(20, 20, seed)));
    EXPECT_TRUE(oracle::bfs_distance(raw, *raw.find('s'), *raw.find('e'))) << seed;
  }
}

TEST(Property, LearnedBehavioursChainAndFollowLastAction) {
  for (const Behaviour& b : support::fsc_run().behaviours) EXPECT_TRUE(is_chained(b));
  for (const FscTuple& t : support::learned_fsc().tuples()) {
    EXPECT_EQ(t.q_next, last_action_state(t.a));
    EXPECT_TRUE(t.o.passable(t.a));
  }
}

TEST(Property, ReversePairInvolutionWhereDefined) {
  std::size_t defined = 0;
  for (Action a : kDirections)
    for (ControllerState q : LabelAlphabets::states()) {
      const auto r = try_reverse_pair(a, q);
      if (!r) continue;
      ++defined;
      const auto rr = try_reverse_pair(r->a, r->q_next);
      ASSERT_TRUE(rr);
      EXPECT_EQ(rr->a, a);
      EXPECT_EQ(rr->q_next, q);
    }
  EXPECT_EQ(defined, 4u);
}

TEST(Property, TracesChainStayInControllerAndReplay) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    for (const GridMap& m : {generate_maze(21, 21, seed), generate_lake(20, 20, seed)}) {
      for (const ExecutorConfig& cfg : kVariants) {
        const ExecutionResult r = execute(m, cfg);
        EXPECT_TRUE(is_chained(r.behaviour()));
        for (const TraceEntry& e : r.trace)
          EXPECT_TRUE(e.reversal || support::learned_fsc().contains(e.tuple));
        // Every move in the trace is legal on the real map.
        const std::vector<Action> acts = r.actions();
        const PlaybackResult p = playback(m, acts);
        EXPECT_EQ(p.applied, acts.size());
        EXPECT_EQ(p.success, r.outcome == Outcome::solved);
      }
    }
  }
}

TEST(Property, SlamForwardVisitsAtMostOnce) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GridMap m = generate_lake(20, 20, seed);
    for (ExecutorKind k : {ExecutorKind::backtracking, ExecutorKind::reversing}) {
      const ExecutionResult r = execute(m, {k, true, 0});
      EXPECT_NE(r.outcome, Outcome::budget_exceeded);
      std::map<Coord, int> entries;
      Coord at = m.require_start();
      ++entries[at];
      // Backtracking traces hold only the final path, so count along it.
      for (const TraceEntry& e : r.trace) {
        at = step(at, e.tuple.a);
        if (!e.reversal) ++entries[at];
      }
      for (const auto& [c, n] : entries) EXPECT_LE(n, 1) << to_string(c) << " seed " << seed;
    }
  }
}

TEST(Property, BacktrackingFindsTheUniqueMazePath) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GridMap m = generate_maze(25, 25, seed);
    const oracle::Raw raw(serialize_map(m));
    const ExecutionResult r = execute(m, {ExecutorKind::backtracking, false, 0});
    ASSERT_EQ(r.outcome, Outcome::solved);
    EXPECT_EQ(r.steps, *oracle::bfs_distance(raw, *raw.find('s'), *raw.find('e')));
  }
}

TEST(Property, DroppingAMatrixShrinksTheController) {
  const std::vector<ObservationMatrix> all = observation_matrices();
  for (const char* drop : {"pppp", "upuu", "pupu"}) {
    std::vector<ObservationMatrix> fewer;
    for (const ObservationMatrix& m : all)
      if (m.label.str() != drop) fewer.push_back(m);
    const Fsc smaller = learn_fsc(support::solver(), fewer).fsc;
    EXPECT_LT(smaller.size(), support::learned_fsc().size()) << drop;
    for (const FscTuple& t : smaller.tuples()) {
      EXPECT_NE(t.o.str(), drop);
      EXPECT_TRUE(support::learned_fsc().contains(t));
    }
  }
}
