#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "gridfsc/harness.hpp"
#include "gridfsc/io.hpp"
#include "support.hpp"

using namespace gridfsc;

namespace {

ExperimentSpec small_maze(Agent a) {
  ExperimentSpec s = maze_experiment(a, 3);
  s.width = s.height = 21;
  s.instances = 6;
  return s;
}

const std::vector<GridMap>& lakes() {
  static const std::vector<GridMap> l = load_lake_fixtures(support::data("maps"));
  return l;
}

ExperimentReport run(const ExperimentSpec& s) {
  return run_experiment(s, &support::solver(), &support::learned_fsc(), lakes());
}

}  // namespace

TEST(Names, RoundTrip) {
  for (Agent a : kAgents) EXPECT_EQ(agent_from_string(to_string(a)), a);
  EXPECT_EQ(display_name(Agent::fsc_bt_slam), "FSC-BT(S)");
  EXPECT_EQ(display_name(Agent::fsc_re), "FSC-RE");
  EXPECT_FALSE(agent_from_string("fsc"));
  EXPECT_EQ(env_from_string("lake"), EnvKind::lake);
  EXPECT_FALSE(env_from_string("sea"));
}

TEST(ExecutorConfigFor, Agents) {
  EXPECT_EQ(executor_config(Agent::fsc_re_slam, 7).kind, ExecutorKind::reversing);
  EXPECT_TRUE(executor_config(Agent::fsc_re_slam, 7).slam);
  EXPECT_FALSE(executor_config(Agent::fsc_bt, 7).slam);
  EXPECT_EQ(executor_config(Agent::fsc_bt, 7).step_budget, 7u);
  EXPECT_THROW(executor_config(Agent::solver, 7), std::invalid_argument);
}

TEST(Instances, SeededAndSized) {
  const ExperimentSpec s = small_maze(Agent::fsc_bt);
  const auto a = make_instances(s);
  const auto b = make_instances(s);
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, i);
    EXPECT_EQ(serialize_map(a[i].map), serialize_map(b[i].map));
    EXPECT_EQ(a[i].map.width(), 21);
  }
  EXPECT_NE(serialize_map(a[0].map), serialize_map(a[1].map));
}

TEST(Instances, LakesNeedFixtures) {
  const ExperimentSpec s = lake_experiment(Agent::fsc_bt_slam, 1);
  EXPECT_THROW(make_instances(s), std::invalid_argument);
  EXPECT_EQ(make_instances(s, lakes()).size(), lakes().size() * s.instances);
}

TEST(Fixtures, FiveLakes) {
  ASSERT_EQ(lakes().size(), 5u);
  EXPECT_EQ(lakes().front().id(), "lake_01");
  for (const GridMap& m : lakes()) EXPECT_EQ(m.width(), 20);
}

TEST(Harness, DeterministicAcrossWorkerCounts) {
  ExperimentSpec one = small_maze(Agent::fsc_re);
  one.workers = 1;
  ExperimentSpec many = one;
  many.workers = 4;
  EXPECT_EQ(format_csv(run(one)), format_csv(run(many)));
}

TEST(Harness, SolvedRunsReplay) {
  for (Agent a : kAgents) {
    const ExperimentReport r = run(small_maze(a));
    for (const InstanceRecord& rec : r.records) {
      EXPECT_EQ(rec.outcome, Outcome::solved);
      EXPECT_TRUE(rec.replays);
      EXPECT_EQ(rec.steps, rec.actions.size());
    }
  }
}

TEST(Harness, SolverAndBacktrackingAgreeOnMazes) {
  ExperimentReport all = run(small_maze(Agent::solver));
  append(all, run(small_maze(Agent::fsc_bt)));
  const auto solver = records_of(all, Agent::solver);
  const auto bt = records_of(all, Agent::fsc_bt);
  ASSERT_EQ(solver.size(), bt.size());
  for (std::size_t i = 0; i < solver.size(); ++i) EXPECT_EQ(solver[i]->steps, bt[i]->steps) << i;
  EXPECT_EQ(all.rows.size(), 2u);
}

TEST(Harness, BudgetExceededIsReported) {
  ExperimentSpec s = small_maze(Agent::fsc_re);
  s.step_budget = 3;
  const ExperimentReport r = run(s);
  for (const InstanceRecord& rec : r.records) EXPECT_EQ(rec.outcome, Outcome::budget_exceeded);
  EXPECT_EQ(r.rows[0].solved, 0u);
  EXPECT_EQ(r.rows[0].mean_steps, 0.0);
}

TEST(Report, SummaryMeansOverSolved) {
  ExperimentSpec s = small_maze(Agent::fsc_bt);
  std::vector<InstanceRecord> recs(4);
  recs[0].outcome = Outcome::solved;
  recs[0].steps = 10;
  recs[1].outcome = Outcome::solved;
  recs[1].steps = 20;
  recs[2].outcome = Outcome::exhausted;
  recs[3].outcome = Outcome::budget_exceeded;
  const ReportRow row = summarize(s, recs, 0);
  EXPECT_EQ(row.solved, 2u);
  EXPECT_DOUBLE_EQ(row.mean_steps, 15.0);
  EXPECT_DOUBLE_EQ(row.solved_percent(), 50.0);
}

TEST(Report, TableAndCsv) {
  ExperimentReport rep;
  ReportRow maze;
  maze.agent = Agent::fsc_bt;
  maze.width = maze.height = 51;
  maze.instances = 20;
  maze.solved = 20;
  maze.mean_steps = 191.4;
  ReportRow lake;
  lake.agent = Agent::fsc_re_slam;
  lake.environment = EnvKind::lake;
  lake.width = lake.height = 20;
  lake.instances = 50;
  lake.fixtures = 5;
  lake.solved = 49;
  lake.mean_steps = 169.2;
  rep.rows = {maze, lake};
  EXPECT_EQ(format_table(rep),
            "Agent      Environment  Dimensions  Instances  Solved   Steps\n"
            "FSC-BT     maze         51x51              20    100%  191.40\n"
            "FSC-RE(S)  lake         20x20            5x10     98%  169.20\n");

  InstanceRecord rec;
  rec.instance = 3;
  rec.agent = Agent::fsc_re_slam;
  rec.outcome = Outcome::solved;
  rec.steps = 42;
  rep.records = {rec};
  EXPECT_EQ(format_csv(rep), "instance,agent,outcome,steps\n3,fsc-re-slam,solved,42\n");
}

TEST(Io, Errors) {
  EXPECT_THROW(read_file("/nonexistent/file.map"), IoError);
  EXPECT_THROW(load_lake_fixtures("/nonexistent"), IoError);
}

TEST(Io, WriteThenLoad) {
  const auto path = std::filesystem::temp_directory_path() / "gridfsc_io_test.map";
  write_file(path.string(), serialize_map(support::maze_a()));
  const GridMap m = load_map(path.string());
  EXPECT_EQ(m.id(), "gridfsc_io_test");
  EXPECT_EQ(serialize_map(m), serialize_map(support::maze_a()));
  std::filesystem::remove(path);
}
