#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "gridfsc/environment.hpp"
#include "gridfsc/executors.hpp"
#include "gridfsc/generators.hpp"
#include "gridfsc/grid.hpp"
#include "gridfsc/mil.hpp"
#include "gridfsc/solver.hpp"

namespace gridfsc {

enum class Agent { solver, fsc_bt, fsc_re, fsc_bt_slam, fsc_re_slam };
enum class EnvKind { maze, lake };

inline constexpr std::array<Agent, 5> kAgents{Agent::solver, Agent::fsc_bt, Agent::fsc_re, Agent::fsc_bt_slam,
                                              Agent::fsc_re_slam};

constexpr std::string_view to_string(Agent a) noexcept {
  switch (a) {
    case Agent::solver: return "solver";
    case Agent::fsc_bt: return "fsc-bt";
    case Agent::fsc_re: return "fsc-re";
    case Agent::fsc_bt_slam: return "fsc-bt-slam";
    case Agent::fsc_re_slam: return "fsc-re-slam";
  }
  return "?";
}

// Table label, e.g. FSC-RE(S).
inline std::string display_name(Agent a) {
  switch (a) {
    case Agent::solver: return "Solver";
    case Agent::fsc_bt: return "FSC-BT";
    case Agent::fsc_re: return "FSC-RE";
    case Agent::fsc_bt_slam: return "FSC-BT(S)";
    case Agent::fsc_re_slam: return "FSC-RE(S)";
  }
  return "?";
}

inline std::optional<Agent> agent_from_string(std::string_view s) {
  for (Agent a : kAgents)
    if (to_string(a) == s) return a;
  return std::nullopt;
}

constexpr std::string_view to_string(EnvKind e) noexcept { return e == EnvKind::maze ? "maze" : "lake"; }

inline std::optional<EnvKind> env_from_string(std::string_view s) {
  if (s == "maze") return EnvKind::maze;
  if (s == "lake") return EnvKind::lake;
  return std::nullopt;
}

inline bool uses_fsc(Agent a) { return a != Agent::solver; }

inline ExecutorConfig executor_config(Agent a, std::size_t budget) {
  switch (a) {
    case Agent::fsc_bt: return {ExecutorKind::backtracking, false, budget};
    case Agent::fsc_re: return {ExecutorKind::reversing, false, budget};
    case Agent::fsc_bt_slam: return {ExecutorKind::backtracking, true, budget};
    case Agent::fsc_re_slam: return {ExecutorKind::reversing, true, budget};
    case Agent::solver: break;
  }
  throw std::invalid_argument("the solver is not an executor");
}

struct ExperimentSpec {
  Agent agent = Agent::solver;
  EnvKind environment = EnvKind::maze;
  int width = 51;
  int height = 51;
  std::size_t instances = 20;  // mazes; for lakes, rolls per fixture
  std::uint64_t seed = 1;
  std::size_t step_budget = 0;  // 0: 10 x cell count
  unsigned workers = 0;         // 0: hardware concurrency
};

/// Desk-scale maze set: 20 mazes of nominal size 50x50 (51x51 since the
/// generator needs odd sides). `full` selects 100 mazes at 101x101.
inline ExperimentSpec maze_experiment(Agent agent, std::uint64_t seed, bool full = false) {
  ExperimentSpec s;
  s.agent = agent;
  s.environment = EnvKind::maze;
  s.width = s.height = full ? 101 : 51;
  s.instances = full ? 100 : 20;
  s.seed = seed;
  return s;
}

/// Lake set: every fixture map rolled `rolls` times (10 at desk scale, 50 full).
inline ExperimentSpec lake_experiment(Agent agent, std::uint64_t seed, bool full = false) {
  ExperimentSpec s;
  s.agent = agent;
  s.environment = EnvKind::lake;
  s.width = s.height = 20;
  s.instances = full ? 50 : 10;
  s.seed = seed;
  return s;
}

struct Instance {
  std::size_t id = 0;
  GridMap map;
};

/// Instance i uses seed + i, so two agents given the same spec seed see the
/// same maps. Lake instances reuse the fixture layouts with new endpoints.
inline std::vector<Instance> make_instances(const ExperimentSpec& spec, std::span<const GridMap> lake_fixtures = {}) {
  std::vector<Instance> out;
  if (spec.environment == EnvKind::maze) {
    for (std::size_t i = 0; i < spec.instances; ++i)
      out.push_back({i, generate_maze(spec.width, spec.height, spec.seed + i, "maze_" + std::to_string(i))});
    return out;
  }
  if (lake_fixtures.empty()) throw std::invalid_argument("lake experiments need fixture maps");
  std::size_t id = 0;
  for (const GridMap& fixture : lake_fixtures)
    for (std::size_t r = 0; r < spec.instances; ++r, ++id)
      out.push_back({id, place_random_endpoints(fixture, spec.seed + id)});
  return out;
}

struct InstanceRecord {
  std::size_t instance = 0;
  Agent agent = Agent::solver;
  Outcome outcome = Outcome::exhausted;
  std::size_t steps = 0;
  std::vector<Action> actions;  // solution labels when solved
  bool replays = false;         // playback of `actions` reaches the goal
};

inline InstanceRecord run_agent(Agent agent, const Instance& inst, const mil::Hypothesis* solver, const Fsc* fsc,
                                std::size_t budget) {
  InstanceRecord rec;
  rec.instance = inst.id;
  rec.agent = agent;
  if (budget == 0) budget = default_step_budget(inst.map.cell_count());
  if (agent == Agent::solver) {
    if (!solver) throw std::invalid_argument("solver agent needs a hypothesis");
    try {
      // The resolution limit plays the role of the executors' step budget.
      const Plan plan = solve(inst.map, *solver, concrete_problem(inst.map), {budget * 1000});
      rec.outcome = Outcome::solved;
      rec.actions = plan.labels();
    } catch (const Unsolvable&) {
      rec.outcome = Outcome::exhausted;
    } catch (const logic::ResolutionLimitExceeded&) {
      rec.outcome = Outcome::budget_exceeded;
    }
  } else {
    if (!fsc) throw std::invalid_argument("executor agent needs a controller");
    BasicEnvironment env(inst.map);
    const ExecutionResult r = run_executor(*fsc, env, executor_config(agent, budget));
    rec.outcome = r.outcome;
    if (r.outcome == Outcome::solved) rec.actions = r.actions();
  }
  rec.steps = rec.actions.size();
  if (rec.outcome == Outcome::solved) rec.replays = playback(inst.map, rec.actions).success;
  return rec;
}

struct ReportRow {
  Agent agent = Agent::solver;
  EnvKind environment = EnvKind::maze;
  int width = 0;
  int height = 0;
  std::size_t instances = 0;
  std::size_t fixtures = 0;  // lakes: instances = fixtures x rolls
  std::size_t solved = 0;
  double mean_steps = 0.0;  // over solved instances only

  double solved_percent() const { return instances ? 100.0 * static_cast<double>(solved) / static_cast<double>(instances) : 0.0; }
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::vector<InstanceRecord> records;  // all rows, ordered by agent then instance
};

inline ReportRow summarize(const ExperimentSpec& spec, std::span<const InstanceRecord> records,
                           std::size_t fixtures = 0) {
  ReportRow row{spec.agent, spec.environment, spec.width, spec.height, records.size(), fixtures, 0, 0.0};
  double total = 0;
  for (const InstanceRecord& r : records) {
    if (r.outcome != Outcome::solved) continue;
    ++row.solved;
    total += static_cast<double>(r.steps);
  }
  if (row.solved) row.mean_steps = total / static_cast<double>(row.solved);
  return row;
}

/// Runs one agent over the spec's instance set. Instances are independent
/// and are spread over worker threads; records come back in instance order.
inline std::vector<InstanceRecord> run_instances(const ExperimentSpec& spec, std::span<const Instance> instances,
                                                 const mil::Hypothesis* solver, const Fsc* fsc) {
  std::vector<InstanceRecord> records(instances.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < instances.size();)
      records[i] = run_agent(spec.agent, instances[i], solver, fsc, spec.step_budget);
  };
  unsigned n = spec.workers ? spec.workers : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, instances.size()));
  if (n <= 1) {
    work();
    return records;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
  pool.clear();
  return records;
}

inline ExperimentReport run_experiment(const ExperimentSpec& spec, const mil::Hypothesis* solver, const Fsc* fsc,
                                       std::span<const GridMap> lake_fixtures = {}) {
  const std::vector<Instance> instances = make_instances(spec, lake_fixtures);
  ExperimentReport report;
  report.records = run_instances(spec, instances, solver, fsc);
  report.rows.push_back(
      summarize(spec, report.records, spec.environment == EnvKind::lake ? lake_fixtures.size() : 0));
  return report;
}

inline void append(ExperimentReport& into, const ExperimentReport& from) {
  into.rows.insert(into.rows.end(), from.rows.begin(), from.rows.end());
  into.records.insert(into.records.end(), from.records.begin(), from.records.end());
}

/// Aligned text table: Agent, Environment, Dimensions, Instances, Solved, Steps.
inline std::string format_table(const ExperimentReport& report) {
  std::vector<std::vector<std::string>> cells{{"Agent", "Environment", "Dimensions", "Instances", "Solved", "Steps"}};
  for (const ReportRow& r : report.rows) {
    std::ostringstream pct, steps;
    pct << std::fixed << std::setprecision(0) << r.solved_percent() << "%";
    steps << std::fixed << std::setprecision(2) << r.mean_steps;
    cells.push_back({display_name(r.agent), std::string(to_string(r.environment)),
                     std::to_string(r.width) + "x" + std::to_string(r.height),
                     r.fixtures ? std::to_string(r.fixtures) + "x" + std::to_string(r.instances / r.fixtures)
                                : std::to_string(r.instances),
                     pct.str(),
                     steps.str()});
  }
  std::vector<std::size_t> widths(cells.front().size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  std::string out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::size_t pad = widths[c] - row[c].size();
      if (c >= 3) out.append(pad, ' ');  // numbers right-aligned
      out += row[c];
      if (c < 3) out.append(pad, ' ');
      if (c + 1 < row.size()) out += "  ";
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
  }
  return out;
}

// instance,agent,outcome,steps
inline std::string format_csv(const ExperimentReport& report) {
  std::string out = "instance,agent,outcome,steps\n";
  for (const InstanceRecord& r : report.records)
    out += std::to_string(r.instance) + "," + std::string(to_string(r.agent)) + "," +
           std::string(to_string(r.outcome)) + "," + std::to_string(r.steps) + "\n";
  return out;
}

/// Records of `agent` keyed by instance, for cross-agent comparisons.
inline std::vector<const InstanceRecord*> records_of(const ExperimentReport& report, Agent agent) {
  std::vector<const InstanceRecord*> out;
  for (const InstanceRecord& r : report.records)
    if (r.agent == agent) {
      if (out.size() <= r.instance) out.resize(r.instance + 1, nullptr);
      out[r.instance] = &r;
    }
  return out;
}

}  // namespace gridfsc
