// gridfsc: map generation, solver and controller learning, single runs and
// the benchmark experiments.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridfsc/executors.hpp"
#include "gridfsc/generators.hpp"
#include "gridfsc/harness.hpp"
#include "gridfsc/io.hpp"
#include "gridfsc/pipeline.hpp"
#include "gridfsc/solver.hpp"

#ifndef GRIDFSC_DATA_DIR
#define GRIDFSC_DATA_DIR "data"
#endif

namespace {

using namespace gridfsc;

// Writes to `out`, or stdout when it is empty.
void emit(const std::string& out, const std::string& text) {
  if (out.empty()) std::cout << text;
  else write_file(out, text);
}

int cmd_gen(const std::string& kind, int width, int height, std::uint64_t seed, const std::string& out, bool render) {
  GridMap map = kind == "maze" ? generate_maze(width, height, seed) : generate_lake(width, height, seed);
  if (!out.empty()) map = map.with_id(std::filesystem::path(out).stem().string());
  emit(out, serialize_map(map) + (out.empty() ? "\n" : ""));
  if (render) std::cout << render_map(map) << "\n";
  return 0;
}

int cmd_learn_solver(const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const mil::Hypothesis h = learn_solver();
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  emit(out, serialize_hypothesis(h));
  std::cerr << h.size() << " clauses in " << ms << " ms\n";
  return 0;
}

mil::Hypothesis load_solver(const std::string& path) {
  return path.empty() ? learn_solver() : mil::parse_hypothesis(read_file(path));
}

int cmd_learn_fsc(const std::string& solver_path, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const FscLearningRun run = learn_fsc(load_solver(solver_path));
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  emit(out, serialize_fsc(run.fsc));
  std::cerr << run.schemas.size() << " behaviour schemas, " << run.behaviours.size() << " behaviours, "
            << run.fsc.size() << " tuples in " << ms << " ms\n";
  return 0;
}

int cmd_run(const std::string& agent_name, const std::string& map_path, const std::string& program_path,
            std::size_t budget, bool render) {
  const auto agent = agent_from_string(agent_name);
  if (!agent) throw CLI::ValidationError("agent", "unknown agent '" + agent_name + "'");
  const GridMap map = load_map(map_path);
  if (budget == 0) budget = default_step_budget(map.cell_count());

  if (*agent == Agent::solver) {
    const mil::Hypothesis h = load_solver(program_path);
    try {
      const Plan plan = solve(map, h, concrete_problem(map));
      std::cout << "outcome solved\nsteps " << plan.size() << "\nplan " << format_labels(plan.labels()) << "\n";
      if (render) std::cout << render_map(map, plan.path()) << "\n";
    } catch (const Unsolvable&) {
      std::cout << "outcome exhausted\nsteps 0\n";
    }
    return 0;
  }

  const Fsc fsc = program_path.empty() ? learn_fsc(learn_solver()).fsc : parse_fsc(read_file(program_path));
  BasicEnvironment env(map);
  const ExecutionResult r = run_executor(fsc, env, executor_config(*agent, budget));
  std::cout << serialize_result(r);
  if (render) {
    const std::vector<Action> moves = r.actions();
    std::cout << render_map(map, walk(map.require_start(), moves)) << "\n";
    if (r.slam) std::cout << "\nslam map\n" << r.slam->render() << "\n";
  }
  return 0;
}

struct ExperimentArgs {
  std::string agent = "table";
  std::string env = "all";
  std::uint64_t seed = 1;
  std::size_t budget = 0;
  bool full = false;
  std::string out;
  std::string lakes = std::string(GRIDFSC_DATA_DIR) + "/maps";
  std::string solver;
  std::string fsc;
};

int cmd_experiment(const ExperimentArgs& a) {
  // Default row set: Solver on both environments, the plain executors on
  // mazes, the SLAM executors on lakes.
  std::vector<std::pair<Agent, EnvKind>> rows;
  if (a.agent == "table") {
    rows = {{Agent::solver, EnvKind::maze},      {Agent::solver, EnvKind::lake},
            {Agent::fsc_bt, EnvKind::maze},      {Agent::fsc_re, EnvKind::maze},
            {Agent::fsc_bt_slam, EnvKind::lake}, {Agent::fsc_re_slam, EnvKind::lake}};
  } else {
    std::vector<Agent> agents;
    if (a.agent == "all") agents.assign(kAgents.begin(), kAgents.end());
    else if (const auto ag = agent_from_string(a.agent)) agents = {*ag};
    else throw CLI::ValidationError("--agent", "unknown agent '" + a.agent + "'");
    for (Agent ag : agents) {
      if (a.env != "lake") rows.push_back({ag, EnvKind::maze});
      if (a.env != "maze") rows.push_back({ag, EnvKind::lake});
    }
  }
  if (a.env != "all") {
    const auto env = env_from_string(a.env);
    if (!env) throw CLI::ValidationError("--env", "unknown environment '" + a.env + "'");
    std::erase_if(rows, [&](const auto& r) { return r.second != *env; });
  }

  const mil::Hypothesis solver = load_solver(a.solver);
  const Fsc fsc = a.fsc.empty() ? learn_fsc(solver).fsc : parse_fsc(read_file(a.fsc));
  std::vector<GridMap> lakes;
  for (const auto& r : rows)
    if (r.second == EnvKind::lake && lakes.empty()) lakes = load_lake_fixtures(a.lakes);

  ExperimentReport report;
  for (const auto& [agent, env] : rows) {
    ExperimentSpec spec = env == EnvKind::maze ? maze_experiment(agent, a.seed, a.full)
                                               : lake_experiment(agent, a.seed, a.full);
    spec.step_budget = a.budget;
    append(report, run_experiment(spec, &solver, &fsc, lakes));
  }
  std::cout << format_table(report);
  if (!a.out.empty()) write_file(a.out, format_csv(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid navigation: learned solver and finite state controllers"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::size_t budget = 0;
  bool render = false;
  std::string out;

  auto* gen = app.add_subcommand("gen", "Generate a maze or lake map");
  std::string kind;
  int width = 0, height = 0;
  gen->add_option("kind", kind, "maze or lake")->required()->check(CLI::IsMember({"maze", "lake"}));
  gen->add_option("width", width)->required();
  gen->add_option("height", height)->required();
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--out", out, "Map file (stdout if omitted)");
  gen->add_flag("--render", render, "Print the map with display glyphs");

  auto* ls = app.add_subcommand("learn-solver", "Learn the grid solver from the Zero map");
  ls->add_option("--out", out, "Hypothesis file (stdout if omitted)");

  auto* lf = app.add_subcommand("learn-fsc", "Learn a controller from observation matrices");
  std::string solver_path;
  lf->add_option("solver", solver_path, "Solver file (learned afresh if omitted)")->check(CLI::ExistingFile);
  lf->add_option("--out", out, "Controller file (stdout if omitted)");

  auto* run = app.add_subcommand("run", "Run one agent on one map");
  std::string agent, map_path, program_path;
  run->add_option("agent", agent, "solver, fsc-bt, fsc-re, fsc-bt-slam or fsc-re-slam")->required();
  run->add_option("map", map_path, "Map file")->required()->check(CLI::ExistingFile);
  run->add_option("program", program_path, "Solver or controller file (learned if omitted)")
      ->check(CLI::ExistingFile);
  run->add_option("--budget", budget, "Step budget (default 10 x cells)");
  run->add_flag("--render", render, "Draw the path, and the SLAM map for SLAM agents");

  auto* exp = app.add_subcommand("experiment", "Run the benchmark experiments");
  ExperimentArgs ea;
  exp->add_option("--agent", ea.agent, "table (default), all, or one agent");
  exp->add_option("--env", ea.env, "all, maze or lake");
  exp->add_option("--seed", ea.seed, "Base seed; instance i uses seed + i");
  exp->add_option("--budget", ea.budget, "Step budget per instance (default 10 x cells)");
  exp->add_flag("--full", ea.full, "100 mazes at 101x101 and 50 rolls per lake");
  exp->add_option("--out", ea.out, "Per-instance CSV");
  exp->add_option("--lakes", ea.lakes, "Directory with lake_*.map fixtures");
  exp->add_option("--solver", ea.solver, "Solver file")->check(CLI::ExistingFile);
  exp->add_option("--fsc", ea.fsc, "Controller file")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(kind, width, height, seed, out, render);
    if (*ls) return cmd_learn_solver(out);
    if (*lf) return cmd_learn_fsc(solver_path, out);
    if (*run) return cmd_run(agent, map_path, program_path, budget, render);
    if (*exp) return cmd_experiment(ea);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const MapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
