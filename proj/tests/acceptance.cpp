// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "gridfsc/environment.hpp"
#include "gridfsc/executors.hpp"
#include "gridfsc/generators.hpp"
#include "gridfsc/harness.hpp"
#include "gridfsc/io.hpp"
#include "gridfsc/pipeline.hpp"
#include "oracles.hpp"

using namespace gridfsc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int prec = 3) {
  std::ostringstream s;
  s.precision(prec);
  s << std::fixed << v;
  return s.str();
}

int failures = 0;

void report(int n, const std::string& name, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << n << "  " << name << ": " << detail << std::endl;
}

std::string data(const std::string& rel) { return std::string(GRIDFSC_DATA_DIR) + "/" + rel; }

// Environment stripped to labels; the audit below runs executors on it.
class LabelsOnly {
 public:
  explicit LabelsOnly(GridMap m) : env_(std::move(m)) {}
  ObservationLabel init() { return env_.init(); }
  StepOutcome step(Action a) { return env_.step(a); }
  bool supports_checkpoint() const { return false; }

 private:
  BasicEnvironment env_;
};

static_assert(Environment<LabelsOnly>);
template <typename E>
concept SeesTheGrid = requires(E& e) { e.map(); };
static_assert(!SeesTheGrid<LabelsOnly>);

const std::set<std::string> kSolverClauses{
    "S(s1,s2) <- Step_down(s1,s2).",          "S(s1,s2) <- Step_left(s1,s2).",
    "S(s1,s2) <- Step_right(s1,s2).",         "S(s1,s2) <- Step_up(s1,s2).",
    "S(s1,s2) <- Step_down(s1,s3),S(s3,s2).", "S(s1,s2) <- Step_left(s1,s3),S(s3,s2).",
    "S(s1,s2) <- Step_right(s1,s3),S(s3,s2).", "S(s1,s2) <- Step_up(s1,s3),S(s3,s2)."};

const std::set<std::string> kZeroActions{
    "Step_down([zero,0/1,f],[zero,0/0,f])",  "Step_down([zero,1/1,f],[zero,1/0,f])",
    "Step_left([zero,1/0,f],[zero,0/0,f])",  "Step_left([zero,1/1,f],[zero,0/1,f])",
    "Step_right([zero,0/0,f],[zero,1/0,f])", "Step_right([zero,0/1,f],[zero,1/1,f])",
    "Step_up([zero,0/0,f],[zero,0/1,f])",    "Step_up([zero,1/0,f],[zero,1/1,f])"};

std::set<std::string> action_strings(const GridMap& m) {
  std::set<std::string> out;
  for (const GroundAction& a : instantiate_actions(m)) out.insert(to_string(a));
  return out;
}

}  // namespace

int main() {
  // 1: solver learning.
  auto t0 = Clock::now();
  const mil::Hypothesis solver = learn_solver();
  double dt = seconds_since(t0);
  report(1, "solver learning", solver.clause_texts() == kSolverClauses && dt < 1.0,
         std::to_string(solver.size()) + " clauses, " + fmt(dt * 1000.0) + " ms (limit 1 s)");

  // 2: action generation.
  {
    const GridMap maze_a = load_map(data("maps/maze_a.map"));
    const auto zero = action_strings(zero_map());
    const auto a = action_strings(maze_a);
    bool listed = true;
    for (const char* s : {"Step_right([maze_a,0/6,s],[maze_a,1/6,f])", "Step_down([maze_a,2/6,f],[maze_a,2/5,f])",
                          "Step_left([maze_a,2/0,f],[maze_a,1/0,f])", "Step_left([maze_a,1/0,f],[maze_a,0/0,e])"})
      listed = listed && a.contains(s);
    report(2, "action generation", zero == kZeroActions && a.size() == 60 && listed,
           "zero " + std::to_string(zero.size()) + " (golden " + (zero == kZeroActions ? "match" : "MISMATCH") +
               "), maze A " + std::to_string(a.size()) + (listed ? ", listed four present" : ", listed MISSING"));
  }

  // 3: controller size.
  t0 = Clock::now();
  const FscLearningRun run = learn_fsc(solver);
  dt = seconds_since(t0);
  const Fsc& fsc = run.fsc;
  {
    std::set<std::pair<std::string, Action>> oa;
    std::set<ControllerState> qs;
    bool in_universe = true;
    for (const FscTuple& t : fsc.tuples()) {
      oa.insert({t.o.str(), t.a});
      qs.insert(t.q);
      in_universe = in_universe && LabelAlphabets::contains(t.o);
    }
    const bool ok = fsc.size() == 128 && oa.size() == oracle::observation_action_pairs() && oa.size() == 32 &&
                    qs.size() == 4 && oa.size() * qs.size() == fsc.size() && in_universe && dt < 5.0;
    report(3, "controller size", ok,
           std::to_string(fsc.size()) + " tuples = " + std::to_string(oa.size()) + " (o,a) x " +
               std::to_string(qs.size()) + " states, " + fmt(dt) + " s (limit 5 s)");
  }

  // 4 and 5: mazes.
  t0 = Clock::now();
  const ExperimentReport solver_mazes = run_experiment(maze_experiment(Agent::solver, 1), &solver, &fsc);
  dt = seconds_since(t0);
  const ReportRow& sr = solver_mazes.rows[0];
  report(4, "solver on mazes", sr.solved == sr.instances && sr.instances == 20 && dt < 60.0,
         std::to_string(sr.solved) + "/" + std::to_string(sr.instances) + " solved at " + std::to_string(sr.width) +
             "x" + std::to_string(sr.height) + ", mean " + fmt(sr.mean_steps, 2) + " steps, " + fmt(dt) +
             " s (limit 60 s)");

  {
    ExperimentReport all = solver_mazes;
    append(all, run_experiment(maze_experiment(Agent::fsc_bt, 1), &solver, &fsc));
    append(all, run_experiment(maze_experiment(Agent::fsc_re, 1), &solver, &fsc));
    const auto s = records_of(all, Agent::solver);
    const auto bt = records_of(all, Agent::fsc_bt);
    const auto re = records_of(all, Agent::fsc_re);
    std::size_t equal = 0, ordered = 0, bt_solved = 0, re_solved = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      bt_solved += bt[i]->outcome == Outcome::solved;
      re_solved += re[i]->outcome == Outcome::solved;
      equal += s[i]->outcome == Outcome::solved && bt[i]->steps == s[i]->steps;
      ordered += re[i]->steps >= bt[i]->steps;
    }
    const std::size_t n = s.size();
    report(5, "maze equivalence", bt_solved == n && re_solved == n && equal == n && ordered == n,
           "FSC-BT " + std::to_string(bt_solved) + "/" + std::to_string(n) + " solved, " + std::to_string(equal) +
               " equal to plan length (mean " + fmt(all.rows[1].mean_steps, 2) + "); FSC-RE " +
               std::to_string(re_solved) + "/" + std::to_string(n) + " solved, " + std::to_string(ordered) +
               " with steps >= FSC-BT (mean " + fmt(all.rows[2].mean_steps, 2) + ")");
  }

  // 6: lakes.
  {
    const std::vector<GridMap> lakes = load_lake_fixtures(data("maps"));
    t0 = Clock::now();
    const ReportRow re = run_experiment(lake_experiment(Agent::fsc_re_slam, 1), &solver, &fsc, lakes).rows[0];
    const ReportRow bt = run_experiment(lake_experiment(Agent::fsc_bt_slam, 1), &solver, &fsc, lakes).rows[0];
    dt = seconds_since(t0);
    report(6, "lakes", re.solved == re.instances && bt.solved_percent() >= 80.0 && re.instances == 50 && dt < 120.0,
           "FSC-RE(S) " + fmt(re.solved_percent(), 0) + "% (" + std::to_string(re.solved) + "/" +
               std::to_string(re.instances) + "), FSC-BT(S) " + fmt(bt.solved_percent(), 0) + "% (floor 80%), " +
               fmt(dt) + " s (limit 120 s)");
  }

  // 7: ambiguity.
  {
    const GridMap a = load_map(data("maps/maze_a.map"));
    const GridMap b = load_map(data("maps/maze_b.map"));
    const Fsc given = parse_fsc(read_file(data("controllers/maze_a.fsc")));
    bool given_ok = true, learned_ok = true;
    for (ExecutorKind k : {ExecutorKind::backtracking, ExecutorKind::reversing})
      for (bool slam : {false, true}) {
        const ExecutorConfig cfg{k, slam, 1000};
        BasicEnvironment ea(a), eb(b), la(a), lb(b);
        given_ok = given_ok && run_executor(given, ea, cfg).outcome == Outcome::solved &&
                 run_executor(given, eb, cfg).outcome != Outcome::solved;
        learned_ok = learned_ok && run_executor(fsc, la, cfg).outcome == Outcome::solved &&
                     run_executor(fsc, lb, cfg).outcome == Outcome::solved;
      }
    report(7, "ambiguity", given_ok && learned_ok,
           std::string("deterministic controller A-only ") + (given_ok ? "yes" : "NO") + ", learned controller both " +
               (learned_ok ? "yes" : "NO") + " (4 executor variants)");
  }

  // 8: properties, condensed.
  {
    std::map<std::string, bool> checks;
    bool perfect = true, round_trip = true;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const GridMap m = generate_maze(21, 21, seed);
      const std::string text = serialize_map(m);
      perfect = perfect && oracle::is_perfect_maze(oracle::Raw(text));
      round_trip = round_trip && serialize_map(parse_map(text, m.id())) == text;
    }
    checks["maze perfection x100"] = perfect;
    checks["map round trip"] = round_trip;

    bool chained = true;
    for (const Behaviour& b : run.behaviours) chained = chained && is_chained(b);

    bool involution = true;
    for (Action a : kDirections) {
      const auto r = reverse_pair(a, last_action_state(a));
      const auto rr = reverse_pair(r.a, r.q_next);
      involution = involution && rr.a == a && rr.q_next == last_action_state(a);
    }
    checks["reverse involution"] = involution;

    bool visit_once = true, replays = true;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      for (const GridMap& m : {generate_maze(21, 21, seed), generate_lake(20, 20, seed)})
        for (ExecutorKind k : {ExecutorKind::backtracking, ExecutorKind::reversing})
          for (bool slam : {false, true}) {
            BasicEnvironment env(m);
            const ExecutionResult r = run_executor(fsc, env, {k, slam, default_step_budget(m.cell_count())});
            chained = chained && is_chained(r.behaviour());
            if (r.outcome == Outcome::solved) replays = replays && playback(m, r.actions()).success;
            if (!slam) continue;
            std::map<Coord, int> entries;
            Coord at = m.require_start();
            for (const TraceEntry& e : r.trace) {
              at = step(at, e.tuple.a);
              if (!e.reversal && ++entries[at] > 1) visit_once = false;
            }
          }
    }
    checks["chaining"] = chained;
    checks["SLAM forward visit <= 1"] = visit_once;
    checks["solved traces replay"] = replays;

    LabelsOnly env(load_map(data("maps/maze_b.map")));
    checks["label-only interface"] = run_reversing(fsc, env, {ExecutorKind::reversing, true, 1000}).outcome ==
                                     Outcome::solved;

    bool all = true;
    std::string failed;
    for (const auto& [name, ok] : checks) {
      all = all && ok;
      if (!ok) failed += " " + name + ";";
    }
    report(8, "property suites", all,
           std::to_string(checks.size()) + " checks" + (all ? " hold" : ", failing:" + failed));
  }

  return failures == 0 ? 0 : 1;
}
