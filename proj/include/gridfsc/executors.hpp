#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gridfsc/environment.hpp"
#include "gridfsc/fsc.hpp"
#include "gridfsc/slam.hpp"

namespace gridfsc {

enum class ExecutorKind { backtracking, reversing };

struct ExecutorConfig {
  ExecutorKind kind = ExecutorKind::backtracking;
  bool slam = false;
  std::size_t step_budget = 10'000;  // accepted environment steps, all included
};

// Default budget: 10 steps per map cell.
inline std::size_t default_step_budget(std::size_t cell_count) { return 10 * cell_count; }

enum class Outcome { solved, exhausted, budget_exceeded };

constexpr std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::solved: return "solved";
    case Outcome::exhausted: return "exhausted";
    case Outcome::budget_exceeded: return "budget_exceeded";
  }
  return "?";
}

struct TraceEntry {
  FscTuple tuple;
  bool reversal = false;  // a retreat pushed by the reversing executor
};

struct ExecutionResult {
  Outcome outcome = Outcome::exhausted;
  // Length of the returned trace. For the backtracking executor this is the
  // final path, without the branches it backtracked out of.
  std::size_t steps = 0;
  // Every accepted environment step, including undone and reversal moves.
  std::size_t environment_steps = 0;
  std::size_t rejected_moves = 0;
  std::vector<TraceEntry> trace;
  std::optional<SlamMap> slam;

  Behaviour behaviour() const {
    Behaviour b;
    b.reserve(trace.size());
    for (const TraceEntry& e : trace) b.push_back(e.tuple);
    return b;
  }
  std::vector<Action> actions() const {
    std::vector<Action> out;
    out.reserve(trace.size());
    for (const TraceEntry& e : trace) out.push_back(e.tuple.a);
    return out;
  }
};

/// outcome, steps, then one q,o,a,q' line per trace entry.
inline std::string serialize_result(const ExecutionResult& r) {
  std::string out = "outcome " + std::string(to_string(r.outcome)) + "\nsteps " + std::to_string(r.steps) + "\n";
  for (const TraceEntry& e : r.trace) out += to_string(e.tuple) + (e.reversal ? " % reversal\n" : "\n");
  return out;
}

class ExecutorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Pair that would just undo the previous move; never chosen as a forward
// move, so executors do not oscillate.
inline bool undoes(const std::optional<ActionStatePair>& previous, const ActionStatePair& candidate) {
  if (!previous) return false;
  const auto back = try_reverse_pair(previous->a, previous->q_next);
  return back && back->a == candidate.a && back->q_next == candidate.q_next;
}

template <CheckpointEnvironment Env>
ExecutionResult backtrack(const Fsc& fsc, Env& env, const ExecutorConfig& cfg) {
  struct Frame {
    typename Env::Checkpoint checkpoint;
    ControllerState q;
    ObservationLabel o;
    std::optional<ActionStatePair> arrived_by;
    Pose pose;
    std::size_t next = 0;
  };

  ExecutionResult r;
  std::optional<SlamMap> slam;
  if (cfg.slam) slam.emplace();

  const ObservationLabel first = env.init();
  if (slam) slam->update(first);
  std::vector<Frame> frames;
  frames.push_back({env.checkpoint(), ControllerState::q0, first, std::nullopt, Pose{0, 0}});

  auto finish = [&](Outcome o) {
    r.outcome = o;
    r.steps = r.trace.size();
    r.slam = std::move(slam);
    return r;
  };

  while (!frames.empty()) {
    Frame& top = frames.back();
    const auto& choices = fsc.lookup(top.q, top.o);
    if (top.next >= choices.size()) {
      frames.pop_back();
      if (frames.empty()) break;
      r.trace.pop_back();
      env.restore(frames.back().checkpoint);
      if (slam) slam->set_pose(frames.back().pose);
      continue;
    }
    const ActionStatePair pick = choices[top.next++];
    if (undoes(top.arrived_by, pick)) continue;
    if (slam && !slam->permits(pick.a, false)) continue;
    if (r.environment_steps >= cfg.step_budget) return finish(Outcome::budget_exceeded);

    const StepOutcome s = env.step(pick.a);
    if (!s.accepted) {
      ++r.rejected_moves;
      continue;
    }
    ++r.environment_steps;
    r.trace.push_back({{top.q, top.o, pick.a, pick.q_next}, false});
    if (slam) {
      slam->move(pick.a);
      slam->update(s.observation);
    }
    if (s.at_goal) return finish(Outcome::solved);
    frames.push_back({env.checkpoint(), pick.q_next, s.observation, pick, slam ? slam->pose() : Pose{0, 0}});
  }
  return finish(Outcome::exhausted);
}

template <Environment Env>
ExecutionResult reverse(const Fsc& fsc, Env& env, const ExecutorConfig& cfg) {
  struct Entry {
    Action a;
    ControllerState q_next;
    bool reversal;
  };

  ExecutionResult r;
  std::optional<SlamMap> slam;
  if (cfg.slam) slam.emplace();

  ControllerState q = ControllerState::q0;
  ObservationLabel o = env.init();
  if (slam) slam->update(o);

  std::vector<Entry> stack;
  // Pushed in reverse so they pop in lookup order.
  auto push_candidates = [&](const std::optional<ActionStatePair>& arrived_by) {
    const auto& choices = fsc.lookup(q, o);
    for (auto it = choices.rbegin(); it != choices.rend(); ++it)
      if (!undoes(arrived_by, *it)) stack.push_back({it->a, it->q_next, false});
  };
  auto finish = [&](Outcome out) {
    r.outcome = out;
    r.steps = r.trace.size();
    r.slam = std::move(slam);
    return r;
  };

  push_candidates(std::nullopt);
  while (!stack.empty()) {
    const Entry e = stack.back();
    stack.pop_back();
    if (!e.reversal) {
      // Siblings were pushed under an earlier controller state; after a
      // retreat they are only taken if the controller allows them now.
      if (!fsc.contains({q, o, e.a, e.q_next})) continue;
      if (slam && !slam->permits(e.a, false)) continue;
    }
    if (r.environment_steps >= cfg.step_budget) return finish(Outcome::budget_exceeded);

    const StepOutcome s = env.step(e.a);
    if (!s.accepted) {
      ++r.rejected_moves;
      continue;
    }
    ++r.environment_steps;
    r.trace.push_back({{q, o, e.a, e.q_next}, e.reversal});
    q = e.q_next;
    o = s.observation;
    if (slam) {
      slam->move(e.a);
      slam->update(o);
    }
    if (s.at_goal) return finish(Outcome::solved);
    if (!e.reversal) {
      if (const auto back = try_reverse_pair(e.a, e.q_next)) stack.push_back({back->a, back->q_next, true});
      push_candidates(ActionStatePair{e.a, e.q_next});
    }
  }
  return finish(Outcome::exhausted);
}

}  // namespace detail

/// Depth-first execution of a controller, starting in q0. At a dead end the
/// environment is restored to the last choice point and the next (a, q')
/// pair is tried. Needs an environment that can be checkpointed.
template <Environment Env>
ExecutionResult run_backtracking(const Fsc& fsc, Env& env, ExecutorConfig cfg) {
  cfg.kind = ExecutorKind::backtracking;
  if constexpr (CheckpointEnvironment<Env>) {
    if (!env.supports_checkpoint()) throw ExecutorError("backtracking needs an environment with checkpoints");
    return detail::backtrack(fsc, env, cfg);
  } else {
    throw ExecutorError("backtracking needs an environment with checkpoints");
  }
}

/// Execution with an explicit stack that never resets the environment. Each
/// executed move pushes its reverse beneath the new candidates, so exhausting
/// a branch physically walks back out of it.
template <Environment Env>
ExecutionResult run_reversing(const Fsc& fsc, Env& env, ExecutorConfig cfg) {
  cfg.kind = ExecutorKind::reversing;
  return detail::reverse(fsc, env, cfg);
}

/// Either executor with the SLAM filter: forward moves never enter a cell
/// the agent has already visited.
template <Environment Env>
ExecutionResult run_with_slam(ExecutorKind base, const Fsc& fsc, Env& env, ExecutorConfig cfg) {
  cfg.slam = true;
  return base == ExecutorKind::backtracking ? run_backtracking(fsc, env, cfg) : run_reversing(fsc, env, cfg);
}

template <Environment Env>
ExecutionResult run_executor(const Fsc& fsc, Env& env, const ExecutorConfig& cfg) {
  return cfg.kind == ExecutorKind::backtracking ? run_backtracking(fsc, env, cfg) : run_reversing(fsc, env, cfg);
}

}  // namespace gridfsc
