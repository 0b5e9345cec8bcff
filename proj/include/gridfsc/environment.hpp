#pragma once

#include <concepts>
#include <span>
#include <stdexcept>

#include "gridfsc/fsc.hpp"
#include "gridfsc/grid.hpp"

namespace gridfsc {

/// What an environment reports back for one action label.
struct StepOutcome {
  bool accepted = false;         // false: the move was blocked, nothing changed
  ObservationLabel observation;  // observation after the step
  bool at_goal = false;
};

/// The only surface an executor may use: labels in, labels and a goal flag out.
template <typename E>
concept Environment = requires(E& env, Action a) {
  { env.init() } -> std::same_as<ObservationLabel>;
  { env.step(a) } -> std::same_as<StepOutcome>;
  { env.supports_checkpoint() } -> std::convertible_to<bool>;
};

/// Environments that can be reset to an earlier state (simulators only).
template <typename E>
concept CheckpointEnvironment = Environment<E> && requires(E& env, const typename E::Checkpoint& cp) {
  { env.checkpoint() } -> std::same_as<typename E::Checkpoint>;
  env.restore(cp);
};

/// Grid navigation on a map with start and end tiles. Tracks the agent's
/// cell and translates it into observation labels.
class BasicEnvironment {
 public:
  class Checkpoint {
    friend class BasicEnvironment;
    Coord at_;
  };

  explicit BasicEnvironment(GridMap map) : map_(std::move(map)), start_(map_.require_start()),
                                           goal_(map_.require_end()), agent_(start_) {}

  ObservationLabel init() {
    agent_ = start_;
    return observe(map_, agent_);
  }

  StepOutcome step(Action a) {
    const Coord next = gridfsc::step(agent_, a);
    if (!map_.passable(next)) return {false, observe(map_, agent_), agent_ == goal_};
    agent_ = next;
    return {true, observe(map_, agent_), agent_ == goal_};
  }

  bool supports_checkpoint() const noexcept { return true; }
  Checkpoint checkpoint() const {
    Checkpoint cp;
    cp.at_ = agent_;
    return cp;
  }
  void restore(const Checkpoint& cp) { agent_ = cp.at_; }

  /// Replays a label sequence from the start; true iff every move is legal
  /// and the agent ends on the goal. Does not disturb the current run.
  bool playback(std::span<const Action> labels) const {
    Coord at = start_;
    for (Action a : labels) {
      const Coord next = gridfsc::step(at, a);
      if (!map_.passable(next)) return false;
      at = next;
    }
    return at == goal_;
  }

  // For the harness (rendering); executors never see these.
  const GridMap& map() const noexcept { return map_; }
  Coord agent_position() const noexcept { return agent_; }

 private:
  GridMap map_;
  Coord start_;
  Coord goal_;
  Coord agent_;
};

static_assert(CheckpointEnvironment<BasicEnvironment>);

}  // namespace gridfsc
