#pragma once

#include <span>
#include <string>
#include <vector>

#include "gridfsc/fsc.hpp"
#include "gridfsc/grid.hpp"
#include "gridfsc/mil.hpp"
#include "gridfsc/planning_model.hpp"
#include "gridfsc/solver.hpp"

namespace gridfsc {

/// The 2x2 training map: four floor tiles, no start or end.
inline GridMap zero_map() { return parse_map("ff\nff", "zero", Endpoints::optional); }

inline const std::string kControllerTarget = "C";

/// Learns the solver from the single generalized problem on the Zero map.
inline mil::Hypothesis learn_solver() {
  const GridMap zero = zero_map();
  const logic::FactBase background = action_background(instantiate_actions(zero));
  return mil::learn({mil::example_from_problem(generalized_example(zero.id()))}, background, mil::kMetarules);
}

struct FscLearningRun {
  std::vector<BehaviourSchema> schemas;  // one per (matrix, direction)
  std::vector<Behaviour> behaviours;     // schemas x incoming states
  mil::Hypothesis program{kControllerTarget};
  Fsc fsc;
};

/// Observation matrices -> behaviours -> controller program -> tuples.
inline FscLearningRun learn_fsc(const mil::Hypothesis& solver, std::span<const ObservationMatrix> matrices) {
  FscLearningRun run;
  run.schemas = generate_behaviours(matrices, solver);
  run.behaviours = enumerate_initial_states(run.schemas);

  std::vector<mil::Example> examples;
  examples.reserve(run.behaviours.size());
  for (const Behaviour& b : run.behaviours) examples.push_back(mil::behaviour_example(b));
  const logic::FactBase background = mil::tuple_background();
  run.program = mil::learn(examples, background, mil::kMetarules, kControllerTarget);
  run.fsc = mil::hypothesis_to_tuples(run.program, background);
  return run;
}

inline FscLearningRun learn_fsc(const mil::Hypothesis& solver) {
  const std::vector<ObservationMatrix> matrices = observation_matrices();
  return learn_fsc(solver, matrices);
}

}  // namespace gridfsc
