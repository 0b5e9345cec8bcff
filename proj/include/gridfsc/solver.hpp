#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gridfsc/fsc.hpp"
#include "gridfsc/grid.hpp"
#include "gridfsc/mil.hpp"
#include "gridfsc/planning_model.hpp"
#include "gridfsc/program.hpp"

namespace gridfsc {

class Unsolvable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Chain of ground actions from start to goal.
struct Plan {
  StateTerm start;
  StateTerm goal;
  std::vector<GroundAction> actions;

  std::vector<Action> labels() const {
    std::vector<Action> out;
    out.reserve(actions.size());
    for (const GroundAction& a : actions) out.push_back(a.dir);
    return out;
  }

  std::vector<Coord> path() const {
    std::vector<Coord> out{start.pos};
    for (const GroundAction& a : actions) out.push_back(a.output.pos);
    return out;
  }

  std::size_t size() const noexcept { return actions.size(); }
};

// "right,right,down"
inline std::string format_labels(std::span<const Action> labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out.push_back(',');
    out += to_string(labels[i]);
  }
  return out;
}

inline std::vector<Action> parse_labels(std::string_view text) {
  std::vector<Action> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view word = text.substr(pos, comma - pos);
    while (!word.empty() && (word.back() == '\n' || word.back() == '\r' || word.back() == ' ')) word.remove_suffix(1);
    while (!word.empty() && word.front() == ' ') word.remove_prefix(1);
    if (!word.empty()) {
      const auto d = direction_from_string(word);
      if (!d) throw std::invalid_argument("unknown action label '" + std::string(word) + "'");
      out.push_back(*d);
    }
    pos = comma + 1;
  }
  return out;
}

/// Interprets `hypothesis` over the ground actions of `map` to solve
/// `problem`. Clauses are tried in hypothesis order, depth first; positions
/// already entered are not entered again, so the search ends on any map.
/// Returns the first plan found.
inline Plan solve(const GridMap& map, const mil::Hypothesis& hypothesis, const PlanningProblem& problem,
                  logic::SearchLimits limits = {}) {
  if (hypothesis.empty()) throw std::invalid_argument("cannot solve with an empty hypothesis");
  if (problem.map_id != map.id())
    throw std::invalid_argument("problem is for map '" + problem.map_id + "', not '" + map.id() + "'");
  if (problem.initial.pos && problem.goal.pos && *problem.initial.pos == *problem.goal.pos)
    throw DegenerateProblem("start and goal coincide; a plan needs at least one action");

  const logic::FactBase facts = action_background(instantiate_actions(map));
  logic::Bindings b;
  const logic::Term in = state_pattern(problem.map_id, problem.initial, b);
  const logic::Term out = state_pattern(problem.map_id, problem.goal, b);
  const auto steps = logic::first_derivation(hypothesis.clauses(), hypothesis.target(), facts, in, out, b,
                                             logic::ListPrefixKey{2}, limits);
  if (!steps) throw Unsolvable("no plan for " + to_string(problem) + " on map '" + map.id() + "'");

  Plan plan;
  for (const logic::ResolvedStep& s : *steps) {
    const auto dir = direction_of_symbol(facts.fact(s.fact).predicate);
    const auto from = state_from_term(s.input);
    const auto to = state_from_term(s.output);
    if (!dir || !from || !to) throw std::logic_error("derivation used a non-action fact");
    plan.actions.push_back({*dir, *from, *to});
  }
  if (plan.actions.empty()) throw DegenerateProblem("derivation used no actions");
  plan.start = plan.actions.front().input;
  plan.goal = plan.actions.back().output;
  return plan;
}

struct PlaybackResult {
  bool success = false;
  Coord final_position;
  std::size_t applied = 0;  // moves carried out before stopping
};

/// Replays action labels from the start tile. Stops at the first move into a
/// wall or off the map; succeeds iff all moves apply and end on the end tile.
inline PlaybackResult playback(const GridMap& map, std::span<const Action> labels) {
  PlaybackResult r{false, map.require_start(), 0};
  for (Action a : labels) {
    const Coord next = step(r.final_position, a);
    if (!map.passable(next)) return r;
    r.final_position = next;
    ++r.applied;
  }
  r.success = r.final_position == map.require_end();
  return r;
}

/// 3x3 training map whose centre (1/1) realises one observation label.
struct ObservationMatrix {
  ObservationLabel label;
  GridMap map;
};

inline constexpr Coord kMatrixCentre{1, 1};

inline ObservationMatrix observation_matrix(ObservationLabel label) {
  if (!LabelAlphabets::contains(label)) throw std::invalid_argument("uuuu has no observation matrix");
  std::vector<Tile> tiles(9, Tile::wall);
  auto set = [&](Coord c) { tiles[static_cast<std::size_t>(c.y * 3 + c.x)] = Tile::floor; };
  set(kMatrixCentre);
  for (Direction d : kDirections)
    if (label.passable(d)) set(step(kMatrixCentre, d));
  return {label, GridMap("om_" + label.str(), 3, 3, std::move(tiles), Endpoints::optional)};
}

/// One matrix per label of O (15).
inline std::vector<ObservationMatrix> observation_matrices() {
  std::vector<ObservationMatrix> out;
  for (ObservationLabel o : LabelAlphabets::observations()) out.push_back(observation_matrix(o));
  return out;
}

/// Label sequence read off a labeled-model plan. The incoming controller
/// state of the first step is left open; each next state follows the
/// last-action convention.
struct BehaviourSchema {
  struct Step {
    ObservationLabel o;
    Action a = Action::up;
    ControllerState q_next = ControllerState::q0;
  };
  std::string source;  // map the plan was found on
  std::vector<Step> steps;

  Behaviour with_initial_state(ControllerState q) const {
    Behaviour b;
    for (const Step& s : steps) {
      b.push_back({q, s.o, s.a, s.q_next});
      q = s.q_next;
    }
    return b;
  }
};

/// Solves start -> goal on `map` with the labeled action model and returns
/// the (o, a) labels consumed by the plan.
inline BehaviourSchema labeled_behaviour(const GridMap& map, const mil::Hypothesis& hypothesis, Coord start,
                                         Coord goal) {
  using logic::Term;
  if (start == goal) throw DegenerateProblem("start and goal coincide");
  const logic::FactBase facts = labeled_action_background(instantiate_labeled_actions(map));
  logic::Bindings b;
  const Term in = Term::list({Term::atom(map.id()), coord_term(start), tile_term(map.at(start)), b.fresh(),
                              b.fresh(), b.fresh(), b.fresh()});
  const Term out = Term::list({Term::atom(map.id()), coord_term(goal), b.fresh(), Term::nil(), Term::nil(),
                               Term::nil(), Term::nil()});
  const auto steps = logic::first_derivation(hypothesis.clauses(), hypothesis.target(), facts, in, out, b,
                                             logic::ListPrefixKey{2});
  if (!steps) throw Unsolvable("no labeled plan on map '" + map.id() + "'");

  BehaviourSchema schema{map.id(), {}};
  for (const logic::ResolvedStep& s : *steps) {
    const auto items = logic::list_items(s.input);
    if (!items || items->size() != 7) throw std::logic_error("labeled step has an unexpected state shape");
    auto head = [&](std::size_t i) { return (*items)[i].is_cons() ? (*items)[i].arg(0) : Term(); };
    const Term o = head(4), a = head(5);
    const auto label = o.is_atom() ? ObservationLabel::parse(o.name()) : std::nullopt;
    const auto action = a.is_atom() ? direction_from_string(a.name()) : std::nullopt;
    if (!label || !action) throw std::logic_error("labeled step left its labels unbound");
    schema.steps.push_back({*label, *action, last_action_state(*action)});
  }
  return schema;
}

/// For each matrix, one single-step behaviour per passable direction.
inline std::vector<BehaviourSchema> generate_behaviours(std::span<const ObservationMatrix> matrices,
                                                        const mil::Hypothesis& hypothesis) {
  std::vector<BehaviourSchema> out;
  for (const ObservationMatrix& m : matrices) {
    if (m.label.passable_count() == 0) throw std::invalid_argument("matrix has no passable neighbour");
    for (Direction d : kDirections) {
      if (!m.label.passable(d)) continue;
      out.push_back(labeled_behaviour(m.map, hypothesis, kMatrixCentre, step(kMatrixCentre, d)));
    }
  }
  return out;
}

/// Every schema grounded with every incoming controller state.
inline std::vector<Behaviour> enumerate_initial_states(std::span<const BehaviourSchema> schemas) {
  std::vector<Behaviour> out;
  for (const BehaviourSchema& s : schemas)
    for (ControllerState q : LabelAlphabets::states()) out.push_back(s.with_initial_state(q));
  return out;
}

}  // namespace gridfsc
