#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gridfsc/fsc.hpp"
#include "gridfsc/grid.hpp"
#include "gridfsc/program.hpp"
#include "gridfsc/term.hpp"

namespace gridfsc {

/// Predicate symbol of the step action in direction `d`, e.g. "Step_down".
inline std::string action_symbol(Direction d) {
  std::string name(to_string(d));
  return "Step_" + name;
}

inline std::optional<Direction> direction_of_symbol(std::string_view symbol) {
  if (!symbol.starts_with("Step_")) return std::nullopt;
  return direction_from_string(symbol.substr(5));
}

inline logic::Term tile_term(Tile t) { return logic::Term::atom(std::string(1, to_char(t))); }

inline logic::Term coord_term(Coord c) {
  return logic::Term::slash(logic::Term::integer(c.x), logic::Term::integer(c.y));
}

/// Fluents [Id, X/Y, T] of an agent standing on a passable tile.
struct StateTerm {
  std::string map_id;
  Coord pos;
  Tile tile = Tile::floor;

  logic::Term to_term() const {
    return logic::Term::list({logic::Term::atom(map_id), coord_term(pos), tile_term(tile)});
  }
  friend bool operator==(const StateTerm&, const StateTerm&) = default;
};

inline std::optional<StateTerm> state_from_term(const logic::Term& t) {
  const auto items = logic::list_items(t);
  if (!items || items->size() < 3) return std::nullopt;
  const logic::Term& id = (*items)[0];
  const logic::Term& xy = (*items)[1];
  const logic::Term& tile = (*items)[2];
  if (!id.is_atom() || !xy.is_compound() || xy.name() != "/" || xy.arity() != 2 ||
      !xy.arg(0).is_integer() || !xy.arg(1).is_integer() || !tile.is_atom() || tile.name().size() != 1)
    return std::nullopt;
  const auto kind = tile_from_char(tile.name()[0]);
  if (!kind) return std::nullopt;
  return StateTerm{id.name(), {static_cast<int>(xy.arg(0).value()), static_cast<int>(xy.arg(1).value())}, *kind};
}

/// One instantiated step: moves from input.pos to its neighbour in `dir`.
struct GroundAction {
  Direction dir = Direction::up;
  StateTerm input;
  StateTerm output;

  std::string symbol() const { return action_symbol(dir); }
  logic::Fact to_fact() const { return logic::make_fact(symbol(), input.to_term(), output.to_term()); }
  friend bool operator==(const GroundAction&, const GroundAction&) = default;
};

// Step_down([zero,0/1,f],[zero,0/0,f])
inline std::string to_string(const GroundAction& a) {
  return a.symbol() + "(" + logic::to_string(a.input.to_term()) + "," + logic::to_string(a.output.to_term()) + ")";
}

/// Every step between 4-adjacent passable cells of `map`: one action per
/// ordered pair. Listed by predicate symbol, then by input x, then input y.
inline std::vector<GroundAction> instantiate_actions(const GridMap& map) {
  std::vector<GroundAction> out;
  for (Coord c : map.passable_cells()) {
    for (Direction d : kDirections) {
      const Coord n = step(c, d);
      if (!map.passable(n)) continue;
      out.push_back({d, {map.id(), c, map.at(c)}, {map.id(), n, map.at(n)}});
    }
  }
  std::sort(out.begin(), out.end(), [](const GroundAction& a, const GroundAction& b) {
    return std::tuple(a.symbol(), a.input.pos.x, a.input.pos.y) <
           std::tuple(b.symbol(), b.input.pos.x, b.input.pos.y);
  });
  return out;
}

inline std::string format_actions(const std::vector<GroundAction>& actions) {
  std::string out;
  for (const GroundAction& a : actions) out += to_string(a) + "\n";
  return out;
}

inline logic::FactBase action_background(const std::vector<GroundAction>& actions) {
  logic::FactBase facts;
  for (const GroundAction& a : actions) facts.add(a.to_fact());
  return facts;
}

/// A step that also consumes one (q, o, a, q') quadruple from four label
/// lists threaded through the state:
///   Step_d([Id,X/Y,T,[Q|Qs],[o|Os],[d|As],[Q1|Qs1]], [Id,X'/Y',T',Qs,Os,As,Qs1])
/// where o is what the agent observes at X/Y and d is the step's own
/// direction. Q and Q1 are left open.
struct LabeledAction {
  GroundAction action;
  ObservationLabel observation;

  logic::Fact to_fact() const {
    using logic::Term;
    const Term q = Term::variable(0), qs = Term::variable(1), os = Term::variable(2),
               as = Term::variable(3), q1 = Term::variable(4), qs1 = Term::variable(5);
    const Term in = Term::list({Term::atom(action.input.map_id), coord_term(action.input.pos),
                                tile_term(action.input.tile), Term::cons(q, qs),
                                Term::cons(Term::atom(observation.str()), os),
                                Term::cons(Term::atom(std::string(to_string(action.dir))), as),
                                Term::cons(q1, qs1)});
    const Term out = Term::list({Term::atom(action.output.map_id), coord_term(action.output.pos),
                                 tile_term(action.output.tile), qs, os, as, qs1});
    return logic::make_fact(action.symbol(), in, out);
  }
};

inline std::vector<LabeledAction> instantiate_labeled_actions(const GridMap& map) {
  std::vector<LabeledAction> out;
  for (const GroundAction& a : instantiate_actions(map)) out.push_back({a, observe(map, a.input.pos)});
  return out;
}

inline logic::FactBase labeled_action_background(const std::vector<LabeledAction>& actions) {
  logic::FactBase facts;
  for (const LabeledAction& a : actions) facts.add(a.to_fact());
  return facts;
}

/// State fluents with position and tile possibly left open.
struct PartialState {
  std::optional<Coord> pos;
  std::optional<Tile> tile;
  friend bool operator==(const PartialState&, const PartialState&) = default;
};

/// A planning problem S(initial, goal). The map id is always bound.
struct PlanningProblem {
  std::string map_id;
  PartialState initial;
  PartialState goal;

  bool ground() const { return initial.pos && initial.tile && goal.pos && goal.tile; }
};

/// Problem binding only the map id: S([Id,Xs/Ys,Ts],[Id,Xe/Ye,Te]).
inline PlanningProblem generalized_example(std::string map_id) { return {std::move(map_id), {}, {}}; }

/// Start tile to end tile of `map`.
inline PlanningProblem concrete_problem(const GridMap& map) {
  const Coord s = map.require_start();
  const Coord e = map.require_end();
  return {map.id(), {s, map.at(s)}, {e, map.at(e)}};
}

/// Term for a partial state; open fields become fresh variables in `b`.
inline logic::Term state_pattern(const std::string& map_id, const PartialState& s, logic::Bindings& b) {
  using logic::Term;
  Term pos = s.pos ? coord_term(*s.pos) : Term::atom("");
  if (!s.pos) {
    const Term x = b.fresh();  // sequenced so variable numbering is stable
    pos = Term::slash(x, b.fresh());
  }
  const Term tile = s.tile ? tile_term(*s.tile) : b.fresh();
  return Term::list({Term::atom(map_id), pos, tile});
}

inline std::string to_string(const PlanningProblem& p) {
  logic::Bindings b;
  const logic::Term in = state_pattern(p.map_id, p.initial, b);
  const logic::Term out = state_pattern(p.map_id, p.goal, b);
  return "S(" + logic::to_string(in) + "," + logic::to_string(out) + ")";
}

}  // namespace gridfsc
