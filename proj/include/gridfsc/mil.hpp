#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "gridfsc/fsc.hpp"
#include "gridfsc/planning_model.hpp"
#include "gridfsc/program.hpp"
#include "gridfsc/term.hpp"

namespace gridfsc::mil {

using logic::DefiniteClause;
using logic::FactBase;
using logic::Literal;
using logic::Term;

inline const std::string kSolverTarget = "S";

// Identity: P(x,y) <- Q(x,y).  Tailrec: P(x,y) <- Q(x,z), P(z,y).
enum class Metarule { identity, tailrec };

inline constexpr std::array<Metarule, 2> kMetarules{Metarule::identity, Metarule::tailrec};

constexpr std::string_view to_string(Metarule m) noexcept {
  return m == Metarule::identity ? "identity" : "tailrec";
}

inline std::string metarule_text(Metarule m) {
  return m == Metarule::identity ? "P(x,y) <- Q(x,y)" : "P(x,y) <- Q(x,z),P(z,y)";
}

/// Second-order substitution {P/target, Q/body} for one metarule.
struct MetaSubstitution {
  Metarule rule = Metarule::identity;
  std::string target;
  std::string body;
  friend auto operator<=>(const MetaSubstitution&, const MetaSubstitution&) = default;
};

/// The first-order clause obtained by applying `m` to its metarule.
inline DefiniteClause apply(const MetaSubstitution& m) {
  const Term x = Term::variable(0), y = Term::variable(1), z = Term::variable(2);
  if (m.rule == Metarule::identity) return logic::make_clause({m.target, x, y}, {{m.body, x, y}});
  return logic::make_clause({m.target, x, y}, {{m.body, x, z}, {m.target, z, y}});
}

/// Recovers the metasubstitution of a clause that instantiates Identity or
/// Tailrec with head predicate `target`; nullopt for any other clause.
inline std::optional<MetaSubstitution> match_metarule(const DefiniteClause& c, const std::string& target) {
  const Literal& h = c.head;
  if (h.predicate != target || !h.input.is_variable() || !h.output.is_variable() ||
      h.input.var_id() == h.output.var_id())
    return std::nullopt;
  const auto x = h.input.var_id(), y = h.output.var_id();
  auto is_var = [](const Term& t, std::size_t id) { return t.is_variable() && t.var_id() == id; };
  if (c.body.size() == 1) {
    const Literal& q = c.body[0];
    if (q.predicate == target || !is_var(q.input, x) || !is_var(q.output, y)) return std::nullopt;
    return MetaSubstitution{Metarule::identity, target, q.predicate};
  }
  if (c.body.size() == 2) {
    const Literal& q = c.body[0];
    const Literal& p = c.body[1];
    if (q.predicate == target || p.predicate != target || !is_var(q.input, x) || !q.output.is_variable())
      return std::nullopt;
    const auto z = q.output.var_id();
    if (z == x || z == y || !is_var(p.input, z) || !is_var(p.output, y)) return std::nullopt;
    return MetaSubstitution{Metarule::tailrec, target, q.predicate};
  }
  return std::nullopt;
}

/// Learned program: Identity and Tailrec instances for one target, free of
/// duplicates up to variable renaming, in the order they were added.
class Hypothesis {
 public:
  explicit Hypothesis(std::string target = kSolverTarget) : target_(std::move(target)) {}

  // False when a variant of `c` is already present.
  bool insert(DefiniteClause c) {
    if (!match_metarule(c, target_))
      throw std::invalid_argument("clause " + logic::to_string(c) + " is not an Identity or Tailrec instance of " + target_);
    if (!seen_.insert(logic::to_string(c)).second) return false;
    clauses_.push_back(std::move(c));
    return true;
  }

  const std::string& target() const noexcept { return target_; }
  const std::vector<DefiniteClause>& clauses() const noexcept { return clauses_; }
  std::size_t size() const noexcept { return clauses_.size(); }
  bool empty() const noexcept { return clauses_.empty(); }

  std::vector<MetaSubstitution> metasubstitutions() const {
    std::vector<MetaSubstitution> out;
    for (const DefiniteClause& c : clauses_) out.push_back(*match_metarule(c, target_));
    return out;
  }

  std::set<std::string> clause_texts() const { return {seen_.begin(), seen_.end()}; }

  Hypothesis without(std::size_t index) const {
    Hypothesis h(target_);
    for (std::size_t i = 0; i < clauses_.size(); ++i)
      if (i != index) h.insert(clauses_[i]);
    return h;
  }

 private:
  std::string target_;
  std::vector<DefiniteClause> clauses_;
  std::unordered_set<std::string> seen_;
};

/// One clause per line.
inline std::string serialize_hypothesis(const Hypothesis& h) {
  std::string out;
  for (const DefiniteClause& c : h.clauses()) out += logic::to_string(c) + "\n";
  return out;
}

/// Inverse of serialize_hypothesis. Blank lines and '%' comments are skipped.
inline Hypothesis parse_hypothesis(std::string_view text, const std::string& target = kSolverTarget) {
  Hypothesis h(target);
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto c = line.find('%'); c != std::string::npos) line.erase(c);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    h.insert(logic::parse_clause(line));
  }
  return h;
}

/// Example goal target(input, output). Variables use local ids.
struct Example {
  Term input;
  Term output;
};

inline Example example_from_problem(const PlanningProblem& p) {
  logic::Bindings b;
  Term in = state_pattern(p.map_id, p.initial, b);
  Term out = state_pattern(p.map_id, p.goal, b);
  return {std::move(in), std::move(out)};
}

class Unlearnable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProofResult {
  std::set<MetaSubstitution> metasubstitutions;
  std::size_t refutations = 0;
  bool budget_hit = false;
};

/// 4 x the number of distinct states the background can step from.
inline std::size_t default_depth_budget(const FactBase& facts) {
  std::unordered_set<std::string> inputs;
  std::size_t open = 0;
  for (const auto& f : facts.facts()) {
    if (logic::is_ground(f.input)) inputs.insert(logic::to_string(f.input));
    else ++open;
  }
  return 4 * std::max<std::size_t>(1, inputs.size() + open);
}

namespace detail {

class Prover {
 public:
  Prover(const FactBase& facts, std::span<const Metarule> metarules, const std::string& target,
         std::size_t depth_budget)
      : facts_(facts), metarules_(metarules.begin(), metarules.end()), target_(target),
        symbols_(facts.symbols()), budget_(depth_budget),
        ceiling_(metarules_.size() * symbols_.size()) {}

  ProofResult run(const Example& e) {
    const std::size_t base = bindings_.fresh_block(std::max(logic::variable_span(e.input), logic::variable_span(e.output)));
    search(logic::rename(e.input, base), logic::rename(e.output, base), 1);
    return std::move(result_);
  }

 private:
  bool saturated() const { return result_.metasubstitutions.size() >= ceiling_; }

  // Enumerates refutations of target(x, y); `chain_` holds the
  // metasubstitutions of the derivation under construction.
  void search(const Term& x, const Term& y, std::size_t depth) {
    if (saturated()) return;
    if (depth > budget_) {
      result_.budget_hit = true;
      return;
    }
    for (Metarule rule : metarules_) {
      for (const std::string& symbol : symbols_) {
        for (std::size_t idx : facts_.candidates(symbol, bindings_.resolve(x))) {
          if (saturated()) return;
          const logic::Fact& f = facts_.fact(idx);
          const std::size_t mark = bindings_.mark();
          const std::size_t base = bindings_.fresh_block(f.var_count);
          if (!bindings_.unify(logic::rename(f.input, base), x)) {
            bindings_.undo(mark);
            continue;
          }
          const auto x_key = logic::GroundStateKey{}(bindings_.resolve(x));
          const bool entered = x_key && path_.insert(*x_key).second;
          chain_.push_back({rule, target_, symbol});
          const Term out = logic::rename(f.output, base);
          if (rule == Metarule::identity) {
            if (bindings_.unify(out, y)) record();
          } else {
            const auto z_key = logic::GroundStateKey{}(bindings_.resolve(out));
            if (!z_key || !path_.contains(*z_key)) search(out, y, depth + 1);
          }
          chain_.pop_back();
          if (entered) path_.erase(*x_key);
          bindings_.undo(mark);
        }
      }
    }
  }

  void record() {
    ++result_.refutations;
    result_.metasubstitutions.insert(chain_.begin(), chain_.end());
  }

  const FactBase& facts_;
  std::vector<Metarule> metarules_;
  std::string target_;
  std::vector<std::string> symbols_;
  std::size_t budget_;
  std::size_t ceiling_;
  logic::Bindings bindings_;
  std::vector<MetaSubstitution> chain_;
  std::unordered_set<std::string> path_;
  ProofResult result_;
};

}  // namespace detail

/// Second-order SLD resolution of target(e) with the given metarules over
/// `facts`. Enumerates refutations of at most `depth_budget` steps, never
/// re-entering a state already on the current derivation, and returns the
/// union of the metasubstitutions they use. Enumeration stops early once
/// every possible metasubstitution has been seen.
/// Throws BudgetExhausted when the budget cut the search and nothing was found.
inline ProofResult prove(const Example& e, const FactBase& facts, std::span<const Metarule> metarules,
                         const std::string& target, std::size_t depth_budget) {
  if (depth_budget == 0) throw std::invalid_argument("depth budget must be positive");
  ProofResult r = detail::Prover(facts, metarules, target, depth_budget).run(e);
  if (r.metasubstitutions.empty() && r.budget_hit)
    throw BudgetExhausted("depth budget " + std::to_string(depth_budget) + " exhausted before any refutation");
  return r;
}

/// True when facts + h refute target(e) (first-refutation interpreter).
inline bool entails(const Hypothesis& h, const FactBase& facts, const Example& e) {
  logic::Bindings b;
  const std::size_t base = b.fresh_block(std::max(logic::variable_span(e.input), logic::variable_span(e.output)));
  return logic::first_derivation(h.clauses(), h.target(), facts, logic::rename(e.input, base),
                                 logic::rename(e.output, base), b)
      .has_value();
}

struct LearnOptions {
  std::size_t depth_budget = 0;  // 0: default_depth_budget(background)
  std::vector<Example> negatives;
};

/// Learns a hypothesis for `target` from positive examples: the union, over
/// all refutations of all examples, of the metasubstitutions they use, each
/// applied to its metarule. Identity instances come before Tailrec
/// instances; within each, clauses follow the sorted background symbols.
///
/// When negatives are given, clauses not needed to cover the positives are
/// dropped (last first), and Unlearnable is thrown if a negative is still
/// entailed.
inline Hypothesis learn(const std::vector<Example>& positives, const FactBase& background,
                        std::span<const Metarule> metarules, const std::string& target = kSolverTarget,
                        const LearnOptions& options = {}) {
  if (positives.empty()) throw std::invalid_argument("learning needs at least one positive example");
  if (background.size() == 0) throw std::invalid_argument("learning needs a nonempty background");
  const std::size_t budget = options.depth_budget ? options.depth_budget : default_depth_budget(background);

  std::set<MetaSubstitution> found;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    const ProofResult r = prove(positives[i], background, metarules, target, budget);
    if (r.metasubstitutions.empty())
      throw Unlearnable("positive example " + std::to_string(i) + " has no refutation");
    found.insert(r.metasubstitutions.begin(), r.metasubstitutions.end());
  }

  Hypothesis h(target);
  for (Metarule rule : kMetarules)
    for (const MetaSubstitution& m : found)
      if (m.rule == rule) h.insert(apply(m));

  if (!options.negatives.empty()) {
    auto covers_all = [&](const Hypothesis& cand) {
      return std::all_of(positives.begin(), positives.end(),
                         [&](const Example& e) { return entails(cand, background, e); });
    };
    for (std::size_t i = h.size(); i-- > 0;) {
      Hypothesis reduced = h.without(i);
      if (covers_all(reduced)) h = std::move(reduced);
    }
    for (const Example& n : options.negatives)
      if (entails(h, background, n)) throw Unlearnable("a negative example is entailed by every consistent hypothesis");
  }
  return h;
}

// ---------------------------------------------------------------------------
// Controller learning: each 4-tuple of Q x O x A x Q is a background
// predicate that consumes one label from each of four label lists.

/// Predicate symbol for a tuple, e.g. "T_q0_upuu_right_q1".
inline std::string tuple_symbol(const FscTuple& t) {
  return "T_" + to_string(t.q) + "_" + t.o.str() + "_" + std::string(to_string(t.a)) + "_" + to_string(t.q_next);
}

inline std::optional<FscTuple> tuple_of_symbol(std::string_view symbol) {
  if (!symbol.starts_with("T_")) return std::nullopt;
  std::string text(symbol.substr(2));
  std::replace(text.begin(), text.end(), '_', ',');
  return parse_tuple(text);
}

// T([[q|Qs],[o|Os],[a|As],[q'|Qs1]], [Qs,Os,As,Qs1])
inline logic::Fact tuple_fact(const FscTuple& t) {
  const Term qs = Term::variable(0), os = Term::variable(1), as = Term::variable(2), qs1 = Term::variable(3);
  const Term in = Term::list({Term::cons(Term::atom(to_string(t.q)), qs), Term::cons(Term::atom(t.o.str()), os),
                              Term::cons(Term::atom(std::string(to_string(t.a))), as),
                              Term::cons(Term::atom(to_string(t.q_next)), qs1)});
  return logic::make_fact(tuple_symbol(t), in, Term::list({qs, os, as, qs1}));
}

/// First-order background Q x O x A x Q (960 predicates).
inline FactBase tuple_background() {
  FactBase facts;
  for (ControllerState q : LabelAlphabets::states())
    for (ObservationLabel o : LabelAlphabets::observations())
      for (Action a : LabelAlphabets::actions())
        for (ControllerState q1 : LabelAlphabets::states()) facts.add(tuple_fact({q, o, a, q1}));
  return facts;
}

/// Goal target([Qs,Os,As,Qs1], [[],[],[],[]]) for a behaviour.
inline Example behaviour_example(const Behaviour& b) {
  std::vector<Term> qs, os, as, qs1;
  for (const FscTuple& t : b) {
    qs.push_back(Term::atom(to_string(t.q)));
    os.push_back(Term::atom(t.o.str()));
    as.push_back(Term::atom(std::string(to_string(t.a))));
    qs1.push_back(Term::atom(to_string(t.q_next)));
  }
  return {Term::list({Term::list(qs), Term::list(os), Term::list(as), Term::list(qs1)}),
          Term::list({Term::nil(), Term::nil(), Term::nil(), Term::nil()})};
}

/// Ground 4-tuples named by the body predicates of a learned controller
/// program. Every tuple must be a predicate of `background`.
inline Fsc hypothesis_to_tuples(const Hypothesis& cp, const FactBase& background) {
  Fsc fsc;
  for (const MetaSubstitution& m : cp.metasubstitutions()) {
    const auto t = tuple_of_symbol(m.body);
    if (!t || !background.has_symbol(m.body))
      throw std::invalid_argument("clause body predicate " + m.body + " is not a background tuple");
    fsc.insert(*t);
  }
  return fsc;
}

}  // namespace gridfsc::mil
