#pragma once

#include <algorithm>
#include <cctype>
#include <concepts>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gridfsc/term.hpp"

namespace gridfsc::logic {

/// Dyadic literal P(input, output).
struct Literal {
  std::string predicate;
  Term input;
  Term output;
};

/// Dyadic background fact. Variables, if any, use local ids [0, var_count)
/// and are renamed apart each time the fact is used.
struct Fact {
  std::string predicate;
  Term input;
  Term output;
  std::size_t var_count = 0;
};

inline Fact make_fact(std::string predicate, Term input, Term output) {
  const std::size_t n = std::max(variable_span(input), variable_span(output));
  return Fact{std::move(predicate), std::move(input), std::move(output), n};
}

inline std::string to_string(const Fact& f) {
  return f.predicate + "(" + to_string(f.input) + "," + to_string(f.output) + ")";
}

/// Definite clause over dyadic literals; variables use local ids.
struct DefiniteClause {
  Literal head;
  std::vector<Literal> body;
  std::size_t var_count = 0;
};

inline DefiniteClause make_clause(Literal head, std::vector<Literal> body) {
  std::size_t n = std::max(variable_span(head.input), variable_span(head.output));
  for (const Literal& l : body) n = std::max({n, variable_span(l.input), variable_span(l.output)});
  return DefiniteClause{std::move(head), std::move(body), n};
}

namespace detail {
inline void write_arg(std::string& out, const Term& t, std::map<std::size_t, int>& names) {
  if (t.is_variable()) {
    auto [it, fresh] = names.try_emplace(t.var_id(), static_cast<int>(names.size()) + 1);
    out += "s" + std::to_string(it->second);
    return;
  }
  write_term(out, t);
}
inline void write_literal(std::string& out, const Literal& l, std::map<std::size_t, int>& names) {
  out += l.predicate;
  out.push_back('(');
  write_arg(out, l.input, names);
  out.push_back(',');
  write_arg(out, l.output, names);
  out.push_back(')');
}
}  // namespace detail

/// Clause text with variables renamed s1, s2, ... by first occurrence, e.g.
/// "S(s1,s2) <- Step_down(s1,s3),S(s3,s2)." Two clauses that are variants
/// of each other print identically.
inline std::string to_string(const DefiniteClause& c) {
  std::map<std::size_t, int> names;
  std::string out;
  detail::write_literal(out, c.head, names);
  if (!c.body.empty()) {
    out += " <- ";
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (i) out.push_back(',');
      detail::write_literal(out, c.body[i], names);
    }
  }
  out.push_back('.');
  return out;
}

class ClauseFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads the clause notation written by to_string. Every argument is a
/// variable name; equal names denote the same variable.
inline DefiniteClause parse_clause(std::string_view text) {
  std::size_t pos = 0;
  std::map<std::string, std::size_t> vars;
  auto fail = [&](const std::string& why) -> ClauseFormatError {
    return ClauseFormatError("cannot parse clause '" + std::string(text) + "': " + why);
  };
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto ident = [&]() -> std::string {
    skip_ws();
    const std::size_t begin = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
    if (begin == pos) throw fail("expected an identifier at offset " + std::to_string(begin));
    return std::string(text.substr(begin, pos - begin));
  };
  auto expect = [&](std::string_view tok) {
    skip_ws();
    if (text.substr(pos, tok.size()) != tok) throw fail("expected '" + std::string(tok) + "'");
    pos += tok.size();
  };
  auto variable = [&]() {
    const std::string name = ident();
    auto [it, fresh] = vars.try_emplace(name, vars.size());
    return Term::variable(it->second);
  };
  auto literal = [&]() {
    Literal l;
    l.predicate = ident();
    expect("(");
    l.input = variable();
    expect(",");
    l.output = variable();
    expect(")");
    return l;
  };

  Literal head = literal();
  std::vector<Literal> body;
  skip_ws();
  if (text.substr(pos, 2) == "<-" || text.substr(pos, 2) == ":-") {
    pos += 2;
    body.push_back(literal());
    skip_ws();
    while (pos < text.size() && text[pos] == ',') {
      ++pos;
      body.push_back(literal());
      skip_ws();
    }
  }
  expect(".");
  skip_ws();
  if (pos != text.size()) throw fail("trailing text");
  return make_clause(std::move(head), std::move(body));
}

/// Background facts indexed by predicate and, for ground inputs, by input term.
class FactBase {
 public:
  FactBase() = default;
  explicit FactBase(std::vector<Fact> facts) {
    for (Fact& f : facts) add(std::move(f));
  }

  void add(Fact f) {
    const std::size_t i = facts_.size();
    auto& pred = predicates_[f.predicate];
    pred.all.push_back(i);
    if (is_ground(f.input)) pred.by_input[to_string(f.input)].push_back(i);
    else pred.open.push_back(i);
    facts_.push_back(std::move(f));
  }

  const std::vector<Fact>& facts() const noexcept { return facts_; }
  const Fact& fact(std::size_t i) const { return facts_.at(i); }
  std::size_t size() const noexcept { return facts_.size(); }

  // Predicate symbols in sorted order.
  std::vector<std::string> symbols() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : predicates_) out.push_back(name);
    return out;
  }
  bool has_symbol(const std::string& p) const { return predicates_.contains(p); }

  bool all_ground() const {
    return std::all_of(facts_.begin(), facts_.end(),
                       [](const Fact& f) { return f.var_count == 0; });
  }

  /// Indices of facts of `predicate` whose input may unify with `input`
  /// (already resolved), in insertion order.
  std::vector<std::size_t> candidates(const std::string& predicate, const Term& input) const {
    const auto p = predicates_.find(predicate);
    if (p == predicates_.end()) return {};
    if (!is_ground(input)) return p->second.all;
    std::vector<std::size_t> out = p->second.open;
    if (const auto hit = p->second.by_input.find(to_string(input)); hit != p->second.by_input.end()) {
      out.insert(out.end(), hit->second.begin(), hit->second.end());
      std::sort(out.begin(), out.end());
    }
    return out;
  }

 private:
  struct PredicateIndex {
    std::vector<std::size_t> all;
    std::vector<std::size_t> open;
    std::unordered_map<std::string, std::vector<std::size_t>> by_input;
  };
  std::vector<Fact> facts_;
  std::map<std::string, PredicateIndex> predicates_;
};

class ResolutionLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A background fact used in a derivation, with its arguments as bound at
/// the end of the derivation.
struct ResolvedStep {
  std::size_t fact = 0;
  Term input;
  Term output;
};

struct SearchLimits {
  std::size_t max_resolutions = 50'000'000;
};

// Memo key for a state: nullopt disables memoization for that call.
template <typename F>
concept StateKeyFn = requires(F f, const Term& t) {
  { f(t) } -> std::convertible_to<std::optional<std::string>>;
};

/// Memo key = the whole state term, when ground.
struct GroundStateKey {
  std::optional<std::string> operator()(const Term& t) const {
    if (!is_ground(t)) return std::nullopt;
    return to_string(t);
  }
};

/// Memo key = the first `n` elements of a list-shaped state, when ground.
/// For grid states [Id, X/Y, ...] with n = 2 this keys on the position.
struct ListPrefixKey {
  std::size_t n = 2;
  std::optional<std::string> operator()(const Term& t) const {
    std::string key;
    const Term* cur = &t;
    for (std::size_t i = 0; i < n; ++i) {
      if (!cur->is_cons() || !is_ground(cur->arg(0))) return std::nullopt;
      write_term(key, cur->arg(0));
      key.push_back(';');
      cur = &cur->arg(1);
    }
    return key;
  }
};

/// Depth-first SLD resolution of target(goal_in, goal_out) against `program`
/// (clauses whose head predicate is `target`) and `facts`. Clauses and facts
/// are tried in order. Every call to `target` is memoized on key(first arg):
/// a state already entered during this search is not entered again, which
/// makes the search terminate on cyclic state graphs.
/// Returns the facts used by the first refutation, or nullopt.
template <StateKeyFn KeyFn = GroundStateKey>
std::optional<std::vector<ResolvedStep>> first_derivation(const std::vector<DefiniteClause>& program,
                                                          const std::string& target,
                                                          const FactBase& facts, const Term& goal_in,
                                                          const Term& goal_out, Bindings& bindings,
                                                          KeyFn key = {}, SearchLimits limits = {}) {
  struct GoalNode {
    Literal goal;
    std::shared_ptr<const GoalNode> next;
  };
  using GoalList = std::shared_ptr<const GoalNode>;
  struct ChoicePoint {
    GoalList goals;
    std::vector<std::size_t> alternatives;
    std::size_t next = 0;
    std::size_t trail_mark = 0;
    std::size_t plan_size = 0;
    bool is_target = false;
  };
  struct Used {
    std::size_t fact;
    Term input;
    Term output;
  };

  std::unordered_set<std::string> visited;
  std::vector<ChoicePoint> choices;
  std::vector<Used> plan;
  std::size_t resolutions = 0;

  GoalList goals = std::make_shared<const GoalNode>(GoalNode{Literal{target, goal_in, goal_out}, nullptr});

  for (;;) {
    if (!goals) {
      std::vector<ResolvedStep> out;
      out.reserve(plan.size());
      for (const Used& u : plan) out.push_back({u.fact, bindings.resolve(u.input), bindings.resolve(u.output)});
      return out;
    }

    // Select the leftmost goal and open a choice point for it.
    const Literal& g = goals->goal;
    if (g.predicate == target) {
      const auto k = key(bindings.resolve(g.input));
      if (!k || visited.insert(*k).second) {
        ChoicePoint cp{goals, {}, 0, bindings.mark(), plan.size(), true};
        cp.alternatives.resize(program.size());
        for (std::size_t i = 0; i < program.size(); ++i) cp.alternatives[i] = i;
        choices.push_back(std::move(cp));
      }
    } else {
      choices.push_back(ChoicePoint{goals, facts.candidates(g.predicate, bindings.resolve(g.input)), 0,
                                    bindings.mark(), plan.size(), false});
    }

    // Take the next alternative of the newest live choice point.
    bool advanced = false;
    while (!choices.empty() && !advanced) {
      ChoicePoint& cp = choices.back();
      if (cp.next >= cp.alternatives.size()) {
        bindings.undo(cp.trail_mark);
        choices.pop_back();
        continue;
      }
      const std::size_t alt = cp.alternatives[cp.next++];
      bindings.undo(cp.trail_mark);
      plan.resize(cp.plan_size, Used{0, Term(), Term()});
      if (++resolutions > limits.max_resolutions)
        throw ResolutionLimitExceeded("resolution limit of " + std::to_string(limits.max_resolutions) + " reached");

      const Literal& goal = cp.goals->goal;
      if (cp.is_target) {
        const DefiniteClause& c = program[alt];
        const std::size_t base = bindings.fresh_block(c.var_count);
        if (!bindings.unify(rename(c.head.input, base), goal.input) ||
            !bindings.unify(rename(c.head.output, base), goal.output))
          continue;
        GoalList rest = cp.goals->next;
        for (auto it = c.body.rbegin(); it != c.body.rend(); ++it) {
          rest = std::make_shared<const GoalNode>(
              GoalNode{Literal{it->predicate, rename(it->input, base), rename(it->output, base)}, rest});
        }
        goals = rest;
        advanced = true;
      } else {
        const Fact& f = facts.fact(alt);
        const std::size_t base = bindings.fresh_block(f.var_count);
        const Term in = rename(f.input, base);
        const Term out = rename(f.output, base);
        if (!bindings.unify(in, goal.input) || !bindings.unify(out, goal.output)) continue;
        plan.push_back(Used{alt, in, out});
        goals = cp.goals->next;
        advanced = true;
      }
    }
    if (!advanced) return std::nullopt;
  }
}

}  // namespace gridfsc::logic
