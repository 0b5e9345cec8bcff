#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gridfsc::logic {

/// First-order term: atom, integer, variable or compound. Lists use the
/// usual '[|]'/2 cells terminated by the atom '[]'. Terms share structure and
/// are cheap to copy.
class Term {
 public:
  enum class Kind : unsigned char { atom, integer, variable, compound };

  Term() : Term(atom("[]")) {}

  static Term atom(std::string name) {
    return Term(std::make_shared<const Node>(Node{Kind::atom, std::move(name), 0, {}}));
  }
  static Term integer(long value) {
    return Term(std::make_shared<const Node>(Node{Kind::integer, {}, value, {}}));
  }
  static Term variable(std::size_t id) {
    return Term(std::make_shared<const Node>(Node{Kind::variable, {}, static_cast<long>(id), {}}));
  }
  static Term compound(std::string functor, std::vector<Term> args) {
    if (args.empty()) return atom(std::move(functor));
    return Term(std::make_shared<const Node>(Node{Kind::compound, std::move(functor), 0, std::move(args)}));
  }
  static Term nil() {
    static const Term empty = atom("[]");
    return empty;
  }
  static Term cons(Term head, Term tail) { return compound("[|]", {std::move(head), std::move(tail)}); }
  static Term list(std::vector<Term> items, Term tail = nil()) {
    Term out = std::move(tail);
    for (auto it = items.rbegin(); it != items.rend(); ++it) out = cons(std::move(*it), std::move(out));
    return out;
  }
  static Term slash(Term a, Term b) { return compound("/", {std::move(a), std::move(b)}); }

  Kind kind() const noexcept { return node_->kind; }
  bool is_atom() const noexcept { return node_->kind == Kind::atom; }
  bool is_integer() const noexcept { return node_->kind == Kind::integer; }
  bool is_variable() const noexcept { return node_->kind == Kind::variable; }
  bool is_compound() const noexcept { return node_->kind == Kind::compound; }
  bool is_nil() const noexcept { return is_atom() && node_->name == "[]"; }
  bool is_cons() const noexcept { return is_compound() && node_->name == "[|]" && node_->args.size() == 2; }

  const std::string& name() const noexcept { return node_->name; }
  long value() const noexcept { return node_->value; }
  std::size_t var_id() const noexcept { return static_cast<std::size_t>(node_->value); }
  std::span<const Term> args() const noexcept { return node_->args; }
  std::size_t arity() const noexcept { return node_->args.size(); }
  const Term& arg(std::size_t i) const { return node_->args.at(i); }

  bool same_node(const Term& o) const noexcept { return node_ == o.node_; }

 private:
  struct Node {
    Kind kind;
    std::string name;
    long value;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Structural equality, variables compared by id (no substitution applied).
inline bool identical(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::atom: return a.name() == b.name();
    case Term::Kind::integer:
    case Term::Kind::variable: return a.value() == b.value();
    case Term::Kind::compound:
      if (a.name() != b.name() || a.arity() != b.arity()) return false;
      for (std::size_t i = 0; i < a.arity(); ++i)
        if (!identical(a.arg(i), b.arg(i))) return false;
      return true;
  }
  return false;
}

inline bool is_ground(const Term& t) {
  if (t.is_variable()) return false;
  for (const Term& a : t.args())
    if (!is_ground(a)) return false;
  return true;
}

// Largest variable id + 1, or 0 when the term has no variables.
inline std::size_t variable_span(const Term& t) {
  if (t.is_variable()) return t.var_id() + 1;
  std::size_t n = 0;
  for (const Term& a : t.args()) n = std::max(n, variable_span(a));
  return n;
}

/// Shifts every variable id by `base` (renaming a clause apart).
inline Term rename(const Term& t, std::size_t base) {
  if (base == 0) return t;
  if (t.is_variable()) return Term::variable(t.var_id() + base);
  if (!t.is_compound()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(rename(a, base));
    changed = changed || !args.back().same_node(a);
  }
  return changed ? Term::compound(t.name(), std::move(args)) : t;
}

inline void write_term(std::string& out, const Term& t);

inline std::string to_string(const Term& t) {
  std::string out;
  write_term(out, t);
  return out;
}

inline void write_term(std::string& out, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::atom: out += t.name(); return;
    case Term::Kind::integer: out += std::to_string(t.value()); return;
    case Term::Kind::variable: out += "_G" + std::to_string(t.var_id()); return;
    case Term::Kind::compound: break;
  }
  if (t.is_cons()) {
    out.push_back('[');
    const Term* cur = &t;
    bool first = true;
    while (cur->is_cons()) {
      if (!first) out.push_back(',');
      write_term(out, cur->arg(0));
      first = false;
      cur = &cur->arg(1);
    }
    if (!cur->is_nil()) {
      out.push_back('|');
      write_term(out, *cur);
    }
    out.push_back(']');
    return;
  }
  if (t.name() == "/" && t.arity() == 2) {
    write_term(out, t.arg(0));
    out.push_back('/');
    write_term(out, t.arg(1));
    return;
  }
  out += t.name();
  out.push_back('(');
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out.push_back(',');
    write_term(out, t.arg(i));
  }
  out.push_back(')');
}

/// Variable store with a trail, for depth-first resolution. Bindings made
/// after mark() are undone by undo(mark).
class Bindings {
 public:
  // Reserves `n` fresh variable ids and returns the first.
  std::size_t fresh_block(std::size_t n) {
    const std::size_t base = slots_.size();
    slots_.resize(slots_.size() + n);
    return base;
  }
  Term fresh() { return Term::variable(fresh_block(1)); }

  std::size_t mark() const noexcept { return trail_.size(); }
  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      slots_[trail_.back()].reset();
      trail_.pop_back();
    }
  }

  Term deref(Term t) const {
    while (t.is_variable()) {
      const std::size_t id = t.var_id();
      if (id >= slots_.size() || !slots_[id]) break;
      t = *slots_[id];
    }
    return t;
  }

  /// Applies the current substitution throughout `t`.
  Term resolve(const Term& t) const {
    Term d = deref(t);
    if (!d.is_compound()) return d;
    std::vector<Term> args;
    args.reserve(d.arity());
    bool changed = false;
    for (const Term& a : d.args()) {
      args.push_back(resolve(a));
      changed = changed || !args.back().same_node(a);
    }
    return changed ? Term::compound(d.name(), std::move(args)) : d;
  }

  // Robinson unification without occurs check.
  bool unify(const Term& a, const Term& b) {
    const Term x = deref(a);
    const Term y = deref(b);
    if (x.same_node(y)) return true;
    if (x.is_variable()) {
      if (y.is_variable() && y.var_id() == x.var_id()) return true;
      bind(x.var_id(), y);
      return true;
    }
    if (y.is_variable()) {
      bind(y.var_id(), x);
      return true;
    }
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case Term::Kind::atom: return x.name() == y.name();
      case Term::Kind::integer: return x.value() == y.value();
      case Term::Kind::compound:
        if (x.name() != y.name() || x.arity() != y.arity()) return false;
        for (std::size_t i = 0; i < x.arity(); ++i)
          if (!unify(x.arg(i), y.arg(i))) return false;
        return true;
      case Term::Kind::variable: break;
    }
    return false;
  }

 private:
  void bind(std::size_t id, Term value) {
    if (id >= slots_.size()) slots_.resize(id + 1);
    slots_[id] = std::move(value);
    trail_.push_back(id);
  }

  std::vector<std::optional<Term>> slots_;
  std::vector<std::size_t> trail_;
};

// Elements of a proper list; nullopt when `t` is not a nil-terminated list.
inline std::optional<std::vector<Term>> list_items(const Term& t) {
  std::vector<Term> out;
  const Term* cur = &t;
  while (cur->is_cons()) {
    out.push_back(cur->arg(0));
    cur = &cur->arg(1);
  }
  if (!cur->is_nil()) return std::nullopt;
  return out;
}

}  // namespace gridfsc::logic
