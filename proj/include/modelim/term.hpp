#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "modelim/symbol.hpp"

namespace modelim {

// First-order term: a variable or a function application. Constants are
// applications with no arguments. Terms are immutable and share structure.
class Term {
public:
  static Term variable(Symbol name);
  static Term variable(std::string_view name) { return variable(Symbol::intern(name)); }
  static Term compound(Symbol functor, std::vector<Term> args = {});
  static Term compound(std::string_view functor, std::vector<Term> args = {}) {
    return compound(Symbol::intern(functor), std::move(args));
  }

  bool is_variable() const { return node_->variable; }
  bool is_ground() const { return node_->ground; }
  Symbol symbol() const { return node_->symbol; }
  std::span<const Term> args() const { return node_->args; }
  std::size_t arity() const { return node_->args.size(); }
  // constants and variables have depth 0
  std::uint32_t depth() const { return node_->depth; }

  friend bool operator==(const Term& a, const Term& b);

private:
  struct Node {
    bool variable = false;
    bool ground = true;
    std::uint32_t depth = 0;
    Symbol symbol;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

using VarSet = std::set<Symbol>;

struct Literal {
  bool positive = true;
  Symbol predicate;
  std::vector<Term> args;

  static Literal make(bool positive, std::string_view predicate, std::vector<Term> args = {}) {
    return Literal{positive, Symbol::intern(predicate), std::move(args)};
  }

  bool is_ground() const;
  friend bool operator==(const Literal&, const Literal&) = default;
};

Literal opposite(const Literal& lit);

// Finite map from variables to terms. Never stores a binding X -> X.
class Substitution {
public:
  Substitution() = default;

  void bind(Symbol var, Term value);
  const Term* find(Symbol var) const;
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<Symbol, Term>& bindings() const { return bindings_; }

  friend bool operator==(const Substitution&, const Substitution&) = default;

private:
  std::map<Symbol, Term> bindings_;
};

Term apply(const Substitution& s, const Term& t);
Literal apply(const Substitution& s, const Literal& lit);

// apply(compose(s1, s2), t) == apply(s2, apply(s1, t))
Substitution compose(const Substitution& s1, const Substitution& s2);

// Robinson unification with occurs check. Both literals must have the same
// sign and predicate; callers unify against opposite() where needed.
std::optional<Substitution> mgu(const Literal& a, const Literal& b);
std::optional<Substitution> unify_terms(const Term& a, const Term& b);

// One-way matching: finds s with apply(s, pattern) == target, extending `s`.
bool match(const Term& pattern, const Term& target, Substitution& s);
bool match(const Literal& pattern, const Literal& target, Substitution& s);

void collect_vars(const Term& t, VarSet& out);
void collect_vars(const Literal& lit, VarSet& out);

// Variables in first-occurrence order, without duplicates.
std::vector<Symbol> ordered_vars(std::span<const Literal> lits);

// Fresh variables are named <base><counter>, where base is the original name
// with trailing digits stripped. The counter belongs to one derivation.
class FreshVars {
public:
  Symbol fresh(Symbol original, const VarSet& avoid);
  std::uint64_t counter() const { return counter_; }
  void reset(std::uint64_t counter = 0) { counter_ = counter; }

private:
  std::uint64_t counter_ = 0;
};

// Renames, in first-occurrence order, the variables of `vars` that occur in
// `avoid` (or all of them when `all` is set). Fresh names also avoid `vars`.
Substitution renaming(std::span<const Symbol> vars, const VarSet& avoid, FreshVars& fresh,
                      bool all = false);

std::pair<Literal, Substitution> rename_apart(const Literal& lit, const VarSet& avoid,
                                              FreshVars& fresh);

std::string to_string(const Term& t);
std::string to_string(const Literal& lit);
// `{X->t,Y->u}` with bindings sorted by variable name
std::string to_string(const Substitution& s);

}  // namespace modelim
