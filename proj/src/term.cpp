#include "modelim/term.hpp"

#include <algorithm>
#include <cctype>

namespace modelim {

Term Term::variable(Symbol name) {
  auto node = std::make_shared<Node>();
  node->variable = true;
  node->ground = false;
  node->symbol = name;
  return Term(std::move(node));
}

Term Term::compound(Symbol functor, std::vector<Term> args) {
  auto node = std::make_shared<Node>();
  node->symbol = functor;
  for (const auto& a : args) {
    node->ground = node->ground && a.is_ground();
    node->depth = std::max(node->depth, a.depth() + 1);
  }
  node->args = std::move(args);
  return Term(std::move(node));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->variable != b.node_->variable || a.node_->symbol != b.node_->symbol ||
      a.node_->args.size() != b.node_->args.size() || a.node_->depth != b.node_->depth)
    return false;
  return std::equal(a.node_->args.begin(), a.node_->args.end(), b.node_->args.begin());
}

bool Literal::is_ground() const {
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

Literal opposite(const Literal& lit) {
  Literal out = lit;
  out.positive = !lit.positive;
  return out;
}

void Substitution::bind(Symbol var, Term value) {
  if (value.is_variable() && value.symbol() == var) {
    bindings_.erase(var);
    return;
  }
  bindings_.insert_or_assign(var, std::move(value));
}

const Term* Substitution::find(Symbol var) const {
  auto it = bindings_.find(var);
  return it == bindings_.end() ? nullptr : &it->second;
}

Term apply(const Substitution& s, const Term& t) {
  if (s.empty() || t.is_ground()) return t;
  if (t.is_variable()) {
    const Term* bound = s.find(t.symbol());
    return bound ? *bound : t;
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(apply(s, a));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::compound(t.symbol(), std::move(args)) : t;
}

Literal apply(const Substitution& s, const Literal& lit) {
  if (s.empty()) return lit;
  Literal out{lit.positive, lit.predicate, {}};
  out.args.reserve(lit.args.size());
  for (const auto& a : lit.args) out.args.push_back(apply(s, a));
  return out;
}

Substitution compose(const Substitution& s1, const Substitution& s2) {
  Substitution out;
  for (const auto& [var, value] : s1.bindings()) out.bind(var, apply(s2, value));
  for (const auto& [var, value] : s2.bindings())
    if (!s1.find(var)) out.bind(var, value);
  return out;
}

namespace {

bool occurs(Symbol var, const Term& t) {
  if (t.is_ground()) return false;
  if (t.is_variable()) return t.symbol() == var;
  return std::any_of(t.args().begin(), t.args().end(),
                     [&](const Term& a) { return occurs(var, a); });
}

bool bind_var(Substitution& s, Symbol var, const Term& value) {
  if (occurs(var, value)) return false;
  Substitution single;
  single.bind(var, value);
  s = compose(s, single);
  return true;
}

bool unify_into(Substitution& s, std::vector<std::pair<Term, Term>> work) {
  while (!work.empty()) {
    auto [a, b] = std::move(work.back());
    work.pop_back();
    a = apply(s, a);
    b = apply(s, b);
    if (a == b) continue;
    if (a.is_variable()) {
      if (!bind_var(s, a.symbol(), b)) return false;
      continue;
    }
    if (b.is_variable()) {
      if (!bind_var(s, b.symbol(), a)) return false;
      continue;
    }
    if (a.symbol() != b.symbol() || a.arity() != b.arity()) return false;
    // reversed so the leftmost argument pair is processed first
    for (std::size_t i = a.arity(); i-- > 0;) work.emplace_back(a.args()[i], b.args()[i]);
  }
  return true;
}

}  // namespace

std::optional<Substitution> unify_terms(const Term& a, const Term& b) {
  Substitution s;
  if (!unify_into(s, {{a, b}})) return std::nullopt;
  return s;
}

std::optional<Substitution> mgu(const Literal& a, const Literal& b) {
  if (a.positive != b.positive || a.predicate != b.predicate || a.args.size() != b.args.size())
    return std::nullopt;
  std::vector<std::pair<Term, Term>> work;
  for (std::size_t i = a.args.size(); i-- > 0;) work.emplace_back(a.args[i], b.args[i]);
  Substitution s;
  if (!unify_into(s, std::move(work))) return std::nullopt;
  return s;
}

bool match(const Term& pattern, const Term& target, Substitution& s) {
  if (pattern.is_variable()) {
    if (const Term* bound = s.find(pattern.symbol())) return *bound == target;
    s.bind(pattern.symbol(), target);
    return true;
  }
  if (target.is_variable() || pattern.symbol() != target.symbol() ||
      pattern.arity() != target.arity())
    return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match(pattern.args()[i], target.args()[i], s)) return false;
  return true;
}

bool match(const Literal& pattern, const Literal& target, Substitution& s) {
  if (pattern.positive != target.positive || pattern.predicate != target.predicate ||
      pattern.args.size() != target.args.size())
    return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!match(pattern.args[i], target.args[i], s)) return false;
  return true;
}

void collect_vars(const Term& t, VarSet& out) {
  if (t.is_ground()) return;
  if (t.is_variable()) {
    out.insert(t.symbol());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

void collect_vars(const Literal& lit, VarSet& out) {
  for (const auto& a : lit.args) collect_vars(a, out);
}

namespace {

void ordered_vars_into(const Term& t, std::vector<Symbol>& out) {
  if (t.is_ground()) return;
  if (t.is_variable()) {
    if (std::find(out.begin(), out.end(), t.symbol()) == out.end()) out.push_back(t.symbol());
    return;
  }
  for (const auto& a : t.args()) ordered_vars_into(a, out);
}

}  // namespace

std::vector<Symbol> ordered_vars(std::span<const Literal> lits) {
  std::vector<Symbol> out;
  for (const auto& lit : lits)
    for (const auto& a : lit.args) ordered_vars_into(a, out);
  return out;
}

Symbol FreshVars::fresh(Symbol original, const VarSet& avoid) {
  std::string base = original.name();
  while (!base.empty() && std::isdigit(static_cast<unsigned char>(base.back()))) base.pop_back();
  if (base.empty()) base = "X";
  for (;;) {
    Symbol candidate = Symbol::intern(base + std::to_string(++counter_));
    if (!avoid.contains(candidate)) return candidate;
  }
}

Substitution renaming(std::span<const Symbol> vars, const VarSet& avoid, FreshVars& fresh,
                      bool all) {
  Substitution out;
  VarSet blocked = avoid;
  blocked.insert(vars.begin(), vars.end());
  for (Symbol v : vars) {
    if (!all && !avoid.contains(v)) continue;
    Symbol renamed = fresh.fresh(v, blocked);
    blocked.insert(renamed);
    out.bind(v, Term::variable(renamed));
  }
  return out;
}

std::pair<Literal, Substitution> rename_apart(const Literal& lit, const VarSet& avoid,
                                              FreshVars& fresh) {
  auto vars = ordered_vars(std::span(&lit, 1));
  Substitution r = renaming(vars, avoid, fresh);
  return {apply(r, lit), r};
}

namespace {

void print(const Term& t, std::string& out) {
  out += t.symbol().name();
  if (t.is_variable() || t.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    print(t.args()[i], out);
  }
  out += ')';
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  print(t, out);
  return out;
}

std::string to_string(const Literal& lit) {
  std::string out = lit.positive ? "" : "~";
  out += lit.predicate.name();
  if (!lit.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < lit.args.size(); ++i) {
      if (i) out += ',';
      print(lit.args[i], out);
    }
    out += ')';
  }
  return out;
}

std::string to_string(const Substitution& s) {
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& [var, value] : s.bindings()) items.emplace_back(var.name(), to_string(value));
  std::sort(items.begin(), items.end());
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i].first + "->" + items[i].second;
  }
  return out + "}";
}

}  // namespace modelim
