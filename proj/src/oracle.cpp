#include "modelim/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace modelim {

int AtomTable::id(const Literal& lit) {
  Literal atom = lit;
  atom.positive = true;
  auto key = to_string(atom);
  auto [it, inserted] = ids_.try_emplace(key, static_cast<int>(atoms_.size() + 1));
  if (inserted) atoms_.push_back(std::move(atom));
  return it->second;
}

int AtomTable::find(const Literal& lit) const {
  Literal atom = lit;
  atom.positive = true;
  auto it = ids_.find(to_string(atom));
  return it == ids_.end() ? 0 : it->second;
}

PropClause encode(const std::vector<Literal>& lits, AtomTable& atoms) {
  PropClause out;
  out.reserve(lits.size());
  for (const auto& l : lits) {
    if (!l.is_ground()) throw std::invalid_argument("oracle: non-ground literal " + to_string(l));
    int v = atoms.id(l);
    out.push_back(l.positive ? v : -v);
  }
  return out;
}

std::vector<PropClause> encode(const ClauseSet& gamma, AtomTable& atoms) {
  std::vector<PropClause> out;
  out.reserve(gamma.size());
  for (const auto& c : gamma.clauses()) out.push_back(encode(c.literals(), atoms));
  return out;
}

namespace {

using Assignment = std::vector<signed char>;  // 0 unassigned, 1 true, -1 false

signed char value_of(const Assignment& a, int lit) {
  signed char v = a[static_cast<std::size_t>(std::abs(lit))];
  return lit > 0 ? v : static_cast<signed char>(-v);
}

// false on conflict
bool propagate(const std::vector<PropClause>& clauses, Assignment& a) {
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : clauses) {
      int unassigned = 0, last = 0;
      bool satisfied = false;
      for (int lit : c) {
        signed char v = value_of(a, lit);
        if (v > 0) { satisfied = true; break; }
        if (v == 0) { ++unassigned; last = lit; }
      }
      if (satisfied) continue;
      if (unassigned == 0) return false;
      if (unassigned == 1) {
        a[static_cast<std::size_t>(std::abs(last))] = last > 0 ? 1 : -1;
        changed = true;
      }
    }
  }
  return true;
}

bool dpll(const std::vector<PropClause>& clauses, Assignment& a) {
  if (!propagate(clauses, a)) return false;
  int branch = 0;
  for (const auto& c : clauses) {
    bool satisfied = false;
    int free_lit = 0;
    for (int lit : c) {
      signed char v = value_of(a, lit);
      if (v > 0) { satisfied = true; break; }
      if (v == 0 && !free_lit) free_lit = lit;
    }
    if (!satisfied) { branch = free_lit; break; }
  }
  if (!branch) return true;
  for (signed char polarity : {1, -1}) {
    Assignment trial = a;
    trial[static_cast<std::size_t>(std::abs(branch))] = branch > 0 ? polarity : -polarity;
    if (dpll(clauses, trial)) {
      a = std::move(trial);
      return true;
    }
  }
  return false;
}

}  // namespace

bool dpll_satisfiable(const std::vector<PropClause>& clauses, int num_vars,
                      std::vector<bool>* model) {
  Assignment a(static_cast<std::size_t>(num_vars) + 1, 0);
  if (!dpll(clauses, a)) return false;
  if (model) {
    model->assign(a.size(), false);
    for (std::size_t v = 1; v < a.size(); ++v) (*model)[v] = a[v] > 0;
  }
  return true;
}

bool truth_table_satisfiable(const std::vector<PropClause>& clauses, int num_vars,
                             std::vector<bool>* model) {
  if (num_vars > 24) throw OracleLimitError("truth table limited to 24 variables");
  const std::uint64_t total = std::uint64_t{1} << num_vars;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    auto holds = [&](int lit) {
      bool v = (bits >> (std::abs(lit) - 1)) & 1;
      return lit > 0 ? v : !v;
    };
    bool all = std::all_of(clauses.begin(), clauses.end(), [&](const PropClause& c) {
      return std::any_of(c.begin(), c.end(), holds);
    });
    if (!all) continue;
    if (model) {
      model->assign(static_cast<std::size_t>(num_vars) + 1, false);
      for (int v = 1; v <= num_vars; ++v) (*model)[static_cast<std::size_t>(v)] = holds(v);
    }
    return true;
  }
  return false;
}

void Oracle::check_bound(const AtomTable& atoms) const {
  if (atoms.size() > config_.max_vars)
    throw OracleLimitError("oracle: " + std::to_string(atoms.size()) +
                           " propositional variables exceed the bound of " +
                           std::to_string(config_.max_vars));
}

SatResult Oracle::satisfiable(const ClauseSet& gamma) const {
  AtomTable atoms;
  auto clauses = encode(gamma, atoms);
  check_bound(atoms);
  std::vector<bool> model;
  SatResult out;
  out.satisfiable = dpll_satisfiable(clauses, static_cast<int>(atoms.size()), &model);
  if (out.satisfiable)
    for (std::size_t i = 0; i < atoms.size(); ++i) out.model.emplace_back(atoms.atoms()[i], model[i + 1]);
  return out;
}

bool Oracle::entails(const ClauseSet& gamma, const Formula& phi) const {
  AtomTable atoms;
  auto clauses = encode(gamma, atoms);
  for (const auto& c : clausify(Formula::neg(phi))) clauses.push_back(encode(c, atoms));
  check_bound(atoms);
  return !dpll_satisfiable(clauses, static_cast<int>(atoms.size()));
}

MinimalUnsatSubset Oracle::minimal_unsat_subset(const ClauseSet& gamma) const {
  AtomTable atoms;
  auto clauses = encode(gamma, atoms);
  check_bound(atoms);
  const int n = static_cast<int>(atoms.size());
  if (dpll_satisfiable(clauses, n)) throw SatisfiableInputError("minimal_unsat_subset: input is satisfiable");

  std::vector<bool> keep(clauses.size(), true);
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    keep[i] = false;
    std::vector<PropClause> trial;
    for (std::size_t j = 0; j < clauses.size(); ++j)
      if (keep[j]) trial.push_back(clauses[j]);
    if (dpll_satisfiable(trial, n)) keep[i] = true;
  }
  MinimalUnsatSubset out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (!keep[i]) continue;
    out.indices.push_back(i);
    out.clauses.add(gamma[i]);
  }
  return out;
}

namespace {

void scan_symbols(const Term& t, std::map<std::string, Symbol>& constants,
                  std::map<std::string, FunctionSymbol>& functions) {
  if (t.is_variable()) return;
  if (t.arity() == 0)
    constants.emplace(t.symbol().name(), t.symbol());
  else
    functions.emplace(t.symbol().name(), FunctionSymbol{t.symbol(), t.arity()});
  for (const auto& a : t.args()) scan_symbols(a, constants, functions);
}

void scan_symbols(const ClauseSet& gamma, std::map<std::string, Symbol>& constants,
                  std::map<std::string, FunctionSymbol>& functions) {
  for (const auto& c : gamma.clauses())
    for (const auto& e : c.entries())
      for (const auto& a : e.literal.args) scan_symbols(a, constants, functions);
}

}  // namespace

GroundingSpec grounding_spec_for(const ClauseSet& gamma, unsigned max_term_depth) {
  std::map<std::string, Symbol> constants;
  std::map<std::string, FunctionSymbol> functions;
  scan_symbols(gamma, constants, functions);
  GroundingSpec spec;
  spec.max_term_depth = max_term_depth;
  for (const auto& [name, sym] : constants) spec.constants.push_back(sym);
  if (spec.constants.empty()) {
    std::string name = "c0";
    for (int i = 1; functions.contains(name); ++i) name = "c" + std::to_string(i);
    spec.constants.push_back(Symbol::intern(name));
  }
  return spec;
}

std::vector<FunctionSymbol> function_symbols(const ClauseSet& gamma) {
  std::map<std::string, Symbol> constants;
  std::map<std::string, FunctionSymbol> functions;
  scan_symbols(gamma, constants, functions);
  std::vector<FunctionSymbol> out;
  for (const auto& [name, f] : functions) out.push_back(f);
  return out;
}

std::vector<Term> herbrand_universe(const std::vector<Symbol>& constants,
                                    const std::vector<FunctionSymbol>& functions,
                                    unsigned max_depth) {
  auto by_text = [](const Term& a, const Term& b) { return to_string(a) < to_string(b); };
  std::vector<Term> universe;
  for (Symbol c : constants) universe.push_back(Term::compound(c));
  std::sort(universe.begin(), universe.end(), by_text);
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

  for (unsigned depth = 1; depth <= max_depth; ++depth) {
    std::vector<Term> level;
    const std::vector<Term> shallower = universe;
    for (const auto& f : functions) {
      std::vector<std::size_t> pick(f.arity, 0);
      for (;;) {
        std::vector<Term> args;
        std::uint32_t deepest = 0;
        for (std::size_t i : pick) {
          args.push_back(shallower[i]);
          deepest = std::max(deepest, shallower[i].depth());
        }
        if (deepest + 1 == depth) level.push_back(Term::compound(f.name, std::move(args)));
        std::size_t k = f.arity;
        while (k > 0 && ++pick[k - 1] == shallower.size()) pick[--k] = 0;
        if (k == 0) break;
      }
    }
    std::sort(level.begin(), level.end(), by_text);
    universe.insert(universe.end(), level.begin(), level.end());
  }
  return universe;
}

Grounding ground(const ClauseSet& gamma, const GroundingSpec& spec) {
  auto universe = herbrand_universe(spec.constants, function_symbols(gamma), spec.max_term_depth);
  auto within_depth = [&](const Chain& c) {
    for (const auto& e : c.entries())
      for (const auto& a : e.literal.args)
        if (a.depth() > spec.max_term_depth) return false;
    return true;
  };

  Grounding out;
  for (std::size_t ci = 0; ci < gamma.size(); ++ci) {
    const Clause& clause = gamma[ci];
    auto vars = ordered_vars(clause);
    std::vector<std::size_t> pick(vars.size(), 0);
    if (!vars.empty() && universe.empty()) continue;
    for (;;) {
      Substitution s;
      for (std::size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], universe[pick[i]]);
      Chain instance = apply(s, clause);
      if (within_depth(instance)) {
        if (out.clauses.size() >= spec.max_clauses)
          throw GroundingLimitError("grounding exceeds " + std::to_string(spec.max_clauses) +
                                    " clauses");
        out.clauses.add(std::move(instance));
        out.origins.push_back({ci, std::move(s)});
      }
      std::size_t k = vars.size();
      while (k > 0 && ++pick[k - 1] == universe.size()) pick[--k] = 0;
      if (k == 0) break;
    }
  }
  return out;
}

}  // namespace modelim
