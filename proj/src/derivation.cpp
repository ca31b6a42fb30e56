#include "modelim/derivation.hpp"
#include "modelim/io.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace modelim {

namespace {

using VarMap = std::map<Symbol, Symbol>;

bool variant_terms(const Term& a, const Term& b, VarMap& fwd, VarMap& bwd) {
  if (a.is_variable() != b.is_variable()) return false;
  if (a.is_variable()) {
    auto [fi, fnew] = fwd.try_emplace(a.symbol(), b.symbol());
    auto [bi, bnew] = bwd.try_emplace(b.symbol(), a.symbol());
    return fi->second == b.symbol() && bi->second == a.symbol();
  }
  if (a.symbol() != b.symbol() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!variant_terms(a.args()[i], b.args()[i], fwd, bwd)) return false;
  return true;
}

bool variant_literals(const Literal& a, const Literal& b, VarMap& fwd, VarMap& bwd) {
  if (a.positive != b.positive || a.predicate != b.predicate || a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!variant_terms(a.args[i], b.args[i], fwd, bwd)) return false;
  return true;
}

bool variant_bindings(const std::vector<std::pair<Symbol, Term>>& a,
                      const std::vector<std::pair<Symbol, Term>>& b, std::vector<bool>& used,
                      std::size_t i, const VarMap& fwd, const VarMap& bwd) {
  if (i == a.size()) return true;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (used[j]) continue;
    VarMap f = fwd, r = bwd;
    if (!variant_terms(Term::variable(a[i].first), Term::variable(b[j].first), f, r)) continue;
    if (!variant_terms(a[i].second, b[j].second, f, r)) continue;
    used[j] = true;
    if (variant_bindings(a, b, used, i + 1, f, r)) return true;
    used[j] = false;
  }
  return false;
}

bool same_chain(const Chain& expected, const Chain& recorded) {
  return expected == recorded || is_variant(expected, recorded);
}

bool same_unifier(const Substitution& expected, const Substitution& recorded) {
  return expected == recorded || equal_up_to_renaming(expected, recorded);
}

bool same_lemma(const Lemma& expected, const Lemma& recorded) {
  return same_literals(expected, recorded) || is_variant(expected.as_chain(), recorded.as_chain());
}

}  // namespace

bool is_variant(const Chain& a, const Chain& b) {
  if (a.size() != b.size()) return false;
  VarMap fwd, bwd;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.entries()[i];
    const auto& y = b.entries()[i];
    if (x.ancestor != y.ancestor || x.scope != y.scope) return false;
    if (!variant_literals(x.literal, y.literal, fwd, bwd)) return false;
  }
  return true;
}

bool equal_up_to_renaming(const Substitution& a, const Substitution& b) {
  if (a.size() != b.size()) return false;
  std::vector<std::pair<Symbol, Term>> xs(a.bindings().begin(), a.bindings().end());
  std::vector<std::pair<Symbol, Term>> ys(b.bindings().begin(), b.bindings().end());
  std::vector<bool> used(ys.size(), false);
  return variant_bindings(xs, ys, used, 0, {}, {});
}

CheckReport check_trace(const DerivationTrace& trace, const ClauseSet& gamma,
                        const CheckOptions& options) {
  CheckReport report;
  if (!options.digest.empty() && trace.problem_digest != options.digest) {
    report.digest_mismatch = true;
    report.error = "problem digest mismatch: trace has " + trace.problem_digest + ", problem is " +
                   options.digest;
    return report;
  }
  if (trace.steps.empty() || trace.steps.front().kind != StepKind::start) {
    report.error = "trace must begin with a start step";
    return report;
  }
  const Step& start = trace.steps.front();
  if (start.clause_index >= gamma.size()) {
    report.error = "start clause index " + std::to_string(start.clause_index) + " out of range";
    return report;
  }

  std::vector<const Clause*> pool;
  for (const auto& c : gamma.clauses()) pool.push_back(&c);
  for (const auto& c : trace.aux) pool.push_back(&c);
  // step at which each aux clause is first used, and lemmas emitted before then
  std::vector<std::optional<std::size_t>> first_use(trace.aux.size());
  std::vector<std::size_t> lemma_step;

  auto fail = [&](std::size_t i, std::string msg) {
    report.steps.push_back({i, false, std::move(msg)});
    if (!report.first_failure) report.first_failure = i;
  };

  Chain expected_start = gamma[start.clause_index];
  for (const auto& e : options.start_suffix.entries()) expected_start.entries().push_back(e);
  if (!same_chain(expected_start, start.result))
    fail(0, "start: expected " + to_string(expected_start) + ", recorded " + to_string(start.result));
  else
    report.steps.push_back({0, true, "start"});

  FreshVars fresh;
  for (std::size_t i = 1; i < trace.steps.size() && !report.first_failure; ++i) {
    const Step& step = trace.steps[i];
    const Chain& prev = trace.steps[i - 1].result;
    try {
      if (step.kind != StepKind::removal && step.lemma) {
        fail(i, "only removal steps emit lemmas");
        break;
      }
      switch (step.kind) {
        case StepKind::start:
          fail(i, "start step must appear exactly once, first");
          break;
        case StepKind::extension: {
          if (step.clause_index >= pool.size()) {
            fail(i, "extension clause index " + std::to_string(step.clause_index) + " out of range");
            break;
          }
          if (step.clause_index >= gamma.size()) {
            auto& use = first_use[step.clause_index - gamma.size()];
            if (!use) use = i;
          }
          auto r = extend_fo(prev, *pool[step.clause_index], step.position, fresh);
          if (!r) {
            fail(i, "extension: goal does not unify with the clause literal");
          } else if (!same_chain(r->chain, step.result)) {
            fail(i, "extension: expected " + to_string(r->chain) + ", recorded " + to_string(step.result));
          } else if (!same_unifier(r->mgu, step.mgu)) {
            fail(i, "extension: mgu " + to_string(step.mgu) + " differs from " + to_string(r->mgu));
          } else {
            report.steps.push_back({i, true, "ext"});
          }
          break;
        }
        case StepKind::reduction: {
          auto r = reduce_fo(prev, step.a_index);
          if (!r) {
            fail(i, "reduction: goal does not unify with the A-entry");
          } else if (!same_chain(r->chain, step.result)) {
            fail(i, "reduction: expected " + to_string(r->chain) + ", recorded " + to_string(step.result));
          } else if (!same_unifier(r->mgu, step.mgu)) {
            fail(i, "reduction: mgu " + to_string(step.mgu) + " differs from " + to_string(r->mgu));
          } else {
            report.steps.push_back({i, true, "red"});
          }
          break;
        }
        case StepKind::removal: {
          auto r = remove(prev);
          if (!same_chain(r.chain, step.result)) {
            fail(i, "removal: expected " + to_string(r.chain) + ", recorded " + to_string(step.result));
          } else if (step.lemma && !same_lemma(r.lemma, *step.lemma)) {
            fail(i, "removal: lemma should be " + to_string(r.lemma) + ", recorded " +
                        to_string(*step.lemma));
          } else {
            report.steps.push_back({i, true, "rem"});
            report.lemmas.push_back(step.lemma ? *step.lemma : r.lemma);
            lemma_step.push_back(i);
          }
          break;
        }
      }
    } catch (const RuleError& e) {
      fail(i, e.what());
    }
    if (!report.first_failure && !scopes_bounded(step.result))
      fail(i, "scope exceeds the number of A-entries to its left");
  }

  for (std::size_t j = 0; j < trace.aux.size(); ++j) {
    AuxStatus status = AuxStatus::assumed;
    Lemma as_lemma{trace.aux[j].literals()};
    for (std::size_t l = 0; l < report.lemmas.size(); ++l) {
      if (first_use[j] && lemma_step[l] > *first_use[j]) break;
      if (same_lemma(report.lemmas[l], as_lemma)) {
        status = AuxStatus::derived;
        break;
      }
    }
    report.aux.push_back(status);
  }
  report.verified = !report.first_failure;
  return report;
}

AuditReport audit_derived_chain_property(const Chain& k, const ClauseSet& gamma,
                                         const Oracle& oracle) {
  struct Ancestor {
    Literal literal;
    std::uint32_t scope;
    std::vector<Literal> prefix;  // B-literals of U_1 ... U_i
  };
  std::vector<Ancestor> ancestors;
  std::vector<Literal> b_seen;
  for (const auto& e : k.entries()) {
    if (e.ancestor)
      ancestors.push_back({e.literal, e.scope, b_seen});
    else
      b_seen.push_back(e.literal);
  }

  AuditReport report;
  const std::size_t n = ancestors.size();
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<Formula> members;
    bool member = false;
    for (std::size_t j = i; j <= n; ++j) {
      std::size_t kj = ancestors[j - 1].scope;
      if (j - i <= kj && kj <= j - 1) {
        members.push_back(Formula::lit(ancestors[j - 1].literal));
        if (j == i) member = true;
      }
    }
    std::vector<Formula> disjuncts;
    for (const auto& b : ancestors[i - 1].prefix) disjuncts.push_back(Formula::lit(b));
    Formula lhs = members.empty() ? Formula::top() : Formula::conj(std::move(members));
    Formula rhs = disjuncts.empty() ? Formula::bottom() : Formula::disj(std::move(disjuncts));
    bool entailed = oracle.entails(gamma, Formula::implies(lhs, rhs));
    report.items.push_back({i, member, entailed});
    report.pass = report.pass && member && entailed;
  }
  return report;
}

std::string to_string(Certification c) {
  switch (c) {
    case Certification::certified: return "certified";
    case Certification::refuted: return "refuted";
    case Certification::unknown: return "unknown";
  }
  return "unknown";
}

namespace {

Formula lemma_formula(const Lemma& lemma) {
  std::vector<Formula> parts;
  for (const auto& l : lemma.literals) parts.push_back(Formula::lit(l));
  return parts.empty() ? Formula::bottom() : Formula::disj(std::move(parts));
}

void collect_names(const Term& t, std::set<std::string>& names) {
  names.insert(t.symbol().name());
  for (const auto& a : t.args()) collect_names(a, names);
}

}  // namespace

Certification certify_lemma(const Lemma& lemma, const ClauseSet& gamma, const Oracle& oracle) {
  return oracle.entails(gamma, lemma_formula(lemma)) ? Certification::certified
                                                     : Certification::refuted;
}

Certification certify_lemma_fo(const Lemma& lemma, const ClauseSet& gamma, const Oracle& oracle,
                               unsigned max_depth, std::size_t max_clauses) {
  std::set<std::string> names;
  for (const auto& c : gamma.clauses())
    for (const auto& e : c.entries())
      for (const auto& a : e.literal.args) collect_names(a, names);

  // Skolemize the negated universal closure of the lemma.
  Substitution skolem;
  std::vector<Symbol> skolem_constants;
  for (Symbol v : ordered_vars(lemma.as_chain())) {
    std::string name = "sk_" + v.name();
    for (char& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    while (names.contains(name)) name += "_";
    names.insert(name);
    Symbol c = Symbol::intern(name);
    skolem_constants.push_back(c);
    skolem.bind(v, Term::compound(c));
  }
  Lemma closed{apply(skolem, lemma.as_chain()).literals()};

  for (unsigned depth = 0; depth <= max_depth; ++depth) {
    GroundingSpec spec = grounding_spec_for(gamma, depth);
    spec.constants.insert(spec.constants.end(), skolem_constants.begin(), skolem_constants.end());
    spec.max_clauses = max_clauses;
    try {
      Grounding g = ground(gamma, spec);
      if (oracle.entails(g.clauses, lemma_formula(closed))) return Certification::certified;
    } catch (const GroundingLimitError&) {
      break;
    } catch (const OracleLimitError&) {
      break;
    }
  }
  return Certification::unknown;
}

std::optional<Substitution> is_instance(const Chain& ground, const Chain& general) {
  if (ground.size() != general.size()) return std::nullopt;
  Substitution s;
  for (std::size_t i = 0; i < ground.size(); ++i) {
    const auto& g = ground.entries()[i];
    const auto& f = general.entries()[i];
    if (g.ancestor != f.ancestor || g.scope != f.scope) return std::nullopt;
    if (!match(f.literal, g.literal, s)) return std::nullopt;
  }
  return s;
}

LiftedDerivation lift_derivation(const DerivationTrace& ground_trace, const ClauseSet& ground_clauses,
                                 std::span<const GroundOrigin> origins, const ClauseSet& gamma) {
  if (origins.size() != ground_clauses.size())
    throw std::invalid_argument("lift_derivation: one origin per ground clause required");
  if (ground_trace.steps.empty() || ground_trace.steps.front().kind != StepKind::start)
    throw LiftError(0, "ground trace must begin with a start step");

  LiftedDerivation out;
  out.trace.problem_digest = digest(gamma);
  FreshVars fresh;
  Chain current;
  for (std::size_t i = 0; i < ground_trace.steps.size(); ++i) {
    const Step& g = ground_trace.steps[i];
    Step lifted;
    lifted.kind = g.kind;
    switch (g.kind) {
      case StepKind::start:
        if (i != 0) throw LiftError(i, "start step must come first");
        if (g.clause_index >= ground_clauses.size()) throw LiftError(i, "start index out of range");
        lifted.clause_index = origins[g.clause_index].clause_index;
        current = gamma[lifted.clause_index];
        break;
      case StepKind::extension: {
        if (g.clause_index >= ground_clauses.size())
          throw LiftError(i, "extension with a clause outside the ground set");
        lifted.clause_index = origins[g.clause_index].clause_index;
        lifted.position = g.position;
        auto r = extend_fo(current, gamma[lifted.clause_index], g.position, fresh);
        if (!r) throw LiftError(i, "no first-order extension unifies");
        current = std::move(r->chain);
        lifted.mgu = std::move(r->mgu);
        break;
      }
      case StepKind::reduction: {
        lifted.a_index = g.a_index;
        auto r = reduce_fo(current, g.a_index);
        if (!r) throw LiftError(i, "no first-order reduction unifies");
        current = std::move(r->chain);
        lifted.mgu = std::move(r->mgu);
        break;
      }
      case StepKind::removal: {
        auto r = remove(current);
        current = std::move(r.chain);
        lifted.lemma = std::move(r.lemma);
        break;
      }
    }
    auto inst = is_instance(g.result, current);
    if (!inst)
      throw LiftError(i, "ground chain " + to_string(g.result) + " is not an instance of " +
                             to_string(current));
    lifted.result = current;
    out.trace.steps.push_back(std::move(lifted));
    out.instances.push_back(std::move(*inst));
  }
  return out;
}

}  // namespace modelim
