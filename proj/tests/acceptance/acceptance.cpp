// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "modelim/derivation.hpp"
#include "modelim/io.hpp"
#include "modelim/oracle.hpp"
#include "modelim/search.hpp"
#include "support.hpp"

using namespace modelim;
using namespace modelim::testing;

namespace {

// Pinned parameters. Every criterion tolerates zero failures.
constexpr std::uint32_t kSeed = 20240601;
constexpr int kRandomSets = 500;
constexpr int kMinVars = 3, kMaxVars = 8;
constexpr int kMinClauses = 3, kMaxClauses = 12;
constexpr int kMaxClauseLen = 3;
constexpr unsigned kDepthMax = 10;
constexpr std::uint64_t kStepLimit = 1'000'000;  // node budget per prove() call
constexpr int kExhaustiveVars = 2;
constexpr int kExhaustiveMaxClauses = 4;
constexpr std::uint64_t kExhaustiveStepLimit = 20'000;
constexpr int kMinimalSets = 100;
constexpr unsigned kStartAnywhereDepth = 24;
constexpr int kFoLemmaProblems = 50;
constexpr unsigned kFoGroundDepthMax = 2;
constexpr int kConcatenations = 50;
constexpr int kLiftings = 25;
constexpr unsigned kLiftGroundDepth = 2;
constexpr int kProblemRoundTrips = 200;
constexpr int kTraceRoundTrips = 100;
constexpr std::size_t kFailureTolerance = 0;

const Oracle prop_oracle(OracleConfig{26});
const Oracle ground_oracle(OracleConfig{400});

struct Proof {
  ClauseSet gamma;
  DerivationTrace trace;
};

struct Tally {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::string first;

  void fail(const std::string& what) {
    if (failures++ == 0) first = what;
  }
  bool pass() const { return failures <= kFailureTolerance; }
};

// Shared across criteria.
std::vector<Proof> prop_proofs;      // verified propositional refutations from criteria 1-3
std::vector<Lemma> prop_lemmas;      // with their problem index in lemma_owner
std::vector<std::size_t> lemma_owner;
std::vector<DerivationTrace> all_traces;
Tally scope_tally;

void scan_scopes(const DerivationTrace& t, const std::string& where) {
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    ++scope_tally.checked;
    if (!scopes_bounded(t.steps[i].result))
      scope_tally.fail(where + " step " + std::to_string(i) + ": " + to_string(t.steps[i].result));
  }
}

// Verifies a propositional proof and records it; returns false when the checker rejects it.
bool record_proof(const ClauseSet& gamma, const SearchOutcome& o, Tally& tally, const std::string& where) {
  const auto report = check_trace(*o.trace, gamma, {digest(gamma)});
  if (!report.verified || !o.trace->refutes()) {
    tally.fail(where + ": trace rejected" +
               (report.first_failure ? " at step " + std::to_string(*report.first_failure) : ""));
    return false;
  }
  scan_scopes(*o.trace, where);
  for (std::size_t j = 0; j < report.aux.size(); ++j)
    if (report.aux[j] == AuxStatus::assumed) {
      prop_lemmas.push_back(Lemma{o.trace->aux[j].literals()});
      lemma_owner.push_back(prop_proofs.size());
    }
  for (const auto& l : report.lemmas) {
    prop_lemmas.push_back(l);
    lemma_owner.push_back(prop_proofs.size());
  }
  prop_proofs.push_back({gamma, *o.trace});
  all_traces.push_back(*o.trace);
  return true;
}

void report(int n, const std::string& name, const Tally& t, const std::string& detail, double seconds) {
  std::printf("%s criterion %d: %s: checked=%zu failures=%zu tolerance=%zu %s(%.1fs)\n",
              t.pass() ? "PASS" : "FAIL", n, name.c_str(), t.checked, t.failures, kFailureTolerance,
              detail.empty() ? "" : (detail + " ").c_str(), seconds);
  if (!t.pass()) std::printf("  first failure: %s\n", t.first.c_str());
  std::fflush(stdout);
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SearchConfig base_config(unsigned depth_max, std::uint64_t step_limit = kStepLimit) {
  SearchConfig c;
  c.depth_max = depth_max;
  c.step_limit = step_limit;
  return c;
}

std::uint64_t max_proof_nodes = 0;  // largest node count of any successful search

void note_nodes(const SearchOutcome& o) {
  if (o.proved()) max_proof_nodes = std::max(max_proof_nodes, o.stats.nodes);
}

// Every clause over vars 0..n-1: each variable absent, positive or negative, not all absent.
std::vector<Clause> all_clauses(int vars) {
  std::vector<Clause> out;
  int total = 1;
  for (int v = 0; v < vars; ++v) total *= 4;  // absent, pos, neg, both
  for (int code = 1; code < total; ++code) {
    std::vector<Literal> lits;
    int c = code;
    for (int v = 0; v < vars; ++v, c /= 4) {
      if (c % 4 == 1 || c % 4 == 3) lits.push_back(Literal::make(true, prop_name(v)));
      if (c % 4 == 2 || c % 4 == 3) lits.push_back(Literal::make(false, prop_name(v)));
    }
    out.push_back(Chain::clause(std::move(lits)));
  }
  return out;
}

void for_each_subset(std::size_t n, std::size_t max_size, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (!pick.empty()) f(pick);
    if (pick.size() == max_size) return;
    for (std::size_t i = from; i < n; ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
}

// Criterion 1 and the random half of criterion 2.
std::vector<ClauseSet> random_sets;

void criterion_1(Tally& sound, Tally& agree) {
  std::mt19937 rng(kSeed);
  std::uniform_int_distribution<int> vars_d(kMinVars, kMaxVars), clauses_d(kMinClauses, kMaxClauses);
  for (int i = 0; i < kRandomSets; ++i) {
    const int vars = vars_d(rng), count = clauses_d(rng);
    const ClauseSet gamma = random_prop_set(rng, vars, count, kMaxClauseLen);
    random_sets.push_back(gamma);
    const auto o = prove(gamma, base_config(kDepthMax));
    note_nodes(o);
    const bool unsat = !prop_oracle.satisfiable(gamma).satisfiable;
    const std::string where = "random set " + std::to_string(i);
    ++agree.checked;
    if (o.proved() && !unsat) agree.fail(where + ": proof of a satisfiable set");
    if (unsat && !o.proved())
      agree.fail(where + ": unsatisfiable but no proof within depth " + std::to_string(kDepthMax) +
                 (o.status == SearchOutcome::Status::budget_exceeded ? " (budget)" : ""));
    if (!o.proved()) continue;
    if (!record_proof(gamma, o, sound, where)) continue;
    for (std::size_t s = 0; s < o.trace->steps.size(); ++s) {
      ++sound.checked;
      if (!prop_oracle.entails(gamma, chain_formula(o.trace->steps[s].result)))
        sound.fail(where + " step " + std::to_string(s) + ": gamma does not entail " +
                   to_string(o.trace->steps[s].result));
    }
  }
}

void criterion_2_exhaustive(Tally& agree, std::size_t& sets) {
  const auto pool = all_clauses(kExhaustiveVars);
  for_each_subset(pool.size(), kExhaustiveMaxClauses, [&](const std::vector<std::size_t>& pick) {
    ClauseSet gamma;
    for (std::size_t i : pick) gamma.add(pool[i]);
    ++sets;
    ++agree.checked;
    const auto o = prove(gamma, base_config(kDepthMax, kExhaustiveStepLimit));
    note_nodes(o);
    const bool unsat = !prop_oracle.satisfiable(gamma).satisfiable;
    std::string where = "exhaustive set {" + print_clauses(gamma) + "}";
    if (o.proved() && !unsat) agree.fail(where + ": proof of a satisfiable set");
    if (unsat && !o.proved()) agree.fail(where + ": no proof within depth " + std::to_string(kDepthMax));
    if (o.proved()) {
      Tally ignored;
      if (!record_proof(gamma, o, ignored, where)) agree.fail(where + ": trace rejected");
    }
  });
}

void criterion_3(Tally& t) {
  std::mt19937 rng(kSeed + 3);
  std::uniform_int_distribution<int> vars_d(kMinVars, kMaxVars - 2), clauses_d(6, 16);
  int found = 0;
  while (found < kMinimalSets) {
    const ClauseSet gamma = random_prop_set(rng, vars_d(rng), clauses_d(rng), kMaxClauseLen);
    if (prop_oracle.satisfiable(gamma).satisfiable) continue;
    const ClauseSet mus = prop_oracle.minimal_unsat_subset(gamma).clauses;
    const std::string where = "minimal set " + std::to_string(found);
    ++found;
    const auto outcomes = prove_from_each_start(mus, base_config(kStartAnywhereDepth));
    for (std::size_t s = 0; s < outcomes.size(); ++s) {
      ++t.checked;
      if (!outcomes[s].proved()) {
        t.fail(where + " (" + std::to_string(mus.size()) + " clauses) from start " + std::to_string(s));
        continue;
      }
      if (outcomes[s].trace->steps[0].clause_index != s) t.fail(where + ": wrong start clause");
      record_proof(mus, outcomes[s], t, where + " start " + std::to_string(s));
    }
  }
}

void criterion_4_prop(Tally& t) {
  for (std::size_t i = 0; i < prop_lemmas.size(); ++i) {
    ++t.checked;
    if (certify_lemma(prop_lemmas[i], prop_proofs[lemma_owner[i]].gamma, prop_oracle) != Certification::certified)
      t.fail("lemma " + to_string(prop_lemmas[i]) + " of problem " + std::to_string(lemma_owner[i]));
  }
}

struct GroundProblem {
  ClauseSet gamma;
  ClauseSet ground;
  std::vector<GroundOrigin> origins;
  unsigned depth = 0;
};

// Random small FO problems whose grounding at some depth <= max_depth is unsatisfiable,
// reduced to a minimally unsatisfiable set of ground instances.
std::vector<GroundProblem> fo_problems(std::uint32_t seed, int wanted, unsigned min_depth, unsigned max_depth) {
  std::mt19937 rng(seed);
  std::vector<GroundProblem> out;
  for (int attempt = 0; attempt < 200000 && static_cast<int>(out.size()) < wanted; ++attempt) {
    const ClauseSet gamma = random_small_fo_set(rng, 3 + static_cast<int>(rng() % 4));
    if (gamma.is_ground()) continue;
    for (unsigned d = min_depth; d <= max_depth; ++d) {
      const Grounding g = ground(gamma, grounding_spec_for(gamma, d));
      if (ground_oracle.satisfiable(g.clauses).satisfiable) continue;
      const auto mus = ground_oracle.minimal_unsat_subset(g.clauses);
      GroundProblem p{gamma, mus.clauses, {}, d};
      for (std::size_t i : mus.indices) p.origins.push_back(g.origins[i]);
      // keep problems whose refutation needs a first-order step
      if (mus.indices.size() >= 3) out.push_back(std::move(p));
      break;
    }
  }
  return out;
}

void criterion_4_fo(Tally& t, std::size_t& problems, std::size_t& fo_certified) {
  const auto ps = fo_problems(kSeed + 4, kFoLemmaProblems, 0, kFoGroundDepthMax);
  problems = ps.size();
  if (ps.size() < static_cast<std::size_t>(kFoLemmaProblems))
    t.fail("only " + std::to_string(ps.size()) + " FO problems generated");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& p = ps[i];
    const std::string where = "FO problem " + std::to_string(i);
    const auto o = prove(p.ground, base_config(kStartAnywhereDepth));
    if (!o.proved()) {
      t.fail(where + ": no ground refutation");
      continue;
    }
    const auto report = check_trace(*o.trace, p.ground, {digest(p.ground)});
    if (!report.verified) {
      t.fail(where + ": ground trace rejected");
      continue;
    }
    scan_scopes(*o.trace, where);
    all_traces.push_back(*o.trace);
    for (const auto& l : report.lemmas) {
      ++t.checked;
      if (certify_lemma(l, p.ground, ground_oracle) != Certification::certified)
        t.fail(where + ": ground lemma " + to_string(l) + " not entailed by its grounding");
      // ground lemmas are also consequences of the first-order set
      if (certify_lemma_fo(l, p.gamma, ground_oracle, p.depth) == Certification::certified) ++fo_certified;
    }
  }
}

void criterion_5(Tally& t) {
  for (std::size_t i = 0; i < prop_proofs.size(); ++i)
    for (std::size_t s = 0; s < prop_proofs[i].trace.steps.size(); ++s) {
      ++t.checked;
      const auto audit = audit_derived_chain_property(prop_proofs[i].trace.steps[s].result, prop_proofs[i].gamma, prop_oracle);
      if (!audit.pass)
        t.fail("proof " + std::to_string(i) + " step " + std::to_string(s) + ": " +
               to_string(prop_proofs[i].trace.steps[s].result));
    }
}

bool entailed_by_truth_table(const ClauseSet& gamma, const Lemma& lemma) {
  AtomTable atoms;
  auto cnf = encode(gamma, atoms);
  for (const auto& l : lemma.literals) cnf.push_back(encode(std::vector<Literal>{opposite(l)}, atoms));
  return !truth_table_satisfiable(cnf, static_cast<int>(atoms.size()));
}

void criterion_6(Tally& t) {
  const ClauseSet gamma = golden_gamma();
  const DerivationTrace trace = read_trace(golden_trace_text());
  const std::vector<std::string> chains{"p q", "q [p]^0 q", "p [q]^0 [p]^0 q", "~q [p]^0 [q]^0 [p]^0 q",
                                        "[p]^0 [q]^1 [p]^0 q", "[q]^0 [p]^0 q", "[p]^0 q", "q",
                                        "p [q]^0", "~q [p]^0 [q]^0", "[p]^0 [q]^1", "[q]^0", "#box"};
  const std::vector<std::string> lemmas{"~p ~q", "~q", "~p", "~p ~q", "~q"};
  ++t.checked;
  for (std::size_t i = 0; i < chains.size(); ++i)
    if (trace.steps.at(i).result != parse_chain(chains[i])) t.fail("golden text step " + std::to_string(i));
  const auto report = check_trace(trace, gamma, {digest(gamma)});
  ++t.checked;
  if (!report.verified) t.fail("golden trace rejected");
  ++t.checked;
  if (report.lemmas.size() != lemmas.size()) t.fail("lemma count");
  for (std::size_t i = 0; i < std::min(lemmas.size(), report.lemmas.size()); ++i) {
    ++t.checked;
    if (report.lemmas[i] != Lemma{parse_chain(lemmas[i]).literals()}) t.fail("lemma " + std::to_string(i));
    ++t.checked;
    if (certify_lemma(report.lemmas[i], gamma, prop_oracle) != Certification::certified ||
        !entailed_by_truth_table(gamma, report.lemmas[i]))
      t.fail("lemma certification " + std::to_string(i));
  }
  for (const auto& step : trace.steps) {
    ++t.checked;
    if (!audit_derived_chain_property(step.result, gamma, prop_oracle).pass) t.fail("audit");
  }
  scan_scopes(trace, "golden");
  ++t.checked;
  if (!trace.refutes()) t.fail("golden trace does not end in #box");
}

void criterion_7(Tally& t) {
  const Chain suffix = parse_chain("zs [zt]^0 zu [zw]^1");
  std::size_t used = 0;
  for (std::size_t i = 0; i < prop_proofs.size() && used < static_cast<std::size_t>(kConcatenations); ++i) {
    if (prop_proofs[i].trace.steps.size() < 3) continue;
    ++used;
    ++t.checked;
    DerivationTrace cat = prop_proofs[i].trace;
    for (auto& step : cat.steps) {
      auto entries = step.result.entries();
      entries.insert(entries.end(), suffix.entries().begin(), suffix.entries().end());
      step.result = Chain(std::move(entries));
    }
    CheckOptions options{digest(prop_proofs[i].gamma), suffix};
    const auto report = check_trace(cat, prop_proofs[i].gamma, options);
    const std::string where = "concatenation " + std::to_string(used);
    if (!report.verified) {
      t.fail(where + " rejected at step " + std::to_string(report.first_failure.value_or(0)));
      continue;
    }
    if (cat.steps.back().result != suffix) t.fail(where + ": last chain is not the suffix");
    scan_scopes(cat, where);
  }
  if (used < static_cast<std::size_t>(kConcatenations)) t.fail("not enough derivations");
}

void criterion_8(Tally& t, std::size_t& verified_lifts) {
  const auto ps = fo_problems(kSeed + 8, kLiftings, kLiftGroundDepth, kLiftGroundDepth);
  if (ps.size() < static_cast<std::size_t>(kLiftings))
    t.fail("only " + std::to_string(ps.size()) + " FO problems generated");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& p = ps[i];
    const std::string where = "lifting " + std::to_string(i);
    ++t.checked;
    const auto o = prove(p.ground, base_config(kStartAnywhereDepth));
    if (!o.proved()) {
      t.fail(where + ": no ground refutation");
      continue;
    }
    scan_scopes(*o.trace, where + " (ground)");
    try {
      const auto lifted = lift_derivation(*o.trace, p.ground, p.origins, p.gamma);
      scan_scopes(lifted.trace, where);
      for (std::size_t s = 0; s < o.trace->steps.size(); ++s) {
        auto sigma = is_instance(o.trace->steps[s].result, lifted.trace.steps.at(s).result);
        if (!sigma || apply(*sigma, lifted.trace.steps[s].result) != o.trace->steps[s].result)
          t.fail(where + " step " + std::to_string(s) + ": not an instance");
      }
      if (!lifted.trace.refutes()) t.fail(where + ": lifted derivation does not end in #box");
      if (check_trace(lifted.trace, p.gamma, {digest(p.gamma)}).verified)
        ++verified_lifts;
      else
        t.fail(where + ": lifted trace rejected by the checker");
      all_traces.push_back(lifted.trace);
    } catch (const LiftError& e) {
      t.fail(where + ": " + e.what());
    }
  }
}

void criterion_10(Tally& t) {
  std::mt19937 rng(kSeed + 10);
  for (int i = 0; i < kProblemRoundTrips; ++i) {
    ++t.checked;
    ClauseSet gamma;
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int c = 0; c < n; ++c) {
      std::vector<Literal> lits;
      const int len = 1 + static_cast<int>(rng() % 4);
      for (int j = 0; j < len; ++j) lits.push_back(random_fo_literal(rng, 3));
      gamma.add(Chain::clause(std::move(lits)));
    }
    if (i % 2) {
      // propositional problems also go through DIMACS
      gamma = random_prop_set(rng, 3 + static_cast<int>(rng() % 6), n, 3);
      const std::string dimacs = write_dimacs(gamma);
      const Problem d1 = parse_dimacs(dimacs);
      const std::string dimacs2 = write_dimacs(d1.clauses);
      const Problem d2 = parse_dimacs(dimacs2);
      if (d1.clauses.size() != gamma.size() || write_dimacs(d2.clauses) != dimacs2 ||
          d2.clauses != d1.clauses)
        t.fail("dimacs round trip " + std::to_string(i));
    }
    const std::string text = print_clauses(gamma);
    const Problem p1 = parse_fo(text);
    const std::string text2 = print_problem(p1);
    const Problem p2 = parse_fo(text2);
    if (p1.clauses != gamma || p2.clauses != gamma || text2 != text || print_problem(p2) != text)
      t.fail("problem round trip " + std::to_string(i) + ": " + text);
  }
  // traces: spread over the collected ones, first-order ones included
  std::size_t done = 0;
  const std::size_t stride = std::max<std::size_t>(1, all_traces.size() / kTraceRoundTrips);
  for (std::size_t i = all_traces.size(); i-- > 0 && done < static_cast<std::size_t>(kTraceRoundTrips);) {
    if (i % stride != 0 && i + 1 != all_traces.size()) continue;
    ++done;
    ++t.checked;
    const std::string w1 = write_trace(all_traces[i]);
    const DerivationTrace r1 = read_trace(w1);
    const std::string w2 = write_trace(r1);
    if (w1 != w2 || !(r1 == all_traces[i])) t.fail("trace round trip " + std::to_string(i));
  }
  if (done < static_cast<std::size_t>(kTraceRoundTrips)) t.fail("not enough traces");
}

}  // namespace

int main() {
  bool ok = true;
  auto run = [&](int n, const std::string& name, auto body) {
    const auto t0 = std::chrono::steady_clock::now();
    Tally t;
    std::string detail;
    try {
      body(t, detail);
    } catch (const std::exception& e) {
      t.fail(std::string("exception: ") + e.what());
    }
    report(n, name, t, detail, since(t0));
    ok = ok && t.pass();
  };

  Tally agree;
  run(1, "soundness sweep", [&](Tally& t, std::string& detail) {
    criterion_1(t, agree);
    detail = "sets=" + std::to_string(kRandomSets) + " proofs=" + std::to_string(prop_proofs.size());
  });
  run(2, "refutation agreement", [&](Tally& t, std::string& detail) {
    std::size_t sets = 0;
    criterion_2_exhaustive(agree, sets);
    t = agree;
    detail = "random=" + std::to_string(kRandomSets) + " exhaustive=" + std::to_string(sets) +
             " max_nodes_of_a_proof=" + std::to_string(max_proof_nodes) +
             " budgets=" + std::to_string(kStepLimit) + "/" + std::to_string(kExhaustiveStepLimit);
  });
  run(3, "start-anywhere completeness", [&](Tally& t, std::string& detail) {
    criterion_3(t);
    detail = "minimal_sets=" + std::to_string(kMinimalSets);
  });
  run(4, "lemma correctness", [&](Tally& t, std::string& detail) {
    criterion_4_prop(t);
    const std::size_t prop = t.checked;
    std::size_t problems = 0, fo_certified = 0;
    criterion_4_fo(t, problems, fo_certified);
    detail = "propositional_lemmas=" + std::to_string(prop) + " fo_problems=" + std::to_string(problems) +
             " ground_lemmas=" + std::to_string(t.checked - prop) +
             " also_certified_against_fo_set=" + std::to_string(fo_certified);
  });
  run(5, "derived-chain-property invariance", [&](Tally& t, std::string& detail) {
    criterion_5(t);
    detail = "traces=" + std::to_string(prop_proofs.size());
  });
  run(6, "golden derivation", [&](Tally& t, std::string&) { criterion_6(t); });
  run(7, "concatenation", [&](Tally& t, std::string&) { criterion_7(t); });
  run(8, "lifting round trip", [&](Tally& t, std::string& detail) {
    std::size_t verified = 0;
    criterion_8(t, verified);
    detail = "lifted_traces_verified=" + std::to_string(verified);
  });
  run(9, "scope bound", [&](Tally& t, std::string&) { t = scope_tally; });
  run(10, "format round trips", [&](Tally& t, std::string&) { criterion_10(t); });

  std::printf("%s\n", ok ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return ok ? 0 : 1;
}
