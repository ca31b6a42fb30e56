#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "modelim/derivation.hpp"
#include "modelim/io.hpp"
#include "modelim/oracle.hpp"
#include "modelim/search.hpp"

namespace modelim::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// DIMACS files start with comment lines or the `p cnf` header.
bool looks_like_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  while (in >> word) {
    if (word == "c") {
      in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
      continue;
    }
    return word == "p";
  }
  return false;
}

Problem load_problem(const std::string& path, const std::string& format) {
  const std::string text = read_file(path);
  std::string kind = format;
  if (kind.empty()) {
    if (ends_with(path, ".cnf"))
      kind = "dimacs";
    else if (ends_with(path, ".p"))
      kind = "fo";
    else
      kind = looks_like_dimacs(text) ? "dimacs" : "fo";
  }
  return kind == "dimacs" ? parse_dimacs(text, path) : parse_fo(text, path);
}

void print_lemma_clauses(const std::vector<Lemma>& lemmas, std::ostream& out) {
  out << "% lemmas\n";
  for (const auto& l : lemmas) out << print_clause(l.as_chain()) << "\n";
}

const char* kind_name(StepKind k) {
  switch (k) {
    case StepKind::start: return "start";
    case StepKind::extension: return "ext";
    case StepKind::reduction: return "red";
    case StepKind::removal: return "rem";
  }
  return "?";
}

struct ProveArgs {
  std::string problem, format, lemmas = "record", trace;
  unsigned depth_start = 1, depth_max = 12, jobs = 1;
  std::size_t lemma_max_len = 2;
  std::optional<std::size_t> start_clause;
  std::uint64_t steps = 10'000'000, seed = 0;
  bool prune = false;
};

int cmd_prove(const ProveArgs& a, std::ostream& out, std::ostream& err) {
  Problem problem;
  try {
    problem = load_problem(a.problem, a.format);
  } catch (const EmptyClauseError& e) {
    out << "UNSAT\n";
    out << "stats: extensions=0 reductions=0 removals=0 lemmas=0 depth=0 nodes=0\n";
    err << e.what() << " (input contains the empty clause)\n";
    if (!a.trace.empty()) err << "no trace written: the refutation is immediate\n";
    return ok;
  }
  if (problem.clauses.empty()) {
    out << "UNKNOWN depth=" << a.depth_max << "\n";
    return failed;
  }

  SearchConfig config;
  config.depth_start = a.depth_start;
  config.depth_max = a.depth_max;
  config.lemma_policy = *parse_lemma_policy(a.lemmas);
  config.lemma_max_len = a.lemma_max_len;
  config.prune_identical_ancestor = a.prune;
  config.start_clause = a.start_clause;
  config.step_limit = a.steps;
  config.jobs = a.jobs;
  if (a.start_clause && *a.start_clause >= problem.clauses.size())
    throw UsageError("--start-clause " + std::to_string(*a.start_clause) + " out of range (problem has " +
                     std::to_string(problem.clauses.size()) + " clauses)");

  const SearchOutcome result = prove(problem.clauses, config);
  if (result.status == SearchOutcome::Status::budget_exceeded) {
    out << "UNKNOWN steps=" << result.stats.nodes << "\n";
    return failed;
  }
  if (!result.proved()) {
    out << "UNKNOWN depth=" << result.depth << "\n";
    return failed;
  }

  const auto& s = result.stats;
  out << "UNSAT\n";
  out << "stats: extensions=" << s.extensions << " reductions=" << s.reductions
      << " removals=" << s.removals << " lemmas=" << s.lemmas << " depth=" << result.depth
      << " nodes=" << s.nodes << "\n";
  if (config.lemma_policy != LemmaPolicy::off) print_lemma_clauses(result.lemmas, out);
  if (!a.trace.empty()) {
    std::ofstream f(a.trace, std::ios::binary);
    if (!f) throw UsageError("cannot write " + a.trace);
    f << write_trace(*result.trace);
  }
  return ok;
}

struct CheckArgs {
  std::string problem, trace, format;
  bool audit = false, certify = false;
  unsigned ground_depth = 2;
  std::size_t max_vars = 26;
};

Certification certify(const Lemma& lemma, const ClauseSet& gamma, const Oracle& oracle,
                      unsigned ground_depth) {
  const Chain c = lemma.as_chain();
  if (gamma.is_ground() && c.is_ground()) return certify_lemma(lemma, gamma, oracle);
  return certify_lemma_fo(lemma, gamma, oracle, ground_depth);
}

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  const Problem problem = load_problem(a.problem, a.format);
  const DerivationTrace trace = read_trace(read_file(a.trace), a.trace);
  const Oracle oracle(OracleConfig{a.max_vars});

  CheckOptions options;
  options.digest = digest(problem);
  const CheckReport report = check_trace(trace, problem.clauses, options);
  if (report.digest_mismatch) {
    err << a.trace << ": digest mismatch: trace is for " << trace.problem_digest << ", problem is "
        << options.digest << "\n";
    return usage;
  }
  if (!report.error.empty()) {
    err << a.trace << ": " << report.error << "\n";
    return failed;
  }

  bool good = report.verified;
  out << std::left << std::setw(6) << "step" << std::setw(7) << "rule" << std::setw(9) << "replay";
  if (a.audit) out << std::setw(9) << "audit";
  out << "chain\n";
  for (const auto& d : report.steps) {
    const Step& step = trace.steps[d.step];
    out << std::setw(6) << d.step << std::setw(7) << kind_name(step.kind) << std::setw(9)
        << (d.ok ? "ok" : "FAIL");
    if (a.audit) {
      std::string verdict = "n/a";
      if (d.ok && step.result.is_ground() && problem.clauses.is_ground()) {
        const AuditReport audit = audit_derived_chain_property(step.result, problem.clauses, oracle);
        verdict = audit.pass ? "ok" : "FAIL";
        good = good && audit.pass;
      }
      out << std::setw(9) << verdict;
    }
    out << to_string(step.result) << "\n";
    if (!d.ok) out << "      " << d.message << "\n";
  }

  for (std::size_t i = 0; i < report.aux.size(); ++i) {
    const Lemma aux{trace.aux[i].literals()};
    if (report.aux[i] == AuxStatus::derived) {
      out << "aux " << i << " derived " << to_string(trace.aux[i]) << "\n";
      continue;
    }
    const Certification c = certify(aux, problem.clauses, oracle, a.ground_depth);
    out << "aux " << i << " assumed, " << to_string(c) << " " << to_string(trace.aux[i]) << "\n";
    if (c != Certification::certified) good = false;
  }

  if (a.certify) {
    for (std::size_t i = 0; i < report.lemmas.size(); ++i) {
      const Certification c = certify(report.lemmas[i], problem.clauses, oracle, a.ground_depth);
      out << "lemma " << i << " " << to_string(c) << " " << print_clause(report.lemmas[i].as_chain())
          << "\n";
      if (c == Certification::refuted) good = false;
      if (c == Certification::unknown)
        err << "lemma " << i << ": not certified within ground depth " << a.ground_depth << "\n";
    }
  }

  if (report.verified && !trace.refutes()) out << "note: the derivation does not end in #box\n";
  out << (good ? "VERIFIED" : "REJECTED") << "\n";
  return good ? ok : failed;
}

struct OracleArgs {
  std::string problem, format;
  bool minimize = false;
  std::optional<unsigned> ground_depth;
  std::size_t max_vars = 26;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  Problem problem;
  try {
    problem = load_problem(a.problem, a.format);
  } catch (const EmptyClauseError& e) {
    err << e.what() << "\n";
    out << "UNSAT\n";
    return ok;
  }
  const Oracle oracle(OracleConfig{a.max_vars});
  ClauseSet clauses = problem.clauses;

  if (a.ground_depth) {
    const Grounding g = ground(problem.clauses, grounding_spec_for(problem.clauses, *a.ground_depth));
    out << write_dimacs(g.clauses);
    clauses = g.clauses;
    if (!a.minimize) return ok;
  } else if (!clauses.is_ground()) {
    throw UsageError("first-order input needs --ground-depth D");
  }

  const SatResult r = oracle.satisfiable(clauses);
  const char* prefix = a.ground_depth ? "c " : "";
  if (r.satisfiable) {
    out << prefix << "SAT\n" << prefix << "model:";
    for (const auto& [atom, value] : r.model) out << " " << (value ? "" : "~") << to_string(atom);
    out << "\n";
    return ok;
  }
  out << prefix << "UNSAT\n";
  if (a.minimize) {
    const MinimalUnsatSubset mus = oracle.minimal_unsat_subset(clauses);
    out << prefix << "mus:";
    for (std::size_t i : mus.indices) out << " " << i;
    out << "\n";
  }
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model elimination prover and derivation checker", "modelim"};
  app.require_subcommand(1);

  ProveArgs pa;
  auto* prove_cmd = app.add_subcommand("prove", "search for a refutation");
  prove_cmd->add_option("problem", pa.problem)->required();
  prove_cmd->add_option("--format", pa.format)->check(CLI::IsMember({"dimacs", "fo"}));
  prove_cmd->add_option("--depth-start", pa.depth_start)->check(CLI::PositiveNumber);
  prove_cmd->add_option("--depth-max", pa.depth_max)->check(CLI::PositiveNumber);
  prove_cmd->add_option("--lemmas", pa.lemmas)->check(CLI::IsMember({"off", "record", "use"}));
  prove_cmd->add_option("--lemma-max-len", pa.lemma_max_len);
  prove_cmd->add_option("--trace", pa.trace);
  prove_cmd->add_option("--start-clause", pa.start_clause);
  prove_cmd->add_option("--steps", pa.steps)->check(CLI::PositiveNumber);
  prove_cmd->add_option("--seed", pa.seed, "reserved");
  prove_cmd->add_option("--jobs", pa.jobs)->check(CLI::PositiveNumber);
  prove_cmd->add_flag("--prune-ancestors", pa.prune);

  CheckArgs ca;
  auto* check_cmd = app.add_subcommand("check", "replay and verify a trace");
  check_cmd->add_option("problem", ca.problem)->required();
  check_cmd->add_option("trace", ca.trace)->required();
  check_cmd->add_option("--format", ca.format)->check(CLI::IsMember({"dimacs", "fo"}));
  check_cmd->add_flag("--audit-invariant", ca.audit);
  check_cmd->add_flag("--certify-lemmas", ca.certify);
  check_cmd->add_option("--ground-depth", ca.ground_depth);
  check_cmd->add_option("--max-vars", ca.max_vars);

  OracleArgs oa;
  auto* oracle_cmd = app.add_subcommand("oracle", "decide satisfiability with the reference oracle");
  oracle_cmd->add_option("problem", oa.problem)->required();
  oracle_cmd->add_option("--format", oa.format)->check(CLI::IsMember({"dimacs", "fo"}));
  oracle_cmd->add_flag("--minimize", oa.minimize);
  oracle_cmd->add_option("--ground-depth", oa.ground_depth);
  oracle_cmd->add_option("--max-vars", oa.max_vars);

  std::vector<std::string> rest(args.rbegin(), args.rend());
  if (!rest.empty()) rest.pop_back();  // program name
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (*prove_cmd) return cmd_prove(pa, out, err);
    if (*check_cmd) return cmd_check(ca, out, err);
    return cmd_oracle(oa, out, err);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
  } catch (const UsageError& e) {
    err << e.what() << "\n";
  } catch (const OracleLimitError& e) {
    err << "oracle: " << e.what() << "\n";
  } catch (const GroundingLimitError& e) {
    err << "grounding: " << e.what() << "\n";
  } catch (const RuleError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  }
  return usage;
}

}  // namespace modelim::cli
