#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "modelim/chain.hpp"
#include "modelim/formula.hpp"

namespace modelim {

// Brute-force semantics used to certify the prover's output. Nothing in here
// is used by the inference rules or the search.

class OracleLimitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SatisfiableInputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Ground atoms interned to propositional variables 1..n in first-seen order.
class AtomTable {
public:
  int id(const Literal& lit);  // sign ignored
  int find(const Literal& lit) const;  // 0 when absent
  const std::vector<Literal>& atoms() const { return atoms_; }  // atoms()[i] has id i+1
  std::size_t size() const { return atoms_.size(); }

private:
  std::unordered_map<std::string, int> ids_;
  std::vector<Literal> atoms_;
};

using PropClause = std::vector<int>;  // DIMACS-style signed variable ids

PropClause encode(const std::vector<Literal>& lits, AtomTable& atoms);
std::vector<PropClause> encode(const ClauseSet& gamma, AtomTable& atoms);

// model[v] is the value of variable v (index 0 unused)
bool dpll_satisfiable(const std::vector<PropClause>& clauses, int num_vars,
                      std::vector<bool>* model = nullptr);
// Exhaustive enumeration of all assignments; only for small variable counts.
bool truth_table_satisfiable(const std::vector<PropClause>& clauses, int num_vars,
                             std::vector<bool>* model = nullptr);

struct OracleConfig {
  std::size_t max_vars = 26;
};

struct SatResult {
  bool satisfiable = false;
  std::vector<std::pair<Literal, bool>> model;  // atom, value
};

struct MinimalUnsatSubset {
  std::vector<std::size_t> indices;  // ascending, into the input set
  ClauseSet clauses;
};

class Oracle {
public:
  explicit Oracle(OracleConfig config = {}) : config_(config) {}

  const OracleConfig& config() const { return config_; }

  SatResult satisfiable(const ClauseSet& gamma) const;
  // every model of gamma satisfies phi
  bool entails(const ClauseSet& gamma, const Formula& phi) const;
  // deletion-based, scanning clauses in index order
  MinimalUnsatSubset minimal_unsat_subset(const ClauseSet& gamma) const;

private:
  void check_bound(const AtomTable& atoms) const;
  OracleConfig config_;
};

class GroundingLimitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GroundingSpec {
  unsigned max_term_depth = 0;
  std::vector<Symbol> constants;
  std::size_t max_clauses = 100000;
};

// Constants of gamma sorted by name, or one artificial constant if it has none.
GroundingSpec grounding_spec_for(const ClauseSet& gamma, unsigned max_term_depth);

struct FunctionSymbol {
  Symbol name;
  std::size_t arity = 0;
  friend bool operator==(const FunctionSymbol&, const FunctionSymbol&) = default;
};

// Non-constant function symbols occurring in gamma, sorted by name.
std::vector<FunctionSymbol> function_symbols(const ClauseSet& gamma);

// Terms up to max_depth, ordered by depth then by printed form.
std::vector<Term> herbrand_universe(const std::vector<Symbol>& constants,
                                    const std::vector<FunctionSymbol>& functions,
                                    unsigned max_depth);

struct GroundOrigin {
  std::size_t clause_index = 0;
  Substitution instance;
};

struct Grounding {
  ClauseSet clauses;
  std::vector<GroundOrigin> origins;  // parallel to clauses
};

// All instances of each clause whose terms have depth <= max_term_depth, in
// clause order, then lexicographic order of the substituted terms.
Grounding ground(const ClauseSet& gamma, const GroundingSpec& spec);

}  // namespace modelim
