#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modelim/formula.hpp"
#include "modelim/term.hpp"

namespace modelim {

// A B-entry is a plain literal awaiting solution. An A-entry (ancestor) is a
// literal being solved, tagged with its scope.
struct ChainEntry {
  Literal literal;
  bool ancestor = false;
  std::uint32_t scope = 0;

  static ChainEntry b(Literal lit) { return {std::move(lit), false, 0}; }
  static ChainEntry a(Literal lit, std::uint32_t scope) { return {std::move(lit), true, scope}; }

  friend bool operator==(const ChainEntry&, const ChainEntry&) = default;
};

// Entries are stored leftmost first. The empty chain is the false chain.
class Chain {
public:
  Chain() = default;
  explicit Chain(std::vector<ChainEntry> entries) : entries_(std::move(entries)) {}
  static Chain clause(std::vector<Literal> lits);

  const std::vector<ChainEntry>& entries() const { return entries_; }
  std::vector<ChainEntry>& entries() { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const ChainEntry& front() const { return entries_.front(); }

  bool is_acceptable() const { return entries_.empty() || !entries_.front().ancestor; }
  bool is_elementary() const;
  bool is_ground() const;
  std::size_t ancestor_count() const;
  // entry position of the a_index-th A-entry, if any
  std::optional<std::size_t> ancestor_position(std::size_t a_index) const;
  std::vector<Literal> literals() const;

  friend bool operator==(const Chain&, const Chain&) = default;

private:
  std::vector<ChainEntry> entries_;
};

using Clause = Chain;

// An elementary chain emitted by removal.
struct Lemma {
  std::vector<Literal> literals;

  Chain as_chain() const { return Chain::clause(literals); }
  friend bool operator==(const Lemma&, const Lemma&) = default;
};

// Multiset equality of literals.
bool same_literals(const Lemma& a, const Lemma& b);

// Indexed set of elementary chains.
class ClauseSet {
public:
  ClauseSet() = default;
  explicit ClauseSet(std::vector<Clause> clauses);

  void add(Clause c);
  const std::vector<Clause>& clauses() const { return clauses_; }
  const Clause& operator[](std::size_t i) const { return clauses_[i]; }
  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }
  bool is_ground() const;

  friend bool operator==(const ClauseSet&, const ClauseSet&) = default;

private:
  std::vector<Clause> clauses_;
};

class RuleError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

Chain apply(const Substitution& s, const Chain& k);
void collect_vars(const Chain& k, VarSet& out);
std::vector<Symbol> ordered_vars(const Chain& k);
std::pair<Chain, Substitution> rename_apart(const Chain& k, const VarSet& avoid, FreshVars& fresh);

// Meaning of a chain: B-entries join disjunctively, A-entries conjunctively,
// folding from the left; scopes are ignored.
Formula chain_formula(const Chain& k);

// Every A-entry's scope is at most the number of A-entries to its left.
bool scopes_bounded(const Chain& k);

struct ExtensionResult {
  Chain chain;
  Substitution mgu;
  Substitution renaming;
};

struct ReductionResult {
  Chain chain;
  Substitution mgu;
};

struct RemovalResult {
  Chain chain;
  Lemma lemma;
};

Chain extend_prop(const Chain& k, const Clause& c, std::size_t position);
Chain reduce_prop(const Chain& k, std::size_t a_index);

// The clause is copied with all its variables renamed fresh before unifying.
// Returns nullopt when the literals do not unify.
std::optional<ExtensionResult> extend_fo(const Chain& k, const Clause& c, std::size_t position,
                                         FreshVars& fresh);
std::optional<ReductionResult> reduce_fo(const Chain& k, std::size_t a_index);

RemovalResult remove(const Chain& k);

std::string to_string(const ChainEntry& e);
// Entries separated by single spaces, A-entries as `[lit]^k`, empty as `#box`.
std::string to_string(const Chain& k);
std::string to_string(const Lemma& l);

}  // namespace modelim
