#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "modelim/chain.hpp"
#include "modelim/derivation.hpp"

namespace modelim {

enum class LemmaPolicy {
  off,     // lemmas are emitted into the trace only
  record,  // lemmas of the proof are reported
  use,     // short lemmas become extension clauses for the rest of the search
};

std::string_view to_string(LemmaPolicy p);
std::optional<LemmaPolicy> parse_lemma_policy(std::string_view text);

struct SearchConfig {
  unsigned depth_start = 1;  // bounds on the number of extension steps
  unsigned depth_max = 12;
  LemmaPolicy lemma_policy = LemmaPolicy::record;
  std::size_t lemma_max_len = 2;
  std::size_t lemma_pool_cap = 1024;
  bool prune_identical_ancestor = false;
  std::optional<std::size_t> start_clause;
  std::uint64_t step_limit = 10'000'000;
  unsigned jobs = 1;  // start clauses searched concurrently at each depth
};

struct SearchStats {
  std::uint64_t extensions = 0;  // in the proof
  std::uint64_t reductions = 0;
  std::uint64_t removals = 0;
  std::uint64_t lemmas = 0;
  std::uint64_t nodes = 0;  // inference nodes explored overall
};

struct SearchOutcome {
  enum class Status { proof, exhausted, budget_exceeded };

  Status status = Status::exhausted;
  std::optional<DerivationTrace> trace;
  std::vector<Lemma> lemmas;  // emitted by the proof, in order
  std::vector<Lemma> pool;    // lemma pool at the end of the search (policy use)
  unsigned depth = 0;         // depth of the proof, or the last depth searched
  SearchStats stats;

  bool proved() const { return status == Status::proof; }
};

// Iterative deepening over the number of extensions. At each acceptable chain
// all reductions are tried before all extensions; leading A-entries are
// removed eagerly.
SearchOutcome prove(const ClauseSet& gamma, const SearchConfig& config);

// prove() pinned to each clause in turn.
std::vector<SearchOutcome> prove_from_each_start(const ClauseSet& gamma, SearchConfig config,
                                                 unsigned jobs = 1);

}  // namespace modelim
