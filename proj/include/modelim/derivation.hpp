#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modelim/chain.hpp"
#include "modelim/oracle.hpp"

namespace modelim {

enum class StepKind { start, extension, reduction, removal };

struct Step {
  StepKind kind = StepKind::start;
  std::size_t clause_index = 0;  // start, extension
  std::size_t position = 0;      // extension
  std::size_t a_index = 0;       // reduction
  Substitution mgu;              // extension, reduction
  Chain result;
  std::optional<Lemma> lemma;    // removal

  friend bool operator==(const Step&, const Step&) = default;
};

// Extension clause indices address the problem's clauses first, then the
// auxiliary clauses (lemmas imported from other derivations) in order.
struct DerivationTrace {
  std::string problem_digest;
  std::vector<Clause> aux;
  std::vector<Step> steps;

  bool refutes() const { return !steps.empty() && steps.back().result.empty(); }
  friend bool operator==(const DerivationTrace&, const DerivationTrace&) = default;
};

struct StepDiagnostic {
  std::size_t step = 0;
  bool ok = true;
  std::string message;
};

enum class AuxStatus {
  derived,  // equal to a lemma emitted earlier in the same trace
  assumed,  // must be certified separately
};

struct CheckReport {
  bool verified = false;
  bool digest_mismatch = false;
  std::optional<std::size_t> first_failure;
  std::vector<StepDiagnostic> steps;
  std::vector<Lemma> lemmas;  // emission order
  std::vector<AuxStatus> aux;
  std::string error;  // set when no step could be checked
};

struct CheckOptions {
  // Expected digest of gamma; checked against the trace header when non-empty.
  std::string digest;
  // Suffix appended to the start clause, for replaying concatenated derivations.
  Chain start_suffix;
};

// Replays every step with the chain rules and compares results, scopes and
// emitted lemmas. First-order chains and unifiers are accepted up to variable
// renaming.
CheckReport check_trace(const DerivationTrace& trace, const ClauseSet& gamma,
                        const CheckOptions& options = {});

// Bijective variable renaming between chains (scopes and kinds must match).
bool is_variant(const Chain& a, const Chain& b);
bool equal_up_to_renaming(const Substitution& a, const Substitution& b);

struct AuditItem {
  std::size_t index = 0;  // 1-based A-entry ordinal
  bool member = false;    // L_i in C_i
  bool entailed = false;  // gamma |= C_i => U_1...U_i
};

struct AuditReport {
  bool pass = true;
  std::vector<AuditItem> items;
};

// Checks the derived-chain property: with K = U1 [L1^k1] ... Un [Ln^kn] U(n+1)
// and C_i = { L_j | i <= j, j-i <= k_j <= j-1 }, every L_i is in C_i and
// gamma entails (conjunction of C_i) => (disjunction of U1...Ui).
// K and gamma must be ground.
AuditReport audit_derived_chain_property(const Chain& k, const ClauseSet& gamma,
                                         const Oracle& oracle);

enum class Certification { certified, refuted, unknown };

std::string to_string(Certification c);

// Propositional/ground entailment gamma |= lemma.
Certification certify_lemma(const Lemma& lemma, const ClauseSet& gamma, const Oracle& oracle);

// First-order: the lemma's variables are replaced by fresh constants and the
// Herbrand grounding of gamma is searched for a refutation of its negation up
// to max_depth. Never answers refuted.
Certification certify_lemma_fo(const Lemma& lemma, const ClauseSet& gamma, const Oracle& oracle,
                               unsigned max_depth, std::size_t max_clauses = 20000);

// s with apply(s, general) == ground, entry kinds and scopes included.
std::optional<Substitution> is_instance(const Chain& ground, const Chain& general);

struct LiftedDerivation {
  DerivationTrace trace;                // over gamma
  std::vector<Substitution> instances;  // per step: lifted chain -> ground chain
};

struct LiftError : std::runtime_error {
  std::size_t step;
  LiftError(std::size_t s, const std::string& what) : std::runtime_error(what), step(s) {}
};

// Lifts a derivation over ground instances of gamma, step by step, to a
// first-order derivation over gamma whose chains have the ground chains as
// instances. `origins[i]` names the clause of gamma that ground clause i
// instantiates.
LiftedDerivation lift_derivation(const DerivationTrace& ground_trace, const ClauseSet& ground_clauses,
                                 std::span<const GroundOrigin> origins, const ClauseSet& gamma);

}  // namespace modelim
