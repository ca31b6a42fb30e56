#include "modelim/chain.hpp"

#include <algorithm>

namespace modelim {

Chain Chain::clause(std::vector<Literal> lits) {
  std::vector<ChainEntry> entries;
  entries.reserve(lits.size());
  for (auto& l : lits) entries.push_back(ChainEntry::b(std::move(l)));
  return Chain(std::move(entries));
}

bool Chain::is_elementary() const {
  return std::none_of(entries_.begin(), entries_.end(),
                      [](const ChainEntry& e) { return e.ancestor; });
}

bool Chain::is_ground() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const ChainEntry& e) { return e.literal.is_ground(); });
}

std::size_t Chain::ancestor_count() const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [](const ChainEntry& e) { return e.ancestor; }));
}

std::optional<std::size_t> Chain::ancestor_position(std::size_t a_index) const {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!entries_[i].ancestor) continue;
    if (seen++ == a_index) return i;
  }
  return std::nullopt;
}

std::vector<Literal> Chain::literals() const {
  std::vector<Literal> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.literal);
  return out;
}

bool same_literals(const Lemma& a, const Lemma& b) {
  if (a.literals.size() != b.literals.size()) return false;
  std::vector<bool> used(b.literals.size(), false);
  for (const auto& lit : a.literals) {
    bool found = false;
    for (std::size_t i = 0; i < b.literals.size() && !found; ++i) {
      if (!used[i] && b.literals[i] == lit) used[i] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

ClauseSet::ClauseSet(std::vector<Clause> clauses) {
  for (auto& c : clauses) add(std::move(c));
}

void ClauseSet::add(Clause c) {
  if (!c.is_elementary()) throw RuleError("clause set members must be elementary chains");
  clauses_.push_back(std::move(c));
}

bool ClauseSet::is_ground() const {
  return std::all_of(clauses_.begin(), clauses_.end(), [](const Clause& c) { return c.is_ground(); });
}

Chain apply(const Substitution& s, const Chain& k) {
  if (s.empty()) return k;
  std::vector<ChainEntry> entries;
  entries.reserve(k.size());
  for (const auto& e : k.entries()) entries.push_back({apply(s, e.literal), e.ancestor, e.scope});
  return Chain(std::move(entries));
}

void collect_vars(const Chain& k, VarSet& out) {
  for (const auto& e : k.entries()) collect_vars(e.literal, out);
}

std::vector<Symbol> ordered_vars(const Chain& k) {
  auto lits = k.literals();
  return ordered_vars(std::span<const Literal>(lits));
}

std::pair<Chain, Substitution> rename_apart(const Chain& k, const VarSet& avoid, FreshVars& fresh) {
  auto vars = ordered_vars(k);
  Substitution r = renaming(vars, avoid, fresh);
  return {apply(r, k), r};
}

Formula chain_formula(const Chain& k) {
  Formula f = Formula::bottom();
  for (const auto& e : k.entries()) {
    f = e.ancestor ? Formula::conj({f, Formula::lit(e.literal)})
                   : Formula::disj({f, Formula::lit(e.literal)});
  }
  return f;
}

bool scopes_bounded(const Chain& k) {
  std::uint32_t left = 0;
  for (const auto& e : k.entries()) {
    if (!e.ancestor) continue;
    if (e.scope > left) return false;
    ++left;
  }
  return true;
}

namespace {

void require_goal(const Chain& k, const char* rule) {
  if (k.empty() || !k.is_acceptable())
    throw RuleError(std::string(rule) + " needs a non-empty acceptable chain");
}

// V W [L]^0 U, where C = V M W and K = L U
Chain splice_extension(const Chain& k, const Clause& c, std::size_t position) {
  std::vector<ChainEntry> entries;
  entries.reserve(k.size() + c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (i != position) entries.push_back(ChainEntry::b(c.entries()[i].literal));
  entries.push_back(ChainEntry::a(k.front().literal, 0));
  entries.insert(entries.end(), k.entries().begin() + 1, k.entries().end());
  return Chain(std::move(entries));
}

// K minus its leftmost entry, with the used ancestor's scope raised to the
// number of A-entries on its left.
Chain splice_reduction(const Chain& k, std::size_t a_index, std::size_t entry) {
  std::vector<ChainEntry> entries(k.entries().begin() + 1, k.entries().end());
  auto& used = entries[entry - 1];
  used.scope = std::max<std::uint32_t>(used.scope, static_cast<std::uint32_t>(a_index));
  return Chain(std::move(entries));
}

std::size_t ancestor_entry(const Chain& k, std::size_t a_index) {
  auto pos = k.ancestor_position(a_index);
  if (!pos) throw RuleError("reduction: no A-entry with ordinal " + std::to_string(a_index));
  return *pos;
}

}  // namespace

Chain extend_prop(const Chain& k, const Clause& c, std::size_t position) {
  require_goal(k, "extension");
  if (!c.is_elementary()) throw RuleError("extension: clause is not elementary");
  if (position >= c.size()) throw RuleError("extension: literal position out of range");
  if (!(c.entries()[position].literal == opposite(k.front().literal)))
    throw RuleError("extension: clause literal is not the opposite of the goal");
  return splice_extension(k, c, position);
}

Chain reduce_prop(const Chain& k, std::size_t a_index) {
  require_goal(k, "reduction");
  std::size_t entry = ancestor_entry(k, a_index);
  if (!(k.entries()[entry].literal == opposite(k.front().literal)))
    throw RuleError("reduction: A-entry is not the opposite of the goal");
  return splice_reduction(k, a_index, entry);
}

std::optional<ExtensionResult> extend_fo(const Chain& k, const Clause& c, std::size_t position,
                                         FreshVars& fresh) {
  require_goal(k, "extension");
  if (!c.is_elementary()) throw RuleError("extension: clause is not elementary");
  if (position >= c.size()) throw RuleError("extension: literal position out of range");

  const Literal& goal = k.front().literal;
  const Literal& target = c.entries()[position].literal;
  if (goal.positive == target.positive || goal.predicate != target.predicate ||
      goal.args.size() != target.args.size())
    return std::nullopt;

  Substitution rho;
  Clause copy = c;
  if (!c.is_ground()) {
    VarSet avoid;
    collect_vars(k, avoid);
    rho = renaming(ordered_vars(c), avoid, fresh, /*all=*/true);
    copy = apply(rho, c);
  }
  auto sigma = mgu(goal, opposite(copy.entries()[position].literal));
  if (!sigma) return std::nullopt;
  return ExtensionResult{apply(*sigma, splice_extension(k, copy, position)), *sigma, rho};
}

std::optional<ReductionResult> reduce_fo(const Chain& k, std::size_t a_index) {
  require_goal(k, "reduction");
  std::size_t entry = ancestor_entry(k, a_index);
  auto sigma = mgu(k.front().literal, opposite(k.entries()[entry].literal));
  if (!sigma) return std::nullopt;
  return ReductionResult{apply(*sigma, splice_reduction(k, a_index, entry)), *sigma};
}

RemovalResult remove(const Chain& k) {
  if (k.empty() || !k.front().ancestor) throw RuleError("removal needs a leading A-entry");
  RemovalResult out;
  std::vector<ChainEntry> entries = k.entries();
  std::uint32_t left = 0;
  for (auto& e : entries) {
    if (!e.ancestor) continue;
    if (e.scope == left) {
      out.lemma.literals.push_back(opposite(e.literal));
      if (e.scope > 0) --e.scope;
    }
    ++left;
  }
  entries.erase(entries.begin());
  out.chain = Chain(std::move(entries));
  return out;
}

std::string to_string(const ChainEntry& e) {
  if (!e.ancestor) return to_string(e.literal);
  return "[" + to_string(e.literal) + "]^" + std::to_string(e.scope);
}

std::string to_string(const Chain& k) {
  if (k.empty()) return "#box";
  std::string out;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) out += ' ';
    out += to_string(k.entries()[i]);
  }
  return out;
}

std::string to_string(const Lemma& l) { return to_string(l.as_chain()); }

}  // namespace modelim
