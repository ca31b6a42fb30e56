#include "modelim/search.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <unordered_map>

#include "modelim/io.hpp"

namespace modelim {

std::string_view to_string(LemmaPolicy p) {
  switch (p) {
    case LemmaPolicy::off: return "off";
    case LemmaPolicy::record: return "record";
    case LemmaPolicy::use: return "use";
  }
  return "off";
}

std::optional<LemmaPolicy> parse_lemma_policy(std::string_view text) {
  if (text == "off") return LemmaPolicy::off;
  if (text == "record") return LemmaPolicy::record;
  if (text == "use") return LemmaPolicy::use;
  return std::nullopt;
}

namespace {

std::uint64_t literal_key(bool positive, Symbol predicate) {
  return (std::uint64_t{predicate.id()} << 1) | (positive ? 1u : 0u);
}

struct Candidate {
  std::size_t clause;
  std::size_t position;
};

// clause positions by (sign, predicate), ascending clause then position
using ClauseIndex = std::unordered_map<std::uint64_t, std::vector<Candidate>>;

ClauseIndex build_index(const ClauseSet& gamma) {
  ClauseIndex index;
  for (std::size_t c = 0; c < gamma.size(); ++c)
    for (std::size_t p = 0; p < gamma[c].size(); ++p) {
      const auto& lit = gamma[c].entries()[p].literal;
      index[literal_key(lit.positive, lit.predicate)].push_back({c, p});
    }
  return index;
}

class LemmaPool {
public:
  LemmaPool(std::size_t max_len, std::size_t cap) : max_len_(max_len), cap_(cap) {}

  void offer(const Lemma& lemma) {
    if (lemma.literals.empty() || lemma.literals.size() > max_len_ || cap_ == 0) return;
    Clause c = lemma.as_chain();
    for (const auto& existing : clauses_) {
      if (existing.size() != c.size()) continue;
      if (same_literals(Lemma{existing.literals()}, lemma) || is_variant(existing, c)) return;
    }
    if (clauses_.size() < cap_) {
      clauses_.push_back(std::move(c));
      return;
    }
    auto longest = std::max_element(clauses_.begin(), clauses_.end(),
                                     [](const Clause& a, const Clause& b) { return a.size() < b.size(); });
    if (longest->size() > c.size()) *longest = std::move(c);
  }

  const std::vector<Clause>& clauses() const { return clauses_; }

  std::vector<Lemma> lemmas() const {
    std::vector<Lemma> out;
    for (const auto& c : clauses_) out.push_back(Lemma{c.literals()});
    return out;
  }

private:
  std::size_t max_len_;
  std::size_t cap_;
  std::vector<Clause> clauses_;
};

class Searcher {
public:
  Searcher(const ClauseSet& gamma, const SearchConfig& config, const ClauseIndex& index,
           LemmaPool* pool, std::atomic<std::uint64_t>& nodes)
      : gamma_(gamma), config_(config), index_(index), pool_(pool), nodes_(nodes) {}

  void begin_depth() { cut_off_ = false; }

  bool run(std::size_t start, unsigned depth) {
    path_.clear();
    path_aux_.clear();
    fresh_.reset();
    Step first;
    first.kind = StepKind::start;
    first.clause_index = start;
    first.result = gamma_[start];
    push(std::move(first));
    return solve(gamma_[start], depth);
  }

  bool budget_hit() const { return budget_hit_; }
  bool cut_off() const { return cut_off_; }
  const std::vector<Step>& path() const { return path_; }
  const std::vector<std::optional<Clause>>& path_aux() const { return path_aux_; }

private:
  void push(Step s, std::optional<Clause> aux = std::nullopt) {
    path_.push_back(std::move(s));
    path_aux_.push_back(std::move(aux));
  }

  void rewind(std::size_t mark, std::uint64_t counter) {
    path_.resize(mark);
    path_aux_.resize(mark);
    fresh_.reset(counter);
  }

  // removes leading A-entries, then continues with the next goal
  bool settle(Chain k, unsigned left) {
    while (!k.empty() && k.front().ancestor) {
      auto r = remove(k);
      if (pool_ && config_.lemma_policy == LemmaPolicy::use) pool_->offer(r.lemma);
      Step s;
      s.kind = StepKind::removal;
      s.result = r.chain;
      s.lemma = std::move(r.lemma);
      push(std::move(s));
      k = std::move(r.chain);
    }
    if (k.empty()) return true;
    return solve(k, left);
  }

  bool try_extension(const Chain& k, const Clause& clause, std::size_t index, std::size_t position,
                     unsigned left, std::optional<Clause> aux) {
    const std::size_t mark = path_.size();
    const std::uint64_t counter = fresh_.counter();
    auto r = extend_fo(k, clause, position, fresh_);
    if (!r) {
      fresh_.reset(counter);
      return false;
    }
    Step s;
    s.kind = StepKind::extension;
    s.clause_index = index;
    s.position = position;
    s.mgu = std::move(r->mgu);
    s.result = r->chain;
    push(std::move(s), std::move(aux));
    if (settle(std::move(r->chain), left - 1)) return true;
    rewind(mark, counter);
    return false;
  }

  bool solve(const Chain& k, unsigned left) {
    if (budget_hit_) return false;
    if (nodes_.fetch_add(1, std::memory_order_relaxed) + 1 > config_.step_limit) {
      budget_hit_ = true;
      return false;
    }
    const Literal& goal = k.front().literal;

    if (config_.prune_identical_ancestor) {
      for (const auto& e : k.entries())
        if (e.ancestor && e.literal == goal) return false;
    }

    std::size_t a_index = 0;
    for (const auto& e : k.entries()) {
      if (!e.ancestor) continue;
      const std::size_t this_index = a_index++;
      if (e.literal.positive == goal.positive || e.literal.predicate != goal.predicate) continue;
      const std::size_t mark = path_.size();
      const std::uint64_t counter = fresh_.counter();
      auto r = reduce_fo(k, this_index);
      if (!r) continue;
      Step s;
      s.kind = StepKind::reduction;
      s.a_index = this_index;
      s.mgu = std::move(r->mgu);
      s.result = r->chain;
      push(std::move(s));
      if (settle(std::move(r->chain), left)) return true;
      rewind(mark, counter);
      if (budget_hit_) return false;
    }

    if (left == 0) {
      cut_off_ = true;
      return false;
    }
    if (auto it = index_.find(literal_key(!goal.positive, goal.predicate)); it != index_.end()) {
      for (const auto& cand : it->second) {
        if (try_extension(k, gamma_[cand.clause], cand.clause, cand.position, left, std::nullopt))
          return true;
        if (budget_hit_) return false;
      }
    }
    if (pool_ && config_.lemma_policy == LemmaPolicy::use) {
      // the pool may change while we recurse, so work on copies
      for (std::size_t j = 0; j < pool_->clauses().size(); ++j) {
        Clause lemma = pool_->clauses()[j];
        for (std::size_t p = 0; p < lemma.size(); ++p) {
          const auto& lit = lemma.entries()[p].literal;
          if (lit.positive == goal.positive || lit.predicate != goal.predicate) continue;
          if (try_extension(k, lemma, gamma_.size() + j, p, left, lemma)) return true;
          if (budget_hit_) return false;
        }
      }
    }
    return false;
  }

  const ClauseSet& gamma_;
  const SearchConfig& config_;
  const ClauseIndex& index_;
  LemmaPool* pool_;
  std::atomic<std::uint64_t>& nodes_;
  FreshVars fresh_;
  std::vector<Step> path_;
  std::vector<std::optional<Clause>> path_aux_;
  bool budget_hit_ = false;
  bool cut_off_ = false;
};

SearchOutcome make_proof(const ClauseSet& gamma, const Searcher& searcher, const LemmaPool* pool,
                         unsigned depth) {
  SearchOutcome out;
  out.status = SearchOutcome::Status::proof;
  out.depth = depth;
  DerivationTrace trace;
  trace.problem_digest = digest(gamma);
  const auto& aux = searcher.path_aux();
  for (std::size_t i = 0; i < searcher.path().size(); ++i) {
    Step step = searcher.path()[i];
    if (aux[i]) {
      // lemma clauses are re-indexed as trace-local auxiliary clauses
      auto found = std::find(trace.aux.begin(), trace.aux.end(), *aux[i]);
      if (found == trace.aux.end()) found = trace.aux.insert(trace.aux.end(), *aux[i]);
      step.clause_index = gamma.size() + static_cast<std::size_t>(found - trace.aux.begin());
    }
    switch (step.kind) {
      case StepKind::extension: ++out.stats.extensions; break;
      case StepKind::reduction: ++out.stats.reductions; break;
      case StepKind::removal:
        ++out.stats.removals;
        ++out.stats.lemmas;
        out.lemmas.push_back(*step.lemma);
        break;
      case StepKind::start: break;
    }
    trace.steps.push_back(std::move(step));
  }
  out.trace = std::move(trace);
  if (pool) out.pool = pool->lemmas();
  return out;
}

}  // namespace

SearchOutcome prove(const ClauseSet& gamma, const SearchConfig& config) {
  if (gamma.empty()) throw std::invalid_argument("prove: empty clause set");
  if (config.depth_start > config.depth_max)
    throw std::invalid_argument("prove: depth_start exceeds depth_max");
  if (config.start_clause && *config.start_clause >= gamma.size())
    throw std::invalid_argument("prove: start clause out of range");

  const ClauseIndex index = build_index(gamma);
  std::vector<std::size_t> starts;
  if (config.start_clause)
    starts.push_back(*config.start_clause);
  else
    for (std::size_t i = 0; i < gamma.size(); ++i) starts.push_back(i);

  std::atomic<std::uint64_t> nodes{0};
  const bool parallel = config.jobs > 1 && starts.size() > 1;
  // sequential search shares one pool; concurrent searches own one each
  std::vector<LemmaPool> pools(parallel ? starts.size() : 1,
                               LemmaPool(config.lemma_max_len, config.lemma_pool_cap));

  auto finish = [&](SearchOutcome out) {
    out.stats.nodes = nodes.load();
    if (!parallel && config.lemma_policy == LemmaPolicy::use) out.pool = pools[0].lemmas();
    return out;
  };

  SearchOutcome last;
  std::vector<std::unique_ptr<Searcher>> searchers;
  for (std::size_t i = 0; i < (parallel ? starts.size() : 1); ++i)
    searchers.push_back(std::make_unique<Searcher>(gamma, config, index, &pools[i], nodes));
  for (unsigned depth = config.depth_start; depth <= config.depth_max; ++depth) {
    bool any_cut = false;
    bool budget = false;
    for (auto& s : searchers) s->begin_depth();
    if (!parallel) {
      Searcher& searcher = *searchers[0];
      for (std::size_t start : starts) {
        if (searcher.run(start, depth)) return finish(make_proof(gamma, searcher, &pools[0], depth));
        if (searcher.budget_hit()) {
          budget = true;
          break;
        }
      }
      any_cut = searcher.cut_off();
    } else {
      std::vector<char> found(starts.size(), 0);
      for (std::size_t begin = 0; begin < starts.size(); begin += config.jobs) {
        std::vector<std::future<bool>> tasks;
        const std::size_t end = std::min(starts.size(), begin + config.jobs);
        for (std::size_t i = begin; i < end; ++i)
          tasks.push_back(std::async(std::launch::async,
                                     [&, i] { return searchers[i]->run(starts[i], depth); }));
        for (std::size_t i = begin; i < end; ++i) found[i] = tasks[i - begin].get();
        for (std::size_t i = begin; i < end; ++i)
          if (found[i]) return finish(make_proof(gamma, *searchers[i], &pools[i], depth));
        for (std::size_t i = begin; i < end; ++i) {
          any_cut = any_cut || searchers[i]->cut_off();
          budget = budget || searchers[i]->budget_hit();
        }
        if (budget) break;
      }
    }
    if (budget) {
      last.status = SearchOutcome::Status::budget_exceeded;
      last.depth = depth;
      return finish(last);
    }
    last.depth = depth;
    // nothing was cut by the bound: deeper iterations would repeat this one
    if (!any_cut) {
      last.depth = config.depth_max;
      break;
    }
  }
  last.status = SearchOutcome::Status::exhausted;
  return finish(last);
}

std::vector<SearchOutcome> prove_from_each_start(const ClauseSet& gamma, SearchConfig config,
                                                 unsigned jobs) {
  std::vector<SearchOutcome> out(gamma.size());
  config.jobs = 1;
  auto run_one = [&](std::size_t i) {
    SearchConfig pinned = config;
    pinned.start_clause = i;
    return prove(gamma, pinned);
  };
  if (jobs <= 1) {
    for (std::size_t i = 0; i < gamma.size(); ++i) out[i] = run_one(i);
    return out;
  }
  for (std::size_t begin = 0; begin < gamma.size(); begin += jobs) {
    std::vector<std::future<SearchOutcome>> tasks;
    const std::size_t end = std::min(gamma.size(), begin + jobs);
    for (std::size_t i = begin; i < end; ++i)
      tasks.push_back(std::async(std::launch::async, run_one, i));
    for (std::size_t i = begin; i < end; ++i) out[i] = tasks[i - begin].get();
  }
  return out;
}

}  // namespace modelim
