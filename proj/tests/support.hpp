#pragma once

#include <random>
#include <string>
#include <vector>

#include "modelim/chain.hpp"
#include "modelim/io.hpp"

namespace modelim::testing {

inline Chain ch(std::string_view text) { return parse_chain(text); }
inline Literal lit(std::string_view text) { return parse_literal(text); }
inline Term term(std::string_view text) { return parse_term(text); }
inline Substitution sub(std::string_view text) { return parse_substitution(text); }

inline ClauseSet clauses(std::initializer_list<std::string_view> texts) {
  ClauseSet out;
  for (auto t : texts) out.add(parse_chain(t));
  return out;
}

inline std::string prop_name(int v) { return std::string(1, static_cast<char>('a' + v)); }

// Clause lengths uniform in [1, max_len], variables a, b, ... without repeats in a clause.
inline ClauseSet random_prop_set(std::mt19937& rng, int vars, int count, int max_len = 3) {
  std::uniform_int_distribution<int> len_d(1, std::min(max_len, vars));
  std::uniform_int_distribution<int> sign_d(0, 1);
  ClauseSet out;
  for (int i = 0; i < count; ++i) {
    std::vector<int> pool(vars);
    for (int v = 0; v < vars; ++v) pool[v] = v;
    std::shuffle(pool.begin(), pool.end(), rng);
    const int len = len_d(rng);
    std::vector<Literal> lits;
    for (int j = 0; j < len; ++j) lits.push_back(Literal::make(sign_d(rng) == 1, prop_name(pool[j])));
    out.add(Chain::clause(std::move(lits)));
  }
  return out;
}

// Terms over variables X, Y, Z, constants a, b and f/1, g/2.
inline Term random_term(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 4);
  switch (pick(rng)) {
    case 0: return Term::variable("X");
    case 1: return Term::variable("Y");
    case 2: return Term::variable("Z");
    case 3: return Term::compound("a");
    case 4: return Term::compound("b");
    case 5: return Term::compound("f", {random_term(rng, depth - 1)});
    default: return Term::compound("g", {random_term(rng, depth - 1), random_term(rng, depth - 1)});
  }
}

inline Literal random_fo_literal(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> sign_d(0, 1);
  std::uniform_int_distribution<int> pred(0, 2);
  switch (pred(rng)) {
    case 0: return Literal::make(sign_d(rng) == 1, "r");
    case 1: return Literal::make(sign_d(rng) == 1, "p", {random_term(rng, depth)});
    default: return Literal::make(sign_d(rng) == 1, "q", {random_term(rng, depth), random_term(rng, depth)});
  }
}

// Small FO problems over unary p, q, constants a, b and f/1, at most two variables per clause.
inline ClauseSet random_small_fo_set(std::mt19937& rng, int count) {
  std::uniform_int_distribution<int> len_d(1, 2), sign_d(0, 1), pred_d(0, 1), term_d(0, 4);
  auto term = [&]() -> Term {
    switch (term_d(rng)) {
      case 0: return Term::variable("X");
      case 1: return Term::variable("Y");
      case 2: return Term::compound("a");
      case 3: return Term::compound("b");
      default: return Term::compound("f", {Term::variable("X")});
    }
  };
  ClauseSet out;
  for (int i = 0; i < count; ++i) {
    std::vector<Literal> lits;
    const int len = len_d(rng);
    for (int j = 0; j < len; ++j)
      lits.push_back(Literal::make(sign_d(rng) == 1, pred_d(rng) ? "p" : "q", {term()}));
    out.add(Chain::clause(std::move(lits)));
  }
  return out;
}

inline ClauseSet golden_gamma() { return clauses({"p q", "~p q", "p ~q", "~p ~q"}); }

inline std::string golden_trace_text() {
  return "me-trace 1\n"
         "problem " + digest(golden_gamma()) + "\n"
         "start 0 => p q\n"
         "ext 1 0 {} => q [p]^0 q\n"
         "ext 2 1 {} => p [q]^0 [p]^0 q\n"
         "ext 3 0 {} => ~q [p]^0 [q]^0 [p]^0 q\n"
         "red 1 {} => [p]^0 [q]^1 [p]^0 q\n"
         "rem ~p ~q => [q]^0 [p]^0 q\n"
         "rem ~q => [p]^0 q\n"
         "rem ~p => q\n"
         "ext 2 1 {} => p [q]^0\n"
         "ext 3 0 {} => ~q [p]^0 [q]^0\n"
         "red 1 {} => [p]^0 [q]^1\n"
         "rem ~p ~q => [q]^0\n"
         "rem ~q => #box\n"
         "qed\n";
}

}  // namespace modelim::testing
