#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "modelim/chain.hpp"
#include "modelim/derivation.hpp"
#include "modelim/oracle.hpp"

namespace modelim {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& source, std::size_t line, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// A DIMACS clause with no literals. The input is trivially unsatisfiable.
class EmptyClauseError : public ParseError {
public:
  using ParseError::ParseError;
};

struct Problem {
  enum class Kind { propositional, first_order };

  Kind kind = Kind::propositional;
  ClauseSet clauses;
  std::map<std::string, std::size_t> predicates;  // name -> arity
  std::map<std::string, std::size_t> functors;    // includes constants (arity 0)
  std::string source;
};

// Builds the symbol table and kind; throws ParseError on arity conflicts.
Problem make_problem(ClauseSet clauses, std::string source = "<input>");

Problem parse_dimacs(std::string_view text, std::string source = "<input>");
Problem parse_fo(std::string_view text, std::string source = "<input>");

// `~p(X) | q.`
std::string print_clause(const Clause& c);
std::string print_clauses(const ClauseSet& clauses);
std::string print_problem(const Problem& p);

// Lowercase hex SHA-256 of the canonical printing.
std::string digest(const ClauseSet& clauses);
std::string digest(const Problem& p);

Term parse_term(std::string_view text);
Literal parse_literal(std::string_view text);
Chain parse_chain(std::string_view text);
Substitution parse_substitution(std::string_view text);

std::string write_trace(const DerivationTrace& trace);
DerivationTrace read_trace(std::string_view text, std::string source = "<trace>");

// Ground clauses as DIMACS, with `c <id> <atom>` comments naming the atoms.
std::string write_dimacs(const ClauseSet& ground_clauses);

}  // namespace modelim
