#include "modelim/io.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace modelim {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_variable_name(std::string_view name) {
  return !name.empty() && (std::isupper(static_cast<unsigned char>(name[0])) || name[0] == '_');
}

class Cursor {
public:
  Cursor(std::string_view text, std::string source, std::size_t line = 1, char comment = '\0')
      : text_(text), source_(std::move(source)), line_(line), comment_(comment) {}

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (comment_ && c == comment_) {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'" + found());
  }

  std::string identifier() {
    skip_space();
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      std::size_t end = pos_;
      while (end < text_.size() && is_ident_char(text_[end])) ++end;
      fail("identifier starting with a digit: '" + std::string(text_.substr(pos_, end - pos_)) + "'");
    }
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected an identifier" + found());
    std::size_t begin = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(begin, pos_ - begin));
  }

  std::size_t number() {
    skip_space();
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc{}) fail("expected a number" + found());
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  std::size_t line() const { return line_; }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(source_, line_, message); }

private:
  std::string found() {
    if (pos_ >= text_.size()) return ", found end of input";
    return ", found '" + std::string(1, text_[pos_]) + "'";
  }

  std::string_view text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_;
  char comment_;
};

// Records arities as terms are read; null when no checking is wanted.
struct Arities {
  std::map<std::string, std::size_t> predicates;
  std::map<std::string, std::size_t> functors;
};

void record_arity(std::map<std::string, std::size_t>& table, const std::string& name, std::size_t arity,
                  const char* kind, const Cursor& cur) {
  auto [it, inserted] = table.emplace(name, arity);
  if (!inserted && it->second != arity)
    cur.fail(std::string("arity conflict for ") + kind + " " + name + ": used with " +
             std::to_string(it->second) + " and " + std::to_string(arity) + " arguments");
}

Term read_term(Cursor& cur, Arities* arities) {
  std::string name = cur.identifier();
  if (is_variable_name(name)) return Term::variable(name);
  std::vector<Term> args;
  if (cur.accept("(")) {
    do {
      args.push_back(read_term(cur, arities));
    } while (cur.accept(","));
    cur.expect(")");
  }
  if (arities) record_arity(arities->functors, name, args.size(), "function", cur);
  return Term::compound(name, std::move(args));
}

Literal read_literal(Cursor& cur, Arities* arities) {
  bool positive = !cur.accept("~");
  std::string name = cur.identifier();
  if (is_variable_name(name)) cur.fail("predicate names must start with a lowercase letter: " + name);
  std::vector<Term> args;
  if (cur.accept("(")) {
    do {
      args.push_back(read_term(cur, arities));
    } while (cur.accept(","));
    cur.expect(")");
  }
  if (arities) record_arity(arities->predicates, name, args.size(), "predicate", cur);
  return Literal::make(positive, name, std::move(args));
}

Chain read_chain(Cursor& cur) {
  if (cur.accept("#box")) return Chain();
  std::vector<ChainEntry> entries;
  while (!cur.at_end() && cur.peek() != '=') {
    if (cur.accept("[")) {
      Literal lit = read_literal(cur, nullptr);
      cur.expect("]");
      cur.expect("^");
      entries.push_back(ChainEntry::a(std::move(lit), static_cast<std::uint32_t>(cur.number())));
    } else {
      entries.push_back(ChainEntry::b(read_literal(cur, nullptr)));
    }
  }
  if (entries.empty()) cur.fail("empty chain must be written #box");
  return Chain(std::move(entries));
}

Substitution read_substitution(Cursor& cur) {
  Substitution s;
  cur.expect("{");
  if (cur.accept("}")) return s;
  do {
    std::string var = cur.identifier();
    if (!is_variable_name(var)) cur.fail("substitution domain must be a variable: " + var);
    cur.expect("->");
    s.bind(Symbol::intern(var), read_term(cur, nullptr));
  } while (cur.accept(","));
  cur.expect("}");
  return s;
}

template <typename T, typename F>
T parse_whole(std::string_view text, F read) {
  Cursor cur(text, "<text>");
  T value = read(cur);
  if (!cur.at_end()) cur.fail("trailing input");
  return value;
}

void scan_term(const Term& t, Arities& ar, const std::string& source) {
  if (t.is_variable()) return;
  auto [it, inserted] = ar.functors.emplace(t.symbol().name(), t.arity());
  if (!inserted && it->second != t.arity())
    throw ParseError(source, 0, "arity conflict for function " + t.symbol().name());
  for (const auto& a : t.args()) scan_term(a, ar, source);
}

}  // namespace

Problem make_problem(ClauseSet clauses, std::string source) {
  Arities ar;
  for (const auto& c : clauses.clauses())
    for (const auto& e : c.entries()) {
      const auto& lit = e.literal;
      auto [it, inserted] = ar.predicates.emplace(lit.predicate.name(), lit.args.size());
      if (!inserted && it->second != lit.args.size())
        throw ParseError(source, 0, "arity conflict for predicate " + lit.predicate.name());
      for (const auto& a : lit.args) scan_term(a, ar, source);
    }
  Problem p;
  p.kind = Problem::Kind::propositional;
  for (const auto& [name, arity] : ar.predicates)
    if (arity > 0) p.kind = Problem::Kind::first_order;
  p.clauses = std::move(clauses);
  p.predicates = std::move(ar.predicates);
  p.functors = std::move(ar.functors);
  p.source = std::move(source);
  return p;
}

Problem parse_dimacs(std::string_view text, std::string source) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  long declared_vars = 0, declared_clauses = 0;
  ClauseSet clauses;
  std::vector<Literal> current;
  std::size_t clause_line = 0;

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream words(line);
    std::string first;
    if (!(words >> first)) continue;
    if (first == "c") continue;
    if (first == "%") break;  // SATLIB end marker
    if (first == "p") {
      std::string fmt;
      if (header) throw ParseError(source, lineno, "duplicate header");
      if (!(words >> fmt >> declared_vars >> declared_clauses) || fmt != "cnf" || declared_vars < 0 ||
          declared_clauses < 0)
        throw ParseError(source, lineno, "malformed header, expected 'p cnf <vars> <clauses>'");
      std::string extra;
      if (words >> extra) throw ParseError(source, lineno, "malformed header, trailing '" + extra + "'");
      header = true;
      continue;
    }
    if (!header) throw ParseError(source, lineno, "clause before 'p cnf' header");
    words.clear();
    words.str(line);
    std::string word;
    while (words >> word) {
      long value = 0;
      auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
      if (ec != std::errc{} || ptr != word.data() + word.size())
        throw ParseError(source, lineno, "expected an integer literal, found '" + word + "'");
      if (value == 0) {
        if (current.empty()) throw EmptyClauseError(source, lineno, "empty clause");
        clauses.add(Chain::clause(std::move(current)));
        current.clear();
        continue;
      }
      if (current.empty()) clause_line = lineno;
      if (std::labs(value) > declared_vars)
        throw ParseError(source, lineno, "variable " + std::to_string(std::labs(value)) +
                                             " exceeds the declared " + std::to_string(declared_vars));
      current.push_back(Literal::make(value > 0, "v" + std::to_string(std::labs(value))));
    }
  }
  if (!header) throw ParseError(source, lineno, "missing 'p cnf' header");
  if (!current.empty()) throw ParseError(source, clause_line, "clause not terminated by 0");
  if (static_cast<long>(clauses.size()) != declared_clauses)
    throw ParseError(source, lineno, "clause count mismatch: header declares " +
                                         std::to_string(declared_clauses) + ", found " +
                                         std::to_string(clauses.size()));
  return make_problem(std::move(clauses), std::move(source));
}

Problem parse_fo(std::string_view text, std::string source) {
  Cursor cur(text, source, 1, '%');
  Arities ar;
  ClauseSet clauses;
  while (!cur.at_end()) {
    if (cur.peek() == '.') cur.fail("empty clause");
    std::vector<Literal> lits;
    do {
      lits.push_back(read_literal(cur, &ar));
    } while (cur.accept("|"));
    if (cur.at_end()) cur.fail("unterminated statement, expected '.'");
    cur.expect(".");
    clauses.add(Chain::clause(std::move(lits)));
  }
  Problem p = make_problem(std::move(clauses), std::move(source));
  return p;
}

std::string print_clause(const Clause& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += " | ";
    out += to_string(c.entries()[i].literal);
  }
  return out + ".";
}

std::string print_clauses(const ClauseSet& clauses) {
  std::string out;
  for (const auto& c : clauses.clauses()) out += print_clause(c) + "\n";
  return out;
}

std::string print_problem(const Problem& p) { return print_clauses(p.clauses); }

std::string digest(const ClauseSet& clauses) {
  const std::string text = print_clauses(clauses);
  unsigned char hash[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(text.data(), text.size(), hash, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", hash[i]);
    out += buf;
  }
  return out;
}

std::string digest(const Problem& p) { return digest(p.clauses); }

Term parse_term(std::string_view text) {
  return parse_whole<Term>(text, [](Cursor& c) { return read_term(c, nullptr); });
}

Literal parse_literal(std::string_view text) {
  return parse_whole<Literal>(text, [](Cursor& c) { return read_literal(c, nullptr); });
}

Chain parse_chain(std::string_view text) {
  return parse_whole<Chain>(text, [](Cursor& c) { return read_chain(c); });
}

Substitution parse_substitution(std::string_view text) {
  return parse_whole<Substitution>(text, [](Cursor& c) { return read_substitution(c); });
}

std::string write_trace(const DerivationTrace& trace) {
  std::string out = "me-trace 1\nproblem " + trace.problem_digest + "\n";
  for (const auto& c : trace.aux) out += "aux " + to_string(c) + "\n";
  for (const auto& s : trace.steps) {
    switch (s.kind) {
      case StepKind::start: out += "start " + std::to_string(s.clause_index); break;
      case StepKind::extension:
        out += "ext " + std::to_string(s.clause_index) + " " + std::to_string(s.position) + " " +
               to_string(s.mgu);
        break;
      case StepKind::reduction: out += "red " + std::to_string(s.a_index) + " " + to_string(s.mgu); break;
      case StepKind::removal:
        out += "rem";
        if (s.lemma) out += " " + to_string(*s.lemma);
        break;
    }
    out += " => " + to_string(s.result) + "\n";
  }
  if (trace.refutes()) out += "qed\n";
  return out;
}

DerivationTrace read_trace(std::string_view text, std::string source) {
  DerivationTrace trace;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  bool seen_version = false, seen_problem = false, seen_qed = false;

  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;

    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') {
      if (end == text.size()) break;
      continue;
    }
    line = line.substr(first);
    Cursor cur(line, source, lineno);
    auto fail = [&](const std::string& m) -> void { throw ParseError(source, lineno, m); };

    if (seen_qed) fail("content after qed");
    if (!seen_version) {
      if (!cur.accept("me-trace")) fail("expected 'me-trace 1' header");
      if (cur.number() != 1) fail("unsupported trace version");
      if (!cur.at_end()) fail("malformed header");
      seen_version = true;
      continue;
    }
    if (!seen_problem) {
      if (!cur.accept("problem")) fail("expected 'problem <digest>' line");
      std::string_view rest = line.substr(std::string_view("problem").size());
      std::size_t b = rest.find_first_not_of(" \t");
      std::size_t e = rest.find_last_not_of(" \t\r");
      if (b == std::string_view::npos) fail("missing problem digest");
      trace.problem_digest = std::string(rest.substr(b, e - b + 1));
      for (char c : trace.problem_digest)
        if (!std::isxdigit(static_cast<unsigned char>(c))) fail("problem digest must be hexadecimal");
      seen_problem = true;
      continue;
    }

    std::string keyword = cur.identifier();
    if (keyword == "qed") {
      if (!cur.at_end()) fail("malformed qed line");
      seen_qed = true;
      continue;
    }
    if (keyword == "aux") {
      if (!trace.steps.empty()) fail("aux clauses must precede the steps");
      Chain c = read_chain(cur);
      if (!c.is_elementary() || c.empty()) fail("aux clause must be a non-empty elementary chain");
      trace.aux.push_back(std::move(c));
      if (!cur.at_end()) fail("trailing input");
      continue;
    }

    Step step;
    if (keyword == "start") {
      step.kind = StepKind::start;
      step.clause_index = cur.number();
    } else if (keyword == "ext") {
      step.kind = StepKind::extension;
      step.clause_index = cur.number();
      step.position = cur.number();
      step.mgu = read_substitution(cur);
    } else if (keyword == "red") {
      step.kind = StepKind::reduction;
      step.a_index = cur.number();
      step.mgu = read_substitution(cur);
    } else if (keyword == "rem") {
      step.kind = StepKind::removal;
      if (cur.peek() != '=') {
        Chain lemma = read_chain(cur);
        if (!lemma.is_elementary()) fail("lemma must be elementary");
        step.lemma = Lemma{lemma.literals()};
      }
    } else {
      fail("unknown step keyword '" + keyword + "'");
    }
    cur.expect("=>");
    step.result = read_chain(cur);
    if (!cur.at_end()) fail("trailing input");
    trace.steps.push_back(std::move(step));
  }

  if (!seen_version) throw ParseError(source, lineno, "empty trace");
  if (!seen_problem) throw ParseError(source, lineno, "missing problem line");
  if (seen_qed && !trace.refutes())
    throw ParseError(source, lineno, "qed present but the last chain is not #box");
  return trace;
}

std::string write_dimacs(const ClauseSet& ground_clauses) {
  AtomTable atoms;
  auto clauses = encode(ground_clauses, atoms);
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    out += "c " + std::to_string(i + 1) + " " + to_string(atoms.atoms()[i]) + "\n";
  out += "p cnf " + std::to_string(atoms.size()) + " " + std::to_string(clauses.size()) + "\n";
  for (const auto& c : clauses) {
    for (int lit : c) out += std::to_string(lit) + " ";
    out += "0\n";
  }
  return out;
}

}  // namespace modelim
