#include "modelim/formula.hpp"

#include <algorithm>

namespace modelim {

Formula Formula::bottom() {
  static const Formula f(std::make_shared<Node>(Node{Kind::bottom, {}, {}}));
  return f;
}

Formula Formula::top() {
  static const Formula f(std::make_shared<Node>(Node{Kind::top, {}, {}}));
  return f;
}

Formula Formula::lit(Literal l) {
  return Formula(std::make_shared<Node>(Node{Kind::literal, std::move(l), {}}));
}

Formula Formula::nary(Kind kind, std::vector<Formula> parts) {
  std::vector<Formula> flat;
  for (auto& p : parts) {
    if (p.kind() == kind)
      flat.insert(flat.end(), p.operands().begin(), p.operands().end());
    else
      flat.push_back(std::move(p));
  }
  return Formula(std::make_shared<Node>(Node{kind, {}, std::move(flat)}));
}

Formula Formula::conj(std::vector<Formula> parts) { return nary(Kind::conjunction, std::move(parts)); }
Formula Formula::disj(std::vector<Formula> parts) { return nary(Kind::disjunction, std::move(parts)); }

Formula Formula::neg(Formula f) {
  return Formula(std::make_shared<Node>(Node{Kind::negation, {}, {std::move(f)}}));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  return Formula(
      std::make_shared<Node>(Node{Kind::implication, {}, {std::move(lhs), std::move(rhs)}}));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.literal() == b.literal() && a.operands() == b.operands();
}

std::string to_string(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::bottom: return "#false";
    case Formula::Kind::top: return "#true";
    case Formula::Kind::literal: return to_string(f.literal());
    case Formula::Kind::negation: return "-(" + to_string(f.operands()[0]) + ")";
    default: break;
  }
  const char* op = f.kind() == Formula::Kind::conjunction   ? " & "
                   : f.kind() == Formula::Kind::disjunction ? " | "
                                                            : " => ";
  std::string out;
  for (std::size_t i = 0; i < f.operands().size(); ++i) {
    if (i) out += op;
    const auto& sub = f.operands()[i];
    bool wrap = sub.kind() == Formula::Kind::conjunction || sub.kind() == Formula::Kind::disjunction ||
                sub.kind() == Formula::Kind::implication;
    out += wrap ? "(" + to_string(sub) + ")" : to_string(sub);
  }
  return out;
}

namespace {

using Cnf = std::vector<std::vector<Literal>>;

Cnf cnf_of(const Formula& f, bool negated);

Cnf conjoin(const std::vector<Formula>& parts, bool negated) {
  Cnf out;
  for (const auto& p : parts) {
    Cnf sub = cnf_of(p, negated);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

Cnf disjoin(const std::vector<Formula>& parts, bool negated) {
  Cnf out{{}};  // neutral element: the single false clause
  for (const auto& p : parts) {
    Cnf sub = cnf_of(p, negated);
    Cnf next;
    next.reserve(out.size() * sub.size());
    for (const auto& left : out)
      for (const auto& right : sub) {
        auto merged = left;
        merged.insert(merged.end(), right.begin(), right.end());
        next.push_back(std::move(merged));
      }
    out = std::move(next);
  }
  return out;
}

Cnf cnf_of(const Formula& f, bool negated) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::bottom: return negated ? Cnf{} : Cnf{{}};
    case K::top: return negated ? Cnf{{}} : Cnf{};
    case K::literal: return {{negated ? opposite(f.literal()) : f.literal()}};
    case K::negation: return cnf_of(f.operands()[0], !negated);
    case K::conjunction: return negated ? disjoin(f.operands(), true) : conjoin(f.operands(), false);
    case K::disjunction: return negated ? conjoin(f.operands(), true) : disjoin(f.operands(), false);
    case K::implication: {
      auto as_disj = Formula::disj({Formula::neg(f.operands()[0]), f.operands()[1]});
      return cnf_of(as_disj, negated);
    }
  }
  return {};
}

}  // namespace

std::vector<std::vector<Literal>> clausify(const Formula& f) { return cnf_of(f, false); }

}  // namespace modelim
