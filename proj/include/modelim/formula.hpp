#pragma once

#include <memory>
#include <string>
#include <vector>

#include "modelim/term.hpp"

namespace modelim {

// Propositional formula tree over (possibly first-order) literals. Used for
// chain meanings and entailment queries.
class Formula {
public:
  enum class Kind { bottom, top, literal, conjunction, disjunction, negation, implication };

  static Formula bottom();
  static Formula top();
  static Formula lit(Literal l);
  // n-ary; nested operands of the same kind are flattened
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula neg(Formula f);
  static Formula implies(Formula lhs, Formula rhs);

  Kind kind() const { return node_->kind; }
  const Literal& literal() const { return node_->literal; }
  const std::vector<Formula>& operands() const { return node_->operands; }

  friend bool operator==(const Formula& a, const Formula& b);

private:
  struct Node {
    Kind kind = Kind::bottom;
    Literal literal;
    std::vector<Formula> operands;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula nary(Kind kind, std::vector<Formula> parts);
  std::shared_ptr<const Node> node_;
};

std::string to_string(const Formula& f);

// CNF of f by negation normal form and naive distribution. Each inner vector
// is a disjunction of literals; an empty inner vector is the false clause.
std::vector<std::vector<Literal>> clausify(const Formula& f);

}  // namespace modelim
