#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fairplan {

enum class Dialect { Ltl, Ltlf };

std::string_view to_string(Dialect dialect);
Dialect parse_dialect(std::string_view text);

/// LTL/LTLf syntax tree. Nodes are immutable and shared between formulas.
class Formula {
 public:
  enum class Op {
    True,
    False,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Next,
    Until,
    Release,
    Eventually,
    Always,
  };

  static Formula tt();
  static Formula ff();
  static Formula atom(std::string name);
  static Formula lnot(Formula f);
  static Formula land(Formula a, Formula b);
  static Formula lor(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula next(Formula f);
  static Formula until(Formula a, Formula b);
  static Formula release(Formula a, Formula b);
  static Formula eventually(Formula f);
  static Formula always(Formula f);

  /// Left fold of land/lor; empty input gives true/false respectively.
  static Formula conjunction(const std::vector<Formula>& parts);
  static Formula disjunction(const std::vector<Formula>& parts);
  /// X applied `count` times.
  static Formula next_n(Formula f, std::size_t count);

  Op op() const { return node_->op; }
  const std::string& name() const { return node_->name; }
  std::size_t arity() const;
  /// Sole operand of a unary node, or left operand of a binary node.
  const Formula& lhs() const { return node_->kids[0]; }
  const Formula& rhs() const { return node_->kids[1]; }

  /// Number of nodes counted as a tree.
  std::size_t size() const;
  std::set<std::string> atoms() const;
  /// Fully parenthesised text that parse_formula reads back.
  std::string to_string() const;

  /// Rewrite into {true, false, atom, !, &, X, U}.
  Formula normalize() const;

  /// Structural equality.
  bool operator==(const Formula& other) const;
  /// Identity of the underlying node; used for memoization.
  const void* id() const { return node_.get(); }

 private:
  struct Node {
    Op op;
    std::string name;
    std::vector<Formula> kids;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Op op, std::string name, std::vector<Formula> kids);

  std::shared_ptr<const Node> node_;
};

/// Operator precedence from tightest: unary (! X F G), U, &, |, ->.
/// U and -> associate to the right.
Formula parse_formula(std::string_view text, Dialect dialect);

}  // namespace fairplan
