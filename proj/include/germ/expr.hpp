#pragma once

// Polynomial expression grammar shared by field specs, sessions and JSON:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' INTEGER)?
//   primary := INTEGER | IDENT | '(' expr ')'

#include <gmpxx.h>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "germ/error.hpp"

namespace germ::expr {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Number, Variable, Add, Sub, Mul, Div, Neg, Pow };
  Kind kind = Kind::Number;
  mpq_class value;        // Number
  std::string name;       // Variable
  unsigned long exponent = 0;  // Pow
  NodePtr lhs, rhs;
  std::size_t column = 1;  // 1-based, within the parsed line
};

/// Parses a whole expression; `column_offset` shifts reported columns so that
/// diagnostics point into the enclosing line.
NodePtr parse(std::string_view text, std::size_t line = 1, std::size_t column_offset = 0);

/// Parses "(e1, e2, ...)" into its elements. "()" yields an empty list.
std::vector<NodePtr> parse_tuple(std::string_view text, std::size_t line = 1,
                                 std::size_t column_offset = 0);

/// Splits on commas at parenthesis depth zero. Throws on unbalanced input.
std::vector<std::pair<std::string, std::size_t>> split_top_level(std::string_view text, char sep,
                                                                 std::size_t line,
                                                                 std::size_t column_offset);

/// Collects the identifiers used by an expression.
void collect_variables(const Node& node, std::vector<std::string>& out);

/// Generic evaluation. `Ops` provides number(q), variable(name, column),
/// add, sub, mul, neg, pow(T, unsigned long) and divide(T, T, column).
template <class T, class Ops>
T evaluate(const Node& node, Ops& ops) {
  switch (node.kind) {
    case Node::Kind::Number:
      return ops.number(node.value);
    case Node::Kind::Variable:
      return ops.variable(node.name, node.column);
    case Node::Kind::Add:
      return ops.add(evaluate<T>(*node.lhs, ops), evaluate<T>(*node.rhs, ops));
    case Node::Kind::Sub:
      return ops.sub(evaluate<T>(*node.lhs, ops), evaluate<T>(*node.rhs, ops));
    case Node::Kind::Mul:
      return ops.mul(evaluate<T>(*node.lhs, ops), evaluate<T>(*node.rhs, ops));
    case Node::Kind::Div:
      return ops.divide(evaluate<T>(*node.lhs, ops), evaluate<T>(*node.rhs, ops), node.column);
    case Node::Kind::Neg:
      return ops.neg(evaluate<T>(*node.lhs, ops));
    case Node::Kind::Pow:
      return ops.pow(evaluate<T>(*node.lhs, ops), node.exponent);
  }
  throw Error(ErrorCode::Syntax, "malformed expression");
}

}  // namespace germ::expr
