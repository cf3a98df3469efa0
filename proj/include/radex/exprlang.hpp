#pragma once

// A small expression language for user-defined test functions.
//
//   expr   := term (("+" | "-") term)*
//   term   := unary (("*" | "/") unary)*
//   unary  := "-" unary | power
//   power  := atom ("^" unary)?            right associative
//   atom   := number | "x" digit+ | ident "(" args ")" | "(" expr ")"
//           | "piecewise" "(" cond "?" expr ":" expr ")"
//   cond   := expr ("<=" | "<" | ">=" | ">" | "==") expr
//
// Builtins: sin cos abs ln sqrt sgn (one argument), min max (two arguments).
// Juxtaposition is never an implicit product.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radex/extended_real.hpp"

namespace radex::expr {

enum class Op : std::uint8_t {
  Const, Var, Neg, Add, Sub, Mul, Div, Pow,
  Sin, Cos, Abs, Ln, Sqrt, Sgn, Min, Max,
  Piecewise,
};

enum class Cmp : std::uint8_t { Le, Lt, Ge, Gt, Eq };

struct Node {
  Op op = Op::Const;
  Cmp cmp = Cmp::Le;  // Piecewise only
  double value = 0.0;  // Const
  std::uint32_t var = 0;  // Var, zero based
  // Children; Piecewise uses all four: lhs, rhs, then, else.
  std::int32_t kid[4] = {-1, -1, -1, -1};
};

/// Immutable parsed expression. Copies share the node storage.
class Expr {
 public:
  Expr() = default;

  std::size_t dimension() const { return dim_; }
  std::size_t node_count() const { return nodes_ ? nodes_->size() : 0; }
  const Node& node(std::int32_t i) const { return (*nodes_)[static_cast<std::size_t>(i)]; }
  std::int32_t root() const { return root_; }

  /// Strict evaluation. Division by zero, ln of a nonpositive number, sqrt of a
  /// negative number and NaN results raise EvaluationFault.
  ExtendedReal eval(std::span<const double> x) const;

  /// Fully parenthesized source that parses back to an equivalent tree.
  std::string to_string() const;

 private:
  friend Expr parse(std::string_view, std::size_t);
  Expr(std::shared_ptr<const std::vector<Node>> nodes, std::int32_t root, std::size_t dim)
      : nodes_(std::move(nodes)), root_(root), dim_(dim) {}

  double eval_node(std::int32_t i, std::span<const double> x) const;
  void print_node(std::int32_t i, std::string& out) const;

  std::shared_ptr<const std::vector<Node>> nodes_;
  std::int32_t root_ = -1;
  std::size_t dim_ = 0;
};

/// Parses source over variables x1..x{dimension}. Throws ParseError.
Expr parse(std::string_view source, std::size_t dimension);

/// Evaluates e at x; throws DimensionMismatch when x has the wrong size.
ExtendedReal eval_expr(const Expr& e, std::span<const double> x);

}  // namespace radex::expr
