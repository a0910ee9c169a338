#pragma once

// Scalar expression language used for warping functions, metric components,
// vector fields and maps.

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "conehol/jet.hpp"

namespace conehol {

enum class Func { Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Atan, Artanh };

std::string_view func_name(Func f);

struct ExprNode {
  enum class Kind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
  Kind kind = Kind::Constant;
  double value = 0.0;  // Constant
  std::string name;    // Variable
  Func func = Func::Sin;
  std::shared_ptr<const ExprNode> lhs;  // Negate/Call operand, binary left
  std::shared_ptr<const ExprNode> rhs;
  std::size_t offset = 0;  // byte offset in source
};

/// Immutable parsed expression.
class Expr {
 public:
  Expr();  // the constant 0
  explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

  static Expr constant(double v);

  const ExprNode& root() const { return *root_; }
  const std::shared_ptr<const ExprNode>& root_ptr() const { return root_; }

  /// Sorted, de-duplicated variable names referenced by the expression.
  std::vector<std::string> variables() const;

  std::string to_string() const;

 private:
  std::shared_ptr<const ExprNode> root_;
};

Expr parse(std::string_view text);
std::string pretty_print(const Expr& e);

/// Symbolic partial derivative with light constant folding.
Expr differentiate(const Expr& e, const std::string& var);

/// Replace variables by expressions (names absent from the map are kept).
Expr substitute(const Expr& e, const std::map<std::string, Expr>& repl);

/// An expression compiled against an ordered list of variable names.
class BoundExpr {
 public:
  BoundExpr() = default;
  BoundExpr(const Expr& e, const std::vector<std::string>& names);

  double eval(std::span<const double> x) const;
  Jet1 eval(std::span<const Jet1> x) const;
  Jet2 eval(std::span<const Jet2> x) const;

  template <class T>
  T operator()(std::span<const T> x) const {
    return eval(x);
  }

  bool is_constant() const { return constant_; }
  double constant_value() const { return constant_value_; }

 private:
  struct Op {
    enum class Code { Const, Var, Neg, Add, Sub, Mul, Div, PowInt, Pow, Call };
    Code code;
    double value;
    int slot;
    long power;
    Func func;
  };
  template <class T>
  T run(std::span<const T> x) const;

  std::vector<Op> ops_;
  int max_depth_ = 0;
  int nvars_ = 0;
  bool constant_ = true;
  double constant_value_ = 0.0;
};

double eval_scalar(const Expr& e, const std::map<std::string, double>& env);
Jet2 eval_jet2(const Expr& e, const std::map<std::string, Jet2>& env);

}  // namespace conehol
