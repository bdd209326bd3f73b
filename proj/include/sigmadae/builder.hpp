#pragma once

#include <string>
#include <vector>

#include "sigmadae/codelist.hpp"

namespace sigmadae {

/// Handle to an expression under construction. Arithmetic on handles builds
/// a tree; nothing is written to a code list until an equation is finalized.
class Expr {
 public:
  Expr(double value) : ptr_(make_const(value)) {}  // NOLINT(implicit)
  explicit Expr(ExprPtr ptr) : ptr_(std::move(ptr)) {}

  const ExprPtr& ptr() const { return ptr_; }

  friend Expr operator+(const Expr& a, const Expr& b) {
    return Expr(make_binary(BinaryOp::Add, a.ptr_, b.ptr_));
  }
  friend Expr operator-(const Expr& a, const Expr& b) {
    return Expr(make_binary(BinaryOp::Sub, a.ptr_, b.ptr_));
  }
  friend Expr operator*(const Expr& a, const Expr& b) {
    return Expr(make_binary(BinaryOp::Mul, a.ptr_, b.ptr_));
  }
  friend Expr operator/(const Expr& a, const Expr& b) {
    return Expr(make_binary(BinaryOp::Div, a.ptr_, b.ptr_));
  }
  friend Expr operator-(const Expr& a) { return Expr(make_unary(UnaryOp::Neg, a.ptr_)); }

 private:
  ExprPtr ptr_;
};

inline Expr pow(const Expr& base, int exponent) {
  return Expr(make_pow(base.ptr(), exponent));
}
inline Expr der(const Expr& arg, int order = 1) { return Expr(make_deriv(arg.ptr(), order)); }
inline Expr sin(const Expr& a) { return Expr(make_unary(UnaryOp::Sin, a.ptr())); }
inline Expr cos(const Expr& a) { return Expr(make_unary(UnaryOp::Cos, a.ptr())); }
inline Expr exp(const Expr& a) { return Expr(make_unary(UnaryOp::Exp, a.ptr())); }
inline Expr log(const Expr& a) { return Expr(make_unary(UnaryOp::Log, a.ptr())); }
inline Expr sqrt(const Expr& a) { return Expr(make_unary(UnaryOp::Sqrt, a.ptr())); }

/// Programmatic model construction, equivalent to parse_model.
///
///   ModelBuilder b;
///   auto x = b.var("x");
///   b.equation("A", der(x, 1) - x);
///   DaeModel m = b.build();
class ModelBuilder {
 public:
  Expr var(const std::string& name);
  /// Looks up a declared variable; throws ModelError(Builder) otherwise.
  Expr variable(const std::string& name) const;
  Expr constant(const std::string& name, double value);
  static Expr time() { return Expr(make_time()); }

  void equation(const std::string& name, const Expr& lhs, const Expr& rhs = Expr(0.0));

  /// Throws ModelError when the equation count differs from the variable
  /// count (including zero equations) or a handle refers to an undeclared
  /// variable.
  DaeModel build() const;

 private:
  std::vector<std::string> vars_;
  std::map<std::string, double> consts_;
  std::vector<std::string> eq_names_;
  std::vector<std::pair<ExprPtr, ExprPtr>> eqs_;
};

}  // namespace sigmadae
