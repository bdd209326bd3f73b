#pragma once

// Truncated Taylor series arithmetic over a code list.
//
// Coefficients are Taylor coefficients (TCs): c_r = u^(r)(t0) / r!. The
// recurrences are written once over a scalar type so the same code runs on
// plain doubles and on forward-mode duals for Jacobians.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigmadae/codelist.hpp"
#include "sigmadae/scheme.hpp"

namespace sigmadae {

class ExecutorError : public std::runtime_error {
 public:
  enum class Kind {
    DivisionByZeroSeries,
    LogSqrtDomain,
    SingularJacobian,
    NewtonDivergence,
    InfeasibleConstraint,
    MissingInitialization,
  };
  ExecutorError(Kind kind, const std::string& message, PairSet missing = {})
      : std::runtime_error(message), kind_(kind), missing_(std::move(missing)) {}
  Kind kind() const { return kind_; }
  /// Pairs (variable, order) absent from the initialization.
  const PairSet& missing() const { return missing_; }

 private:
  Kind kind_;
  PairSet missing_;
};
const char* to_string(ExecutorError::Kind kind);

/// Value plus one tangent direction.
struct Dual {
  double v = 0.0;
  double d = 0.0;
  Dual() = default;
  Dual(double value, double tangent = 0.0) : v(value), d(tangent) {}  // NOLINT(implicit)

  friend Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
  friend Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
  friend Dual operator-(Dual a) { return {-a.v, -a.d}; }
  friend Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
  friend Dual operator/(Dual a, Dual b) {
    return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
  }
  Dual& operator+=(Dual b) { return *this = *this + b; }
  Dual& operator-=(Dual b) { return *this = *this - b; }
};
inline Dual sin(Dual a) { return {std::sin(a.v), a.d * std::cos(a.v)}; }
inline Dual cos(Dual a) { return {std::cos(a.v), -a.d * std::sin(a.v)}; }
inline Dual exp(Dual a) { return {std::exp(a.v), a.d * std::exp(a.v)}; }
inline Dual log(Dual a) { return {std::log(a.v), a.d / a.v}; }
inline Dual sqrt(Dual a) { return {std::sqrt(a.v), a.d / (2 * std::sqrt(a.v))}; }
inline double value_of(double a) { return a; }
inline double value_of(const Dual& a) { return a.v; }

template <class T>
using Series = std::vector<T>;

namespace tps {

using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;

template <class T>
Series<T> mul(const Series<T>& a, const Series<T>& b, std::size_t n) {
  Series<T> c(n, T(0.0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i <= k; ++i) c[k] += a[i] * b[k - i];
  return c;
}

template <class T>
Series<T> div(const Series<T>& a, const Series<T>& b, std::size_t n) {
  if (value_of(b[0]) == 0.0)
    throw ExecutorError(ExecutorError::Kind::DivisionByZeroSeries,
                        "division by a series with zero leading coefficient");
  Series<T> c(n, T(0.0));
  for (std::size_t k = 0; k < n; ++k) {
    T s = a[k];
    for (std::size_t i = 1; i <= k; ++i) s -= b[i] * c[k - i];
    c[k] = s / b[0];
  }
  return c;
}

template <class T>
Series<T> exp_series(const Series<T>& a, std::size_t n) {
  Series<T> e(n, T(0.0));
  e[0] = exp(a[0]);
  for (std::size_t k = 1; k < n; ++k) {
    T s(0.0);
    for (std::size_t i = 1; i <= k; ++i) s += T(double(i)) * a[i] * e[k - i];
    e[k] = s / T(double(k));
  }
  return e;
}

template <class T>
Series<T> log_series(const Series<T>& a, std::size_t n) {
  if (!(value_of(a[0]) > 0.0))
    throw ExecutorError(ExecutorError::Kind::LogSqrtDomain, "log of a nonpositive value");
  Series<T> l(n, T(0.0));
  l[0] = log(a[0]);
  for (std::size_t k = 1; k < n; ++k) {
    T s(0.0);
    for (std::size_t i = 1; i < k; ++i) s += T(double(i)) * l[i] * a[k - i];
    l[k] = (a[k] - s / T(double(k))) / a[0];
  }
  return l;
}

template <class T>
Series<T> sqrt_series(const Series<T>& a, std::size_t n) {
  if (!(value_of(a[0]) > 0.0))
    throw ExecutorError(ExecutorError::Kind::LogSqrtDomain, "sqrt of a nonpositive value");
  Series<T> s(n, T(0.0));
  s[0] = sqrt(a[0]);
  for (std::size_t k = 1; k < n; ++k) {
    T acc(0.0);
    for (std::size_t i = 1; i < k; ++i) acc += s[i] * s[k - i];
    s[k] = (a[k] - acc) / (T(2.0) * s[0]);
  }
  return s;
}

/// sin and cos of a series, computed together.
template <class T>
void sin_cos(const Series<T>& a, std::size_t n, Series<T>& s, Series<T>& c) {
  s.assign(n, T(0.0));
  c.assign(n, T(0.0));
  s[0] = sin(a[0]);
  c[0] = cos(a[0]);
  for (std::size_t k = 1; k < n; ++k) {
    T ss(0.0), cc(0.0);
    for (std::size_t i = 1; i <= k; ++i) {
      ss += T(double(i)) * a[i] * c[k - i];
      cc += T(double(i)) * a[i] * s[k - i];
    }
    s[k] = ss / T(double(k));
    c[k] = -cc / T(double(k));
  }
}

template <class T>
Series<T> int_pow(const Series<T>& a, int e, std::size_t n) {
  Series<T> one(n, T(0.0));
  one[0] = T(1.0);
  if (e < 0) return div(one, int_pow(a, -e, n), n);
  Series<T> result = one, base = a;
  base.resize(n, T(0.0));
  while (e > 0) {
    if (e & 1) result = mul(result, base, n);
    e >>= 1;
    if (e > 0) base = mul(base, base, n);
  }
  return result;
}

}  // namespace tps

/// Orders each node must be evaluated to so that output i reaches
/// output_orders[i] (negative: output not needed). Deriv(u, p) asks p more
/// of its argument. Returns -1 for nodes that are not needed.
std::vector<int> evaluation_demand(const CodeList& code, const std::vector<int>& output_orders);

/// Series of every node. x[j] holds the known TCs of x_j; coefficients
/// beyond x[j].size() are taken as zero. Series of node r has
/// demand[r] + 1 entries (empty when not needed).
template <class T>
std::vector<Series<T>> taylor_eval(const CodeList& code, double t0,
                                   const std::vector<Series<T>>& x,
                                   const std::vector<int>& output_orders) {
  const std::vector<int> demand = evaluation_demand(code, output_orders);
  std::vector<Series<T>> v(code.nodes.size());
  for (int r = 0; r < code.size(); ++r) {
    if (demand[r] < 0) continue;
    const std::size_t n = static_cast<std::size_t>(demand[r]) + 1;
    const Node& node = code.nodes[r];
    Series<T>& out = v[r];
    auto arg = [&](int a) {
      Series<T> s = v[a];
      s.resize(n, T(0.0));
      return s;
    };
    if (std::holds_alternative<InputTime>(node)) {
      out.assign(n, T(0.0));
      out[0] = T(t0);
      if (n > 1) out[1] = T(1.0);
    } else if (const auto* in = std::get_if<InputVar>(&node)) {
      out.assign(n, T(0.0));
      for (std::size_t k = 0; k < n && k < x[in->var].size(); ++k) out[k] = x[in->var][k];
    } else if (const auto* c = std::get_if<Const>(&node)) {
      out.assign(n, T(0.0));
      out[0] = T(c->value);
    } else if (const auto* u = std::get_if<Unary>(&node)) {
      const Series<T> a = arg(u->arg);
      switch (u->op) {
        case UnaryOp::Identity: out = a; break;
        case UnaryOp::Neg:
          out = a;
          for (auto& e : out) e = -e;
          break;
        case UnaryOp::Exp: out = tps::exp_series(a, n); break;
        case UnaryOp::Log: out = tps::log_series(a, n); break;
        case UnaryOp::Sqrt: out = tps::sqrt_series(a, n); break;
        case UnaryOp::Sin: {
          Series<T> c2;
          tps::sin_cos(a, n, out, c2);
          break;
        }
        case UnaryOp::Cos: {
          Series<T> s2;
          tps::sin_cos(a, n, s2, out);
          break;
        }
      }
    } else if (const auto* b = std::get_if<Binary>(&node)) {
      const Series<T> a = arg(b->lhs), c = arg(b->rhs);
      switch (b->op) {
        case BinaryOp::Add:
          out.resize(n);
          for (std::size_t k = 0; k < n; ++k) out[k] = a[k] + c[k];
          break;
        case BinaryOp::Sub:
          out.resize(n);
          for (std::size_t k = 0; k < n; ++k) out[k] = a[k] - c[k];
          break;
        case BinaryOp::Mul: out = tps::mul(a, c, n); break;
        case BinaryOp::Div: out = tps::div(a, c, n); break;
      }
    } else if (const auto* p = std::get_if<IntPow>(&node)) {
      out = tps::int_pow(arg(p->base), p->exponent, n);
    } else {
      const auto& d = std::get<Deriv>(node);
      const Series<T>& a = v[d.arg];
      out.assign(n, T(0.0));
      for (std::size_t k = 0; k < n; ++k) {
        double f = 1.0;  // (k+p)! / k!
        for (int q = 1; q <= d.order; ++q) f *= double(k + q);
        if (k + d.order < a.size()) out[k] = T(f) * a[k + d.order];
      }
    }
  }
  return v;
}

/// Every node's series through order K (all outputs demanded to K).
std::vector<Series<double>> taylor_eval(const CodeList& code, double t0,
                                        const std::vector<Series<double>>& x, int K);

}  // namespace sigmadae
