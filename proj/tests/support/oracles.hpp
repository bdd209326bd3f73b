#pragma once

// Brute-force reference implementations used only by tests. Each one is
// deliberately naive so it shares no logic with the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "sigmadae/codelist.hpp"
#include "sigmadae/sigma.hpp"

namespace oracle {

using sigmadae::ExtInt;
using sigmadae::SignatureMatrix;

/// Largest transversal value over all n! permutations, or nullopt if every
/// permutation meets a -inf entry.
inline std::optional<int> hvt_value(const SignatureMatrix& sm) {
  const int n = sm.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<int> best;
  do {
    int sum = 0;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (!sm(i, perm[i]).is_finite()) ok = false;
      else sum += sm(i, perm[i]).value();
    }
    if (ok && (!best || sum > *best)) best = sum;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Every valid normalized offset pair with all c_i <= bound. For fixed c the
/// only candidate d is d_j = max_i (sigma_ij + c_i); the pair is valid iff
/// sum d - sum c equals the HVT value (equality on some HVT).
inline std::vector<sigmadae::GlobalOffsets> valid_offsets(const SignatureMatrix& sm, int bound) {
  const int n = sm.size();
  const auto val = hvt_value(sm);
  std::vector<sigmadae::GlobalOffsets> out;
  if (!val) return out;
  std::vector<int> c(n, 0);
  while (true) {
    if (*std::min_element(c.begin(), c.end()) == 0) {
      std::vector<int> d(n, 0);
      bool ok = true;
      for (int j = 0; j < n && ok; ++j) {
        ExtInt best;
        for (int i = 0; i < n; ++i)
          if (sm(i, j).is_finite()) best = max(best, ExtInt(sm(i, j).value() + c[i]));
        if (!best.is_finite()) ok = false;
        else d[j] = std::max(0, best.value());
      }
      if (ok && std::accumulate(d.begin(), d.end(), 0) - std::accumulate(c.begin(), c.end(), 0) ==
                    *val)
        out.push_back({c, d});
    }
    int k = 0;
    while (k < n && c[k] == bound) c[k++] = 0;
    if (k == n) break;
    ++c[k];
  }
  return out;
}

/// Random n x n signature matrix with entries -inf or 0..max_entry, with a
/// finite transversal planted on a random permutation.
inline SignatureMatrix random_sigma(std::mt19937& rng, int n, int max_entry = 3,
                                    double p_inf = 0.4) {
  SignatureMatrix sm(n);
  std::uniform_int_distribution<int> entry(0, max_entry);
  std::bernoulli_distribution absent(p_inf);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!absent(rng)) sm(i, j) = entry(rng);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int i = 0; i < n; ++i)
    if (!sm(i, perm[i]).is_finite()) sm(i, perm[i]) = entry(rng);
  return sm;
}

/// sigma_j of an expression tree: the largest sum of Deriv orders along any
/// root-to-leaf path that ends at x_j.
inline ExtInt path_depth(const sigmadae::ExprPtr& e, int j) {
  using K = sigmadae::ExprNode::Kind;
  switch (e->kind) {
    case K::Var: return e->index == j ? ExtInt(0) : ExtInt();
    case K::Time:
    case K::Const: return ExtInt();
    case K::Deriv: return path_depth(e->a, j) + e->index;
    default: {
      ExtInt m = path_depth(e->a, j);
      if (e->b) m = max(m, path_depth(e->b, j));
      return m;
    }
  }
}

/// Random expression over n variables with at most `depth` levels.
inline sigmadae::ExprPtr random_expr(std::mt19937& rng, int n, int depth) {
  using namespace sigmadae;
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<int> var(0, n - 1);
  const int kind = depth <= 0 ? pick(rng) % 3 : pick(rng);
  switch (kind) {
    case 0:
    case 1: return make_var(var(rng));
    case 2: return std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? make_time()
                                                                     : make_const(1.5);
    case 3: {
      static const UnaryOp ops[] = {UnaryOp::Neg, UnaryOp::Sin, UnaryOp::Cos, UnaryOp::Exp};
      return make_unary(ops[std::uniform_int_distribution<int>(0, 3)(rng)],
                        random_expr(rng, n, depth - 1));
    }
    case 4: return make_pow(random_expr(rng, n, depth - 1),
                            std::uniform_int_distribution<int>(-1, 3)(rng));
    case 5:
    case 6: return make_deriv(random_expr(rng, n, depth - 1),
                              std::uniform_int_distribution<int>(0, 2)(rng));
    default: {
      static const BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul,
                                     BinaryOp::Div};
      return make_binary(ops[std::uniform_int_distribution<int>(0, 3)(rng)],
                         random_expr(rng, n, depth - 1), random_expr(rng, n, depth - 1));
    }
  }
}

/// Left-hand sides of a random square DAE; equation i adds a derivative of
/// x_{perm(i)} so a finite transversal always exists.
inline std::vector<sigmadae::ExprPtr> random_equations(std::mt19937& rng, int n, int depth) {
  using namespace sigmadae;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<ExprPtr> out;
  for (int i = 0; i < n; ++i)
    out.push_back(make_binary(
        BinaryOp::Add,
        make_deriv(make_var(perm[i]), std::uniform_int_distribution<int>(0, 2)(rng)),
        random_expr(rng, n, depth - 1)));
  return out;
}

/// Model with equations lhs_i = 0.
inline sigmadae::DaeModel model_from(const std::vector<sigmadae::ExprPtr>& lhs) {
  using namespace sigmadae;
  const int n = static_cast<int>(lhs.size());
  DaeModel m;
  m.code.n = n;
  m.code.nodes.push_back(InputTime{});
  for (int j = 0; j < n; ++j) {
    m.code.nodes.push_back(InputVar{j});
    m.variable_names.push_back("x" + std::to_string(j + 1));
    m.equation_names.push_back("f" + std::to_string(j + 1));
  }
  for (const auto& e : lhs) lower_equation(m.code, e, make_const(0.0));
  return m;
}

inline sigmadae::DaeModel random_model(std::mt19937& rng, int n, int depth) {
  return model_from(random_equations(rng, n, depth));
}

/// Central finite difference of f at x along coordinate k.
inline double central_difference(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x, std::size_t k, double h) {
  const double x0 = x[k];
  x[k] = x0 + h;
  const double fp = f(x);
  x[k] = x0 - h;
  const double fm = f(x);
  return (fp - fm) / (2 * h);
}

}  // namespace oracle
