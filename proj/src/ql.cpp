#include "sigmadae/ql.hpp"

#include <algorithm>
#include <stdexcept>

namespace sigmadae {

const char* to_string(QlCode code) {
  switch (code) {
    case QlCode::I: return "I";
    case QlCode::L: return "L";
    case QlCode::N: return "N";
  }
  return "?";
}

namespace {

// Whether the operation of `node` is linear in its operand at position k,
// given the offsets of all operands.
bool linear_in_operand(const Node& node, std::size_t k, const std::vector<UpperInt>& arg_alpha) {
  if (const auto* u = std::get_if<Unary>(&node))
    return u->op == UnaryOp::Neg || u->op == UnaryOp::Identity;
  if (const auto* b = std::get_if<Binary>(&node)) {
    switch (b->op) {
      case BinaryOp::Add:
      case BinaryOp::Sub: return true;
      case BinaryOp::Mul: return arg_alpha[1 - k] > UpperInt(0);
      case BinaryOp::Div: return k == 0 && arg_alpha[1] > UpperInt(0);
    }
  }
  if (const auto* p = std::get_if<IntPow>(&node)) return p->exponent == 1;
  return false;
}

bool is_algebraic(const Node& node) {
  return std::holds_alternative<Unary>(node) || std::holds_alternative<Binary>(node) ||
         std::holds_alternative<IntPow>(node);
}

// Nodes the output of equation i depends on.
std::vector<char> cone(const CodeList& code, int equation) {
  std::vector<char> in(code.nodes.size(), 0);
  in[code.outputs[equation]] = 1;
  for (int r = code.outputs[equation]; r >= 0; --r) {
    if (!in[r]) continue;
    for (int a : operands(code.nodes[r])) in[a] = 1;
  }
  return in;
}

QlCode decode(UpperInt enc) {
  if (enc.is_inf() || enc.value() == 0) return QlCode::L;
  if (enc.value() == -1) return QlCode::N;
  throw std::logic_error("vectorized_ql: output offset is neither 0 nor -1");
}

void fill_gammas(QlReport& rep, const GlobalOffsets& offs, const BlockPartition& part,
                 const LocalOffsets& local) {
  const std::size_t n = rep.global.size();
  rep.gamma_eq.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) rep.gamma_eq[i] = rep.blockwise[i] == QlCode::L;
  rep.gamma_block.assign(part.num_blocks(), true);
  for (int l = 0; l < part.num_blocks(); ++l)
    for (int i : part.blocks[l].rows)
      if (local.c_hat[part.row_pos[i]] == 0 && !rep.gamma_eq[i]) rep.gamma_block[l] = false;
  rep.gamma_dae = true;
  rep.all_equations_ql = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (rep.global[i] != QlCode::L) {
      rep.all_equations_ql = false;
      if (offs.c[i] == 0) rep.gamma_dae = false;
    }
  }
}

}  // namespace

std::vector<std::vector<int>> m_sets(const SignatureMatrix& sm, const GlobalOffsets& offs,
                                     QlScope scope, const BlockPartition* part) {
  if (scope == QlScope::Block && part == nullptr)
    throw std::invalid_argument("m_sets: block scope needs a block partition");
  const int n = sm.size();
  std::vector<std::vector<int>> out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!sm(i, j).is_finite() || sm(i, j).value() != offs.d[j] - offs.c[i]) continue;
      if (scope == QlScope::Block && part->col_block[j] != part->row_block[i]) continue;
      out[i].push_back(j);
    }
  }
  return out;
}

std::vector<UpperInt> propagate_offsets(const CodeList& code, int equation,
                                        const std::vector<int>& m_set,
                                        const SignatureMatrix& sm) {
  std::vector<UpperInt> alpha(code.nodes.size());
  for (int r = 0; r < code.size(); ++r) {
    const Node& node = code.nodes[r];
    if (const auto* in = std::get_if<InputVar>(&node)) {
      if (std::find(m_set.begin(), m_set.end(), in->var) != m_set.end())
        alpha[r] = sm(equation, in->var).value();
    } else if (const auto* d = std::get_if<Deriv>(&node)) {
      alpha[r] = alpha[d->arg] - d->order;
    } else {
      for (int a : operands(node)) alpha[r] = min(alpha[r], alpha[a]);
    }
  }
  return alpha;
}

EquationQl ql_analysis(const CodeList& code, int equation, const std::vector<int>& m_set,
                       const SignatureMatrix& sm) {
  EquationQl eq;
  eq.m_set = m_set;
  eq.offsets = propagate_offsets(code, equation, m_set, sm);
  eq.codes.assign(code.nodes.size(), std::nullopt);

  const int out = code.outputs[equation];
  const UpperInt alpha_out = eq.offsets[out];
  if (!m_set.empty() && alpha_out != UpperInt(0))
    throw std::logic_error("ql_analysis: offset of the output node is not 0");

  const std::vector<char> in_cone = cone(code, equation);
  for (int r = 0; r <= out; ++r) {
    if (!in_cone[r]) continue;
    const Node& node = code.nodes[r];
    const UpperInt a = eq.offsets[r];
    if (a > UpperInt(0)) {
      eq.codes[r] = QlCode::I;
      continue;
    }
    if (a != UpperInt(0))
      throw std::logic_error("ql_analysis: negative offset inside the equation");
    QlCode c = QlCode::L;
    if (const auto* d = std::get_if<Deriv>(&node); d && d->order == 0) {
      c = *eq.codes[d->arg];
    } else if (is_algebraic(node)) {
      const std::vector<int> args = operands(node);
      std::vector<UpperInt> arg_alpha;
      for (int x : args) arg_alpha.push_back(eq.offsets[x]);
      for (std::size_t k = 0; k < args.size(); ++k) {
        if (arg_alpha[k] != UpperInt(0)) continue;
        if (*eq.codes[args[k]] != QlCode::L || !linear_in_operand(node, k, arg_alpha))
          c = QlCode::N;
      }
    }
    eq.codes[r] = c;
    if (c == QlCode::N) {
      eq.code = QlCode::N;
      eq.first_nonlinear = r;
      return eq;
    }
  }
  eq.code = QlCode::L;
  return eq;
}

QlReport vectorized_ql(const DaeModel& model, const SignatureMatrix& sm,
                       const GlobalOffsets& offs, const BlockPartition& part,
                       const LocalOffsets& local) {
  const CodeList& code = model.code;
  const int n = code.n;
  QlReport rep;

  for (QlScope scope : {QlScope::Global, QlScope::Block}) {
    const auto msets = m_sets(sm, offs, scope, &part);
    // in_m[j][i]: variable j belongs to M_i
    std::vector<std::vector<char>> in_m(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int j : msets[i]) in_m[j][i] = 1;

    std::vector<std::vector<UpperInt>> enc(code.nodes.size(), std::vector<UpperInt>(n));
    for (int r = 0; r < code.size(); ++r) {
      const Node& node = code.nodes[r];
      auto& out = enc[r];
      if (const auto* in = std::get_if<InputVar>(&node)) {
        for (int i = 0; i < n; ++i)
          if (in_m[in->var][i]) out[i] = sm(i, in->var).value();
      } else if (const auto* d = std::get_if<Deriv>(&node)) {
        for (int i = 0; i < n; ++i) out[i] = enc[d->arg][i] - d->order;
      } else if (is_algebraic(node)) {
        const std::vector<int> args = operands(node);
        std::vector<UpperInt> arg_alpha(args.size());
        for (int i = 0; i < n; ++i) {
          UpperInt m;
          for (std::size_t k = 0; k < args.size(); ++k) {
            arg_alpha[k] = enc[args[k]][i];
            m = min(m, arg_alpha[k]);
          }
          if (m == UpperInt(0)) {
            // Every operand at 0 is L by encoding; only linearity of the
            // operation can turn the result into N.
            for (std::size_t k = 0; k < args.size(); ++k)
              if (arg_alpha[k] == UpperInt(0) && !linear_in_operand(node, k, arg_alpha))
                m = -1;
          }
          out[i] = m;
        }
      }
    }

    std::vector<QlCode> codes(n);
    for (int i = 0; i < n; ++i) codes[i] = decode(enc[code.outputs[i]][i]);
    (scope == QlScope::Global ? rep.global : rep.blockwise) = std::move(codes);
  }
  fill_gammas(rep, offs, part, local);
  return rep;
}

QlReport per_equation_ql(const DaeModel& model, const SignatureMatrix& sm,
                         const GlobalOffsets& offs, const BlockPartition& part,
                         const LocalOffsets& local) {
  QlReport rep;
  const int n = model.size();
  const auto global = m_sets(sm, offs, QlScope::Global);
  const auto block = m_sets(sm, offs, QlScope::Block, &part);
  for (int i = 0; i < n; ++i) {
    rep.global.push_back(ql_analysis(model.code, i, global[i], sm).code);
    rep.blockwise.push_back(ql_analysis(model.code, i, block[i], sm).code);
  }
  fill_gammas(rep, offs, part, local);
  return rep;
}

}  // namespace sigmadae
