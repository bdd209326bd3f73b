#include "sigmadae/sigma.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace sigmadae {

SignatureMatrix::SignatureMatrix(std::initializer_list<std::initializer_list<ExtInt>> rows)
    : SignatureMatrix(static_cast<int>(rows.size())) {
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n_)
      throw std::invalid_argument("SignatureMatrix: rows must have length n");
    int j = 0;
    for (const auto& e : row) (*this)(i, j++) = e;
    ++i;
  }
}

int SignatureMatrix::max_finite() const {
  int m = 0;
  for (const auto& e : data_)
    if (e.is_finite()) m = std::max(m, e.value());
  return m;
}

SignatureMatrix SignatureMatrix::submatrix(const std::vector<int>& rows,
                                           const std::vector<int>& cols) const {
  if (rows.size() != cols.size())
    throw std::invalid_argument("submatrix: row and column lists differ in length");
  SignatureMatrix out(static_cast<int>(rows.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      out(static_cast<int>(a), static_cast<int>(b)) = (*this)(rows[a], cols[b]);
  return out;
}

bool JacobianPattern::in_s0(int i, int j) const {
  return std::find(s0.begin(), s0.end(), std::make_pair(i, j)) != s0.end();
}

// ---------------------------------------------------------------------------
// Signature vectors
// ---------------------------------------------------------------------------

std::vector<std::vector<ExtInt>> signature_vectors(const CodeList& code) {
  const int n = code.n;
  std::vector<std::vector<ExtInt>> sig(code.nodes.size(), std::vector<ExtInt>(n));
  for (int r = 0; r < code.size(); ++r) {
    auto& out = sig[r];
    const Node& node = code.nodes[r];
    if (const auto* in = std::get_if<InputVar>(&node)) {
      out[in->var] = 0;
    } else if (const auto* d = std::get_if<Deriv>(&node)) {
      for (int j = 0; j < n; ++j) out[j] = sig[d->arg][j] + d->order;
    } else {
      for (int arg : operands(node))
        for (int j = 0; j < n; ++j) out[j] = max(out[j], sig[arg][j]);
    }
  }
  return sig;
}

SignatureMatrix signature_matrix(const DaeModel& model) {
  const int n = model.size();
  const auto sig = signature_vectors(model.code);
  SignatureMatrix sm(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sm(i, j) = sig[model.code.outputs[i]][j];
  return sm;
}

// ---------------------------------------------------------------------------
// Assignment
// ---------------------------------------------------------------------------

namespace {

struct AssignmentResult {
  std::vector<int> row_to_col;
  std::vector<long long> u;  // row potentials
  std::vector<long long> v;  // column potentials
};

// Minimum-cost perfect assignment (shortest augmenting paths with
// potentials). Potentials satisfy u_i + v_j <= cost_ij with equality on the
// returned assignment.
AssignmentResult min_cost_assignment(const std::vector<std::vector<long long>>& cost) {
  const int n = static_cast<int>(cost.size());
  constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);  // p[col] = row, 1-based
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<long long> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      long long delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  AssignmentResult res;
  res.row_to_col.assign(n, -1);
  for (int j = 1; j <= n; ++j) res.row_to_col[p[j] - 1] = j - 1;
  res.u.assign(u.begin() + 1, u.end());
  res.v.assign(v.begin() + 1, v.end());
  return res;
}

// Alternating-path search: give row r a different tight column, ending at
// `freed`. Rows <= `fixed` never move.
bool shift_row(const std::vector<std::vector<char>>& tight, std::vector<int>& row_to_col,
               std::vector<int>& col_to_row, std::vector<char>& seen, int r, int fixed,
               int freed) {
  const int n = static_cast<int>(tight.size());
  for (int c = 0; c < n; ++c) {
    if (!tight[r][c] || seen[c] || c == row_to_col[r]) continue;
    seen[c] = 1;
    if (c == freed ||
        (col_to_row[c] > fixed &&
         shift_row(tight, row_to_col, col_to_row, seen, col_to_row[c], fixed, freed))) {
      row_to_col[r] = c;
      col_to_row[c] = r;
      return true;
    }
  }
  return false;
}

// Re-route the matching so that `row` takes `col`, keeping rows < row fixed.
bool reroute(const std::vector<std::vector<char>>& tight, std::vector<int>& row_to_col,
             std::vector<int>& col_to_row, int row, int col) {
  const int n = static_cast<int>(tight.size());
  const int freed = row_to_col[row];
  std::vector<char> seen(n, 0);
  seen[col] = 1;
  if (!shift_row(tight, row_to_col, col_to_row, seen, col_to_row[col], row, freed))
    return false;
  row_to_col[row] = col;
  col_to_row[col] = row;
  return true;
}

}  // namespace

Transversal highest_value_transversal(const SignatureMatrix& sm) {
  const int n = sm.size();
  if (n == 0) return {};
  const long long big = static_cast<long long>(n) * sm.max_finite() + 1;
  std::vector<std::vector<long long>> cost(n, std::vector<long long>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost[i][j] = sm(i, j).is_finite() ? -sm(i, j).value() : big;

  AssignmentResult res = min_cost_assignment(cost);
  for (int i = 0; i < n; ++i)
    if (!sm(i, res.row_to_col[i]).is_finite())
      throw StructurallyIllPosed("signature matrix has no transversal of finite entries");

  // Every optimal transversal uses only tight finite entries.
  std::vector<std::vector<char>> tight(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      tight[i][j] = sm(i, j).is_finite() && cost[i][j] == res.u[i] + res.v[j];

  std::vector<int> row_to_col = res.row_to_col;
  std::vector<int> col_to_row(n);
  for (int i = 0; i < n; ++i) col_to_row[row_to_col[i]] = i;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < row_to_col[i]; ++j) {
      if (!tight[i][j] || col_to_row[j] < i) continue;
      if (reroute(tight, row_to_col, col_to_row, i, j)) break;
    }
  }

  Transversal t;
  t.assignment = row_to_col;
  for (int i = 0; i < n; ++i) t.value += sm(i, row_to_col[i]).value();
  return t;
}

GlobalOffsets canonical_offsets(const SignatureMatrix& sm, const Transversal& t) {
  const int n = sm.size();
  GlobalOffsets offs{std::vector<int>(n, 0), std::vector<int>(n, 0)};
  const long long guard = static_cast<long long>(n) * (1 + sm.max_finite()) + 1;
  for (long long iter = 0;; ++iter) {
    if (iter > guard)
      throw std::logic_error("canonical_offsets: fixed point did not converge");
    for (int j = 0; j < n; ++j) {
      ExtInt best;
      for (int i = 0; i < n; ++i) best = max(best, sm(i, j) + offs.c[i]);
      offs.d[j] = best.value();
    }
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      const int j = t.assignment[i];
      const int ci = offs.d[j] - sm(i, j).value();
      if (ci != offs.c[i]) {
        offs.c[i] = ci;
        changed = true;
      }
    }
    if (!changed) break;
  }
  if (n > 0 && *std::min_element(offs.c.begin(), offs.c.end()) != 0)
    throw std::logic_error("canonical_offsets: result is not normalized");
  return offs;
}

JacobianPattern jacobian_pattern(const SignatureMatrix& sm, const GlobalOffsets& offs) {
  JacobianPattern p;
  p.n = sm.size();
  for (int i = 0; i < p.n; ++i) {
    for (int j = 0; j < p.n; ++j) {
      if (!sm(i, j).is_finite()) continue;
      p.s.emplace_back(i, j);
      if (offs.d[j] - offs.c[i] == sm(i, j).value()) p.s0.emplace_back(i, j);
    }
  }
  return p;
}

StructuralMetrics structural_metrics(const SignatureMatrix& sm, const GlobalOffsets& offs) {
  (void)sm;
  StructuralMetrics m;
  m.dof = std::accumulate(offs.d.begin(), offs.d.end(), 0) -
          std::accumulate(offs.c.begin(), offs.c.end(), 0);
  if (!offs.c.empty()) {
    m.index = *std::max_element(offs.c.begin(), offs.c.end());
    if (std::find(offs.d.begin(), offs.d.end(), 0) != offs.d.end()) m.index += 1;
  }
  return m;
}

bool offsets_valid(const SignatureMatrix& sm, const GlobalOffsets& offs) {
  const int n = sm.size();
  for (int i = 0; i < n; ++i) {
    if (offs.c[i] < 0 || offs.d[i] < 0) return false;
    for (int j = 0; j < n; ++j)
      if (sm(i, j).is_finite() && offs.d[j] - offs.c[i] < sm(i, j).value()) return false;
  }
  return true;
}

}  // namespace sigmadae
