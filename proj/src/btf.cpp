#include "sigmadae/btf.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <queue>
#include <set>

namespace sigmadae {

int BlockPartition::block_start(int l) const {
  int b = 0;
  for (int k = 0; k < l; ++k) b += blocks[k].size();
  return b;
}

namespace {

// Strongly connected components (Tarjan, iterative). Returns the component
// id of every vertex.
std::vector<int> strong_components(const std::vector<std::vector<int>>& adj, int& count) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int next_index = 0;
  count = 0;

  struct Frame {
    int v;
    std::size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < adj[f.v].size()) {
        const int w = adj[f.v][f.edge++];
        if (index[w] < 0) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const int v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
    }
  }
  return comp;
}

BlockPartition triangularize(int n, const std::vector<std::pair<int, int>>& entries,
                             const Transversal& t) {
  std::vector<int> col_to_row(n, -1);
  for (int i = 0; i < n; ++i) col_to_row[t.assignment[i]] = i;

  // Edge j -> j' when the row matched to j' has an entry in column j.
  std::vector<std::vector<int>> adj(n);
  for (const auto& [i, j] : entries) {
    const int jp = t.assignment[i];
    if (j != jp) adj[j].push_back(jp);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  int ncomp = 0;
  const std::vector<int> comp = strong_components(adj, ncomp);

  std::vector<std::set<int>> succ(ncomp);
  std::vector<int> min_row(ncomp, n);
  for (int j = 0; j < n; ++j) {
    min_row[comp[j]] = std::min(min_row[comp[j]], col_to_row[j]);
    for (int jp : adj[j])
      if (comp[jp] != comp[j]) succ[comp[j]].insert(comp[jp]);
  }

  // A component may only be placed after every component it feeds.
  std::vector<std::vector<int>> pred(ncomp);
  std::vector<int> remaining(ncomp, 0);
  for (int x = 0; x < ncomp; ++x) {
    remaining[x] = static_cast<int>(succ[x].size());
    for (int y : succ[x]) pred[y].push_back(x);
  }
  using Item = std::pair<int, int>;  // (smallest equation index, component)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
  for (int x = 0; x < ncomp; ++x)
    if (remaining[x] == 0) ready.push({min_row[x], x});

  BlockPartition part;
  part.matching = t;
  part.row_block.assign(n, -1);
  part.col_block.assign(n, -1);
  std::vector<int> order;
  while (!ready.empty()) {
    const int x = ready.top().second;
    ready.pop();
    order.push_back(x);
    for (int p : pred[x])
      if (--remaining[p] == 0) ready.push({min_row[p], p});
  }
  if (static_cast<int>(order.size()) != ncomp)
    throw std::logic_error("triangularize: condensation is not acyclic");

  std::vector<int> block_of_comp(ncomp);
  for (std::size_t l = 0; l < order.size(); ++l) block_of_comp[order[l]] = static_cast<int>(l);
  part.blocks.resize(order.size());
  for (int j = 0; j < n; ++j) {
    const int l = block_of_comp[comp[j]];
    part.blocks[l].cols.push_back(j);
    part.blocks[l].rows.push_back(col_to_row[j]);
    part.col_block[j] = l;
    part.row_block[col_to_row[j]] = l;
  }
  part.row_pos.assign(n, -1);
  part.col_pos.assign(n, -1);
  for (auto& b : part.blocks) {
    std::sort(b.rows.begin(), b.rows.end());
    for (int i : b.rows) {
      part.row_pos[i] = static_cast<int>(part.row_perm.size());
      part.row_perm.push_back(i);
    }
    for (int j : b.cols) {
      part.col_pos[j] = static_cast<int>(part.col_perm.size());
      part.col_perm.push_back(j);
    }
  }
  return part;
}

}  // namespace

BlockPartition coarse_btf(const JacobianPattern& pattern, const Transversal& t) {
  return triangularize(pattern.n, pattern.s, t);
}

BlockPartition fine_btf(const JacobianPattern& pattern, const Transversal& t) {
  for (int i = 0; i < pattern.n; ++i)
    if (!pattern.in_s0(i, t.assignment[i]))
      throw std::invalid_argument("fine_btf: transversal is not contained in S0");
  return triangularize(pattern.n, pattern.s0, t);
}

LocalOffsets local_offsets(const SignatureMatrix& sm, const BlockPartition& part,
                           const GlobalOffsets& offs) {
  const int n = sm.size();
  LocalOffsets local;
  local.c_hat.assign(n, 0);
  local.d_hat.assign(n, 0);
  for (int l = 0; l < part.num_blocks(); ++l) {
    const Block& b = part.blocks[l];
    const SignatureMatrix sub = sm.submatrix(b.rows, b.cols);
    Transversal tb;
    tb.assignment.resize(b.rows.size());
    for (std::size_t a = 0; a < b.rows.size(); ++a) {
      const int j = part.matching.assignment[b.rows[a]];
      const auto it = std::find(b.cols.begin(), b.cols.end(), j);
      if (it == b.cols.end())
        throw UniformityViolation("local_offsets: block pairing leaves the block");
      tb.assignment[a] = static_cast<int>(it - b.cols.begin());
      tb.value += sub(static_cast<int>(a), tb.assignment[a]).value();
    }
    const GlobalOffsets lo = canonical_offsets(sub, tb);

    const int lead = offs.c[b.rows[0]] - lo.c[0];
    for (std::size_t a = 0; a < b.rows.size(); ++a) {
      if (offs.c[b.rows[a]] - lo.c[a] != lead || offs.d[b.cols[a]] - lo.d[a] != lead)
        throw UniformityViolation("local_offsets: lead time is not uniform in block " +
                                  std::to_string(l + 1));
      local.c_hat[part.row_pos[b.rows[a]]] = lo.c[a];
      local.d_hat[part.col_pos[b.cols[a]]] = lo.d[a];
    }
    if (lead < 0) throw UniformityViolation("local_offsets: negative lead time");
    local.lead_times.push_back(lead);
  }
  return local;
}

std::vector<std::vector<char>> block_pattern(const JacobianPattern& pattern,
                                             const BlockPartition& part, int l) {
  const Block& b = part.blocks[l];
  std::vector<std::vector<char>> out(b.rows.size(), std::vector<char>(b.cols.size(), 0));
  for (const auto& [i, j] : pattern.s0) {
    if (part.row_block[i] != l || part.col_block[j] != l) continue;
    const auto a = std::find(b.rows.begin(), b.rows.end(), i) - b.rows.begin();
    const auto c = std::find(b.cols.begin(), b.cols.end(), j) - b.cols.begin();
    out[a][c] = 1;
  }
  return out;
}

namespace {

bool has_perfect_matching(const std::vector<std::vector<char>>& p, std::vector<int>& col_of_row) {
  const int n = static_cast<int>(p.size());
  std::vector<int> row_of_col(n, -1);
  col_of_row.assign(n, -1);
  std::vector<char> seen;
  auto augment = [&](auto&& self, int r) -> bool {
    for (int c = 0; c < n; ++c) {
      if (!p[r][c] || seen[c]) continue;
      seen[c] = 1;
      if (row_of_col[c] < 0 || self(self, row_of_col[c])) {
        row_of_col[c] = r;
        col_of_row[r] = c;
        return true;
      }
    }
    return false;
  };
  for (int r = 0; r < n; ++r) {
    seen.assign(n, 0);
    if (!augment(augment, r)) return false;
  }
  return true;
}

}  // namespace

bool is_strong_hall(const std::vector<std::vector<char>>& pattern) {
  const int n = static_cast<int>(pattern.size());
  if (n <= 1) return n == 1 && pattern[0][0];
  if (n <= 20) {
    std::vector<std::uint32_t> col_rows(n, 0);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (pattern[r][c]) col_rows[c] |= (1u << r);
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t set = 1; set < full; ++set) {
      std::uint32_t rows = 0;
      for (int c = 0; c < n; ++c)
        if (set & (1u << c)) rows |= col_rows[c];
      if (std::popcount(rows) < std::popcount(set) + 1) return false;
    }
    return true;
  }
  std::vector<int> col_of_row;
  if (!has_perfect_matching(pattern, col_of_row)) return false;
  std::vector<std::vector<int>> adj(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (pattern[r][c] && c != col_of_row[r]) adj[c].push_back(col_of_row[r]);
  int count = 0;
  strong_components(adj, count);
  return count == 1;
}

}  // namespace sigmadae
