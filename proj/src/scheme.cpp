#include "sigmadae/scheme.hpp"

#include <algorithm>

namespace sigmadae {

const char* to_string(Determinacy d) {
  return d == Determinacy::Square ? "square" : "underdetermined";
}
const char* to_string(Linearity l) { return l == Linearity::Linear ? "linear" : "nonlinear"; }
const char* to_string(SchemeMode m) { return m == SchemeMode::Basic ? "basic" : "block"; }

namespace {

void normalize(PairSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

int max_of(const std::vector<int>& v, std::size_t from, std::size_t to) {
  int m = 0;
  for (std::size_t a = from; a < to; ++a) m = std::max(m, v[a]);
  return m;
}

}  // namespace

InitSets basic_init_set(const GlobalOffsets& offs, bool gamma_dae) {
  InitSets out;
  const int g = gamma_dae ? 1 : 0;
  for (std::size_t j = 0; j < offs.d.size(); ++j)
    for (int r = 0; r <= offs.d[j] - g; ++r) out.guesses.push_back({static_cast<int>(j), r});
  normalize(out.guesses);
  return out;
}

InitSets fine_block_init(const LocalOffsets& local, const std::vector<bool>& gamma_block,
                         const BlockPartition& part) {
  InitSets out;
  for (int l = 0; l < part.num_blocks(); ++l) {
    const std::size_t b = part.block_start(l);
    const std::size_t e = b + part.blocks[l].size();
    const int max_d = max_of(local.d_hat, b, e);
    const int max_c = max_of(local.c_hat, b, e);
    const int gamma = gamma_block[l] ? 1 : 0;
    for (int q = -max_d; q <= -gamma; ++q) {
      for (std::size_t pos = b; pos < e; ++pos) {
        const int r = q + local.d_hat[pos];
        if (r < 0) continue;
        const DerivPair p{part.col_perm[pos], r};
        (q < -max_c ? out.values : out.guesses).push_back(p);
      }
    }
  }
  normalize(out.values);
  normalize(out.guesses);
  return out;
}

StageSets stage_sets(int k, const JacobianPattern& pattern, const BlockPartition& part,
                     const GlobalOffsets& offs) {
  const int n = pattern.n;
  StageSets s;
  s.stage = k;
  s.prior_bound.resize(n);
  for (int j = 0; j < n; ++j) s.prior_bound[j] = std::max(0, k + offs.d[j]);

  for (int l = 0; l < part.num_blocks(); ++l) {
    BlockStageSets bs;
    bs.block = l;
    for (int i : part.blocks[l].rows)
      if (k + offs.c[i] >= 0) bs.equations.push_back({i, k + offs.c[i]});
    for (int j : part.blocks[l].cols)
      if (k + offs.d[j] >= 0) bs.unknowns.push_back({j, k + offs.d[j]});
    for (const auto& [i, j] : pattern.s0) {
      if (part.row_block[i] != l || part.col_block[j] <= l) continue;
      if (k + offs.c[i] < 0) continue;
      bs.cross_block_inputs.push_back({j, k + offs.d[j]});
    }
    normalize(bs.equations);
    normalize(bs.unknowns);
    normalize(bs.cross_block_inputs);
    s.blocks.push_back(std::move(bs));
  }
  return s;
}

StageClass classify_stage(int k, int l, const BlockPartition& part, const GlobalOffsets& offs,
                          const LocalOffsets& local, const std::vector<bool>& gamma_eq) {
  const std::size_t b = part.block_start(l);
  const std::size_t e = b + part.blocks[l].size();
  const int kl = k + local.lead_times[l];
  StageClass sc;
  sc.skip = kl < -max_of(local.c_hat, b, e);
  sc.determinacy = kl < 0 ? Determinacy::Underdetermined : Determinacy::Square;
  sc.linearity = Linearity::Linear;
  for (int i : part.blocks[l].rows)
    if (k + offs.c[i] == 0 && !gamma_eq[i]) sc.linearity = Linearity::Nonlinear;
  return sc;
}

SchemeInputs basic_scheme_inputs(const JacobianPattern& pattern, const Transversal& t,
                                 const GlobalOffsets& offs, const QlReport& ql) {
  const int n = pattern.n;
  SchemeInputs in;
  in.pattern = pattern;
  in.offs = offs;
  Block all;
  for (int i = 0; i < n; ++i) {
    all.rows.push_back(i);
    all.cols.push_back(i);
  }
  in.part.blocks = {all};
  in.part.row_perm = all.rows;
  in.part.col_perm = all.cols;
  in.part.row_pos = all.rows;
  in.part.col_pos = all.cols;
  in.part.row_block.assign(n, 0);
  in.part.col_block.assign(n, 0);
  in.part.matching = t;
  in.local.c_hat = offs.c;
  in.local.d_hat = offs.d;
  in.local.lead_times = {0};
  for (QlCode c : ql.global) in.gamma_eq.push_back(c == QlCode::L);
  return in;
}

Schedule render_schedule(int k_min, int k_max, SchemeMode mode, const SchemeInputs& in) {
  Schedule sch;
  sch.mode = mode;
  sch.k_min = k_min;
  sch.k_max = k_max;
  for (int k = k_min; k <= k_max; ++k) {
    const StageSets s = stage_sets(k, in.pattern, in.part, in.offs);
    for (int l = in.part.num_blocks() - 1; l >= 0; --l) {
      const BlockStageSets& bs = s.blocks[l];
      if (bs.unknowns.empty()) continue;
      const StageClass sc = classify_stage(k, l, in.part, in.offs, in.local, in.gamma_eq);
      StageTask t;
      t.stage = k;
      t.block = l;
      t.local_stage = k + in.local.lead_times[l];
      t.equations = bs.equations;
      t.unknowns = bs.unknowns;
      t.cross_block_inputs = bs.cross_block_inputs;
      t.prior_bound = s.prior_bound;
      t.given = sc.skip;
      t.determinacy = sc.determinacy;
      t.linearity = sc.linearity;
      sch.tasks.push_back(std::move(t));
    }
  }
  return sch;
}

InitSets schedule_init_requirements(const Schedule& schedule) {
  InitSets out;
  for (const StageTask& t : schedule.tasks) {
    if (t.given)
      out.values.insert(out.values.end(), t.unknowns.begin(), t.unknowns.end());
    else if (t.determinacy == Determinacy::Underdetermined ||
             t.linearity == Linearity::Nonlinear)
      out.guesses.insert(out.guesses.end(), t.unknowns.begin(), t.unknowns.end());
  }
  normalize(out.values);
  normalize(out.guesses);
  return out;
}

}  // namespace sigmadae
