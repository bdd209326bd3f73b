#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sigmadae/btf.hpp"
#include "support/models.hpp"
#include "support/oracles.hpp"

using namespace sigmadae;

namespace {

struct Pipeline {
  SignatureMatrix sm;
  Transversal t;
  GlobalOffsets offs;
  JacobianPattern pattern;
  BlockPartition fine;
  BlockPartition coarse;
};

Pipeline run(const SignatureMatrix& sm) {
  Pipeline p;
  p.sm = sm;
  p.t = highest_value_transversal(sm);
  p.offs = canonical_offsets(sm, p.t);
  p.pattern = jacobian_pattern(sm, p.offs);
  p.fine = fine_btf(p.pattern, p.t);
  p.coarse = coarse_btf(p.pattern, p.t);
  return p;
}

// Every S0 (resp. S) entry lies in or above the diagonal block of its row.
bool upper_triangular(const std::vector<std::pair<int, int>>& entries, const BlockPartition& b) {
  for (const auto& [i, j] : entries)
    if (b.col_block[j] < b.row_block[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("two-pendula fine BTF, local offsets and lead times") {
  const Pipeline p = run(signature_matrix(testmodels::two_pendula()));
  REQUIRE(p.fine.num_blocks() == 4);
  CHECK(p.fine.blocks[0] == Block{{4}, {4}});
  CHECK(p.fine.blocks[1] == Block{{3}, {5}});
  CHECK(p.fine.blocks[2] == Block{{5}, {3}});
  CHECK(p.fine.blocks[3] == Block{{0, 1, 2}, {0, 1, 2}});
  CHECK(p.fine.row_perm == std::vector<int>{4, 3, 5, 0, 1, 2});
  CHECK(p.fine.col_perm == std::vector<int>{4, 5, 3, 0, 1, 2});

  const LocalOffsets lo = local_offsets(p.sm, p.fine, p.offs);
  CHECK(lo.c_hat == std::vector<int>{0, 0, 0, 0, 0, 2});
  CHECK(lo.d_hat == std::vector<int>{3, 0, 0, 2, 2, 0});
  CHECK(lo.lead_times == std::vector<int>{0, 0, 2, 4});

  // below-block positions: d_j - c_i > sigma_ij
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (p.fine.col_block[j] < p.fine.row_block[i] && p.sm(i, j).is_finite())
        CHECK(p.offs.d[j] - p.offs.c[i] > p.sm(i, j).value());
  for (int l = 0; l < 4; ++l) CHECK(is_strong_hall(block_pattern(p.pattern, p.fine, l)));
}

TEST_CASE("two-pendula coarse BTF") {
  const Pipeline p = run(signature_matrix(testmodels::two_pendula()));
  REQUIRE(p.coarse.num_blocks() == 2);
  CHECK(p.coarse.blocks[0].rows == std::vector<int>{3, 4, 5});
  CHECK(p.coarse.blocks[0].cols == std::vector<int>{3, 4, 5});
  CHECK(p.coarse.blocks[1].rows == std::vector<int>{0, 1, 2});
}

TEST_CASE("trivial shapes") {
  const ExtInt X;
  const Pipeline diag = run(SignatureMatrix{{1, X, X}, {X, 0, X}, {X, X, 2}});
  CHECK(diag.fine.num_blocks() == 3);
  CHECK(diag.coarse.num_blocks() == 3);
  CHECK(diag.fine.row_perm == std::vector<int>{0, 1, 2});  // source order
  const LocalOffsets lo = local_offsets(diag.sm, diag.fine, diag.offs);
  CHECK(lo.c_hat == std::vector<int>{0, 0, 0});
  CHECK(lo.d_hat == std::vector<int>{1, 0, 2});
  CHECK(lo.lead_times == std::vector<int>{0, 0, 0});

  // singleton block with sigma = 0 and c = d = 1 on it
  const Pipeline lift = run(SignatureMatrix{{0, 1}, {X, 0}});
  CHECK(lift.offs.c == std::vector<int>{0, 1});
  REQUIRE(lift.fine.num_blocks() == 2);
  const LocalOffsets ll = local_offsets(lift.sm, lift.fine, lift.offs);
  const int l2 = lift.fine.row_block[1];
  CHECK(ll.c_hat[lift.fine.row_pos[1]] == 0);
  CHECK(ll.d_hat[lift.fine.col_pos[1]] == 0);
  CHECK(ll.lead_times[l2] == 1);

  SignatureMatrix dense(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) dense(i, j) = 0;
  CHECK(run(dense).coarse.num_blocks() == 1);
  CHECK(run(dense).fine.num_blocks() == 1);
}

TEST_CASE("strong Hall") {
  CHECK_FALSE(is_strong_hall({{1, 0}, {0, 1}}));
  CHECK(is_strong_hall({{1, 1}, {1, 1}}));
  CHECK(is_strong_hall({{1}}));
  CHECK_FALSE(is_strong_hall({{1, 1}, {0, 1}}));

  // random irreducible patterns: a cycle through all columns plus noise
  std::mt19937 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 24;  // exercises both the subset and SCC paths
    std::vector<std::vector<char>> pat(n, std::vector<char>(n, 0));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int k = 0; k < n; ++k) {
      pat[perm[k]][perm[k]] = 1;
      pat[perm[k]][perm[(k + 1) % n]] = 1;
    }
    for (int k = 0; k < n; ++k) pat[rng() % n][rng() % n] = 1;
    CHECK(is_strong_hall(pat));
    // cutting the matrix into two diagonal pieces breaks irreducibility
    std::vector<std::vector<char>> split(n, std::vector<char>(n, 0));
    for (int r = 0; r < n; ++r) {
      split[r][r] = 1;
      if (r + 1 < n && r != n / 2 - 1) split[r][r + 1] = 1;
    }
    CHECK_FALSE(is_strong_hall(split));
  }
}

TEST_CASE("BTF invariants on random matrices") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 6;
    const Pipeline p = run(oracle::random_sigma(rng, n));
    CHECK(upper_triangular(p.pattern.s0, p.fine));
    CHECK(upper_triangular(p.pattern.s, p.coarse));
    int total = 0;
    for (int l = 0; l < p.fine.num_blocks(); ++l) {
      total += p.fine.blocks[l].size();
      CHECK(is_strong_hall(block_pattern(p.pattern, p.fine, l)));
      // refinement: a fine block sits inside one coarse block
      for (int i : p.fine.blocks[l].rows)
        CHECK(p.coarse.row_block[i] == p.coarse.row_block[p.fine.blocks[l].rows[0]]);
    }
    CHECK(total == n);
    const LocalOffsets lo = local_offsets(p.sm, p.fine, p.offs);
    for (int l = 0; l < p.fine.num_blocks(); ++l) {
      CHECK(lo.lead_times[l] >= 0);
      const int b = p.fine.block_start(l);
      int mn = lo.c_hat[b];
      for (int k = b; k < b + p.fine.blocks[l].size(); ++k) mn = std::min(mn, lo.c_hat[k]);
      CHECK(mn == 0);
    }
  }
}
