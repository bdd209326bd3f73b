#pragma once

// Coarse and fine block-triangular forms, local offsets and lead times.

#include <stdexcept>
#include <vector>

#include "sigmadae/sigma.hpp"

namespace sigmadae {

struct Block {
  std::vector<int> rows;  ///< original equation indices, ascending
  std::vector<int> cols;  ///< original variable indices, ascending
  int size() const { return static_cast<int>(rows.size()); }

  friend bool operator==(const Block&, const Block&) = default;
};

/// Ordered blocks B_1..B_p. In permuted coordinates the matrix is block
/// upper triangular; blocks are solved in the order p, p-1, ..., 1.
struct BlockPartition {
  std::vector<Block> blocks;
  std::vector<int> row_perm;   ///< permuted position -> original equation
  std::vector<int> col_perm;   ///< permuted position -> original variable
  std::vector<int> row_pos;    ///< original equation -> permuted position
  std::vector<int> col_pos;    ///< original variable -> permuted position
  std::vector<int> row_block;  ///< original equation -> block (0-based)
  std::vector<int> col_block;  ///< original variable -> block (0-based)
  Transversal matching;        ///< row/column pairing the blocks were built from

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  /// Permuted position of the first row of block l.
  int block_start(int l) const;
};

/// Block-local canonical offsets and lead times, in permuted order.
struct LocalOffsets {
  std::vector<int> c_hat;
  std::vector<int> d_hat;
  std::vector<int> lead_times;  ///< one per block

  friend bool operator==(const LocalOffsets&, const LocalOffsets&) = default;
};

class UniformityViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Block triangular form on the full support S.
BlockPartition coarse_btf(const JacobianPattern& pattern, const Transversal& t);

/// Block triangular form on S0. Blocks are the strongly connected components
/// of the column digraph (j -> j' when the row matched to j' has an S0 entry
/// in column j), numbered so no block depends on a lower-numbered one; ties go
/// to the block holding the smallest equation index.
BlockPartition fine_btf(const JacobianPattern& pattern, const Transversal& t);

/// Canonical offsets of each block's own submatrix, with lead time
/// K_l = c_i - c_hat_i. Throws UniformityViolation if the difference is not
/// the same for every equation and variable of a block.
LocalOffsets local_offsets(const SignatureMatrix& sm, const BlockPartition& part,
                           const GlobalOffsets& offs);

/// Dense boolean pattern of block l (rows x cols in block order) over S0.
std::vector<std::vector<char>> block_pattern(const JacobianPattern& pattern,
                                             const BlockPartition& part, int l);

/// Strong Hall test: every proper nonempty set of r columns touches at least
/// r + 1 rows. Exhaustive for up to 20 columns; larger patterns use the
/// equivalent matching-plus-single-SCC characterisation.
bool is_strong_hall(const std::vector<std::vector<char>>& pattern);

}  // namespace sigmadae
