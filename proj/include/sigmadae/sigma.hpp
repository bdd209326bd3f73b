#pragma once

// Signature matrix, highest-value transversal and canonical offsets.

#include <stdexcept>
#include <utility>
#include <vector>

#include "sigmadae/codelist.hpp"
#include "sigmadae/ext_int.hpp"

namespace sigmadae {

/// n x n matrix of highest derivative orders sigma_ij, -inf where x_j is absent
/// from f_i.
class SignatureMatrix {
 public:
  SignatureMatrix() = default;
  explicit SignatureMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}
  SignatureMatrix(std::initializer_list<std::initializer_list<ExtInt>> rows);

  int size() const { return n_; }
  ExtInt& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  const ExtInt& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * n_ + j];
  }
  /// Largest finite entry, or 0 when all entries are -inf.
  int max_finite() const;

  /// Square submatrix on the given row and column index lists.
  SignatureMatrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const;

  friend bool operator==(const SignatureMatrix&, const SignatureMatrix&) = default;

 private:
  int n_ = 0;
  std::vector<ExtInt> data_;
};

struct Transversal {
  std::vector<int> assignment;  ///< column assigned to each row
  int value = 0;                ///< sum of sigma_{i, assignment[i]}

  friend bool operator==(const Transversal&, const Transversal&) = default;
};

struct GlobalOffsets {
  std::vector<int> c;  ///< equation offsets
  std::vector<int> d;  ///< variable offsets

  friend bool operator==(const GlobalOffsets&, const GlobalOffsets&) = default;
};

/// S0 = {(i,j) : d_j - c_i = sigma_ij} and S = finite support of sigma.
struct JacobianPattern {
  int n = 0;
  std::vector<std::pair<int, int>> s0;
  std::vector<std::pair<int, int>> s;

  bool in_s0(int i, int j) const;
};

struct StructuralMetrics {
  int dof = 0;
  int index = 0;
};

class StructurallyIllPosed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Signature vector of every code-list node (rows: nodes, columns: variables).
std::vector<std::vector<ExtInt>> signature_vectors(const CodeList& code);

SignatureMatrix signature_matrix(const DaeModel& model);

/// Maximum-value perfect matching over finite entries. Among optimal
/// transversals the lexicographically smallest assignment is returned.
/// Throws StructurallyIllPosed if every transversal meets a -inf entry.
Transversal highest_value_transversal(const SignatureMatrix& sm);

/// Smallest valid offsets (c, d) with equality on `t`, via the fixed point
/// d_j = max_i(sigma_ij + c_i), c_i = d_{t(i)} - sigma_{i,t(i)} from c = 0.
GlobalOffsets canonical_offsets(const SignatureMatrix& sm, const Transversal& t);

JacobianPattern jacobian_pattern(const SignatureMatrix& sm, const GlobalOffsets& offs);

/// dof = sum d - sum c; index = max c + (1 if some d_j = 0).
StructuralMetrics structural_metrics(const SignatureMatrix& sm, const GlobalOffsets& offs);

/// True iff d_j - c_i >= sigma_ij on every finite entry and all offsets are
/// nonnegative.
bool offsets_valid(const SignatureMatrix& sm, const GlobalOffsets& offs);

}  // namespace sigmadae
