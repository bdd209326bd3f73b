#pragma once

// Quasilinearity analysis.
//
// For equation i, M_i is the set of variables whose highest derivative in f_i
// is a stage-0 unknown (sigma_ij = d_j - c_i). Each code-list node gets an
// offset alpha_i(v) = min over j in M_i of sigma_ij - sigma_j(v); alpha = 0
// marks nodes touching the stage-0 unknowns. A node's QLity says whether it
// is independent of (I), linear in (L) or nonlinear in (N) those unknowns.

#include <optional>
#include <vector>

#include "sigmadae/btf.hpp"
#include "sigmadae/codelist.hpp"
#include "sigmadae/ext_int.hpp"
#include "sigmadae/sigma.hpp"

namespace sigmadae {

enum class QlCode { I, L, N };  // ordered by severity
const char* to_string(QlCode code);

enum class QlScope { Global, Block };

struct EquationQl {
  std::vector<int> m_set;
  std::vector<UpperInt> offsets;  ///< alpha_i(v) for every node
  std::vector<std::optional<QlCode>> codes;  ///< set for nodes visited before any exit
  QlCode code = QlCode::L;
  std::optional<int> first_nonlinear;  ///< first node found to be N
};

struct QlReport {
  std::vector<QlCode> global;     ///< per equation, M_i over all columns
  std::vector<QlCode> blockwise;  ///< per equation, M_i restricted to its block
  std::vector<bool> gamma_eq;     ///< blockwise code is L
  std::vector<bool> gamma_block;  ///< AND of gamma_eq over {i in B_l : c_hat_i = 0}
  bool gamma_dae = false;         ///< AND of global L over {i : c_i = 0}
  bool all_equations_ql = false;  ///< every global code is L

  friend bool operator==(const QlReport&, const QlReport&) = default;
};

/// M_i for every equation (original indices). Block scope needs `part`.
std::vector<std::vector<int>> m_sets(const SignatureMatrix& sm, const GlobalOffsets& offs,
                                     QlScope scope, const BlockPartition* part = nullptr);

/// alpha_i(v) for every node of the code list.
std::vector<UpperInt> propagate_offsets(const CodeList& code, int equation,
                                        const std::vector<int>& m_set,
                                        const SignatureMatrix& sm);

/// QLity of f_i, sweeping f_i's sub-list and stopping at the first N node.
EquationQl ql_analysis(const CodeList& code, int equation, const std::vector<int>& m_set,
                       const SignatureMatrix& sm);

/// One sweep over the shared code list propagating n-vectors of encoded
/// offsets (0 = L, -1 = N, positive or inf = I); done once per scope.
QlReport vectorized_ql(const DaeModel& model, const SignatureMatrix& sm,
                       const GlobalOffsets& offs, const BlockPartition& part,
                       const LocalOffsets& local);

/// Same report assembled from per-equation ql_analysis runs.
QlReport per_equation_ql(const DaeModel& model, const SignatureMatrix& sm,
                         const GlobalOffsets& offs, const BlockPartition& part,
                         const LocalOffsets& local);

}  // namespace sigmadae
