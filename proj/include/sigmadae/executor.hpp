#pragma once

// Numeric execution of a stage schedule at one expansion point.

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "sigmadae/analysis.hpp"
#include "sigmadae/taylor.hpp"

namespace sigmadae {

/// Known Taylor coefficients of every variable at t0. Entries past
/// known[j] are placeholders (zero) until a stage fills them in.
struct StatePoint {
  double t0 = 0.0;
  std::vector<Series<double>> tc;
  std::vector<int> known;  ///< number of leading TCs of x_j already determined

  explicit StatePoint(int n = 0, double t = 0.0) : t0(t), tc(n), known(n, 0) {}
  /// x_j^(r) in derivative units.
  double derivative(int j, int r) const;
  void set_derivative(int j, int r, double value);
};

/// Initial data in derivative units, keyed by (variable, order).
struct InitData {
  std::map<DerivPair, double> values;
  std::map<DerivPair, double> guesses;
  /// Value or guess for p, whichever is present (values win).
  const double* find(const DerivPair& p) const;
};

struct SolverOptions {
  double tol = 1e-12;
  int max_newton = 50;
  int max_halvings = 30;
  double max_condition = 1e14;
};

struct StageSolveReport {
  StageTask task;
  std::vector<double> solution;  ///< unknowns in task order, derivative units
  double residual_norm = 0.0;    ///< scaled, see SolverOptions::tol
  int newton_iterations = 0;
  double jacobian_condition = 1.0;
};

/// Stage residuals f_i^(r) for (i, r) in the task, in derivative units.
Eigen::VectorXd stage_residual(const CodeList& code, const StageTask& task,
                               const StatePoint& state);

/// d(stage residuals)/d(unknowns) by forward-mode sweeps, one per unknown.
Eigen::MatrixXd stage_jacobian(const CodeList& code, const StageTask& task,
                               const StatePoint& state);

/// System Jacobian entries df_i/dx_j^(sigma_ij) on fine block l: S0 entries
/// only, rows and columns in block order.
Eigen::MatrixXd numeric_jacobian(const DaeModel& model, const SignatureMatrix& sm,
                                 const GlobalOffsets& offs, const JacobianPattern& pattern,
                                 const BlockPartition& part, int l, const StatePoint& state);

/// Solves one task and writes its unknowns into `state`.
StageSolveReport solve_stage(const CodeList& code, const StageTask& task, StatePoint& state,
                             const InitData& init, const SolverOptions& opts = {});

struct SolveResult {
  StatePoint state;
  std::vector<StageSolveReport> stages;
  double max_residual = 0.0;         ///< max |TC_r(f_i)| over r <= K + c_i
  /// Same, each TC_r(f_i) divided by 1 + the largest |TC_r| among the nodes
  /// of f_i's sub-list (the size of the terms that cancel).
  double max_scaled_residual = 0.0;
  int order = 0;              ///< K
};

/// Every pair the schedule needs from `init` that it does not supply.
PairSet missing_initialization(const Schedule& schedule, const InitData& init);

/// Runs stages -max d_j .. K. Throws ExecutorError(MissingInitialization)
/// listing the missing pairs before doing any work.
SolveResult solve_to_order(const Analysis& a, SchemeMode mode, const InitData& init, int K,
                           const SolverOptions& opts = {}, double t0 = 0.0);

}  // namespace sigmadae
