#pragma once

// Analysis and solve reports: one data record, rendered as JSON or text.
//
// Everything in the record is keyed by equation and variable names so the
// JSON reads on its own. The text form is produced from the same record, so
// both formats always carry the same facts.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sigmadae/analysis.hpp"
#include "sigmadae/executor.hpp"

namespace sigmadae {

/// A derivative of a named equation or variable.
struct NamedPair {
  std::string name;
  int order = 0;
  friend auto operator<=>(const NamedPair&, const NamedPair&) = default;
};

struct HvtEntry {
  std::string equation;
  std::string variable;
  friend bool operator==(const HvtEntry&, const HvtEntry&) = default;
};

struct CoarseBlockReport {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  friend bool operator==(const CoarseBlockReport&, const CoarseBlockReport&) = default;
};

struct BlockReport {
  std::vector<std::string> rows;  ///< block order
  std::vector<std::string> cols;
  std::vector<int> c_hat;  ///< aligned with rows
  std::vector<int> d_hat;  ///< aligned with cols
  int lead_time = 0;
  bool ql = false;  ///< gamma_l
  bool strong_hall = false;
  int size() const { return static_cast<int>(rows.size()); }
  friend bool operator==(const BlockReport&, const BlockReport&) = default;
};

struct EquationQlEntry {
  std::string equation;
  QlCode global = QlCode::L;
  QlCode blockwise = QlCode::L;
  friend bool operator==(const EquationQlEntry&, const EquationQlEntry&) = default;
};

struct TaskEntry {
  int stage = 0;
  int block = 0;  ///< 1-based
  int local_stage = 0;
  std::vector<NamedPair> equations;
  std::vector<NamedPair> unknowns;
  std::vector<NamedPair> inputs;  ///< cross-block inputs
  bool given = false;
  Determinacy determinacy = Determinacy::Square;
  Linearity linearity = Linearity::Linear;
  friend bool operator==(const TaskEntry&, const TaskEntry&) = default;
};

struct AnalysisReport {
  std::string model;
  std::vector<std::string> variables;
  std::vector<std::string> equations;
  std::map<std::string, double> constants;

  std::vector<std::vector<std::optional<int>>> sigma;  ///< nullopt is -inf
  std::vector<HvtEntry> hvt;
  int hvt_value = 0;
  std::vector<int> c, d;

  std::vector<CoarseBlockReport> coarse_blocks;
  std::vector<BlockReport> blocks;
  std::vector<int> lead_times;

  std::vector<EquationQlEntry> ql_per_equation;
  std::vector<bool> ql_per_block;
  bool ql_dae = false;
  bool all_equations_ql = false;

  SchemeMode scheme = SchemeMode::Block;
  std::vector<NamedPair> init_values;
  std::vector<NamedPair> init_guesses;
  int stage_from = 0;
  int stage_to = 0;
  std::vector<TaskEntry> schedule;

  int index = 0;
  int dof = 0;

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

/// Report for `a`, with the init sets and schedule of `mode` over stages
/// [k_min, k_max].
AnalysisReport make_report(const Analysis& a, const std::string& model_name, SchemeMode mode,
                           int k_min, int k_max);

nlohmann::ordered_json to_json(const AnalysisReport& r);
/// Inverse of to_json. Throws nlohmann::json::exception on malformed input.
AnalysisReport report_from_json(const nlohmann::ordered_json& j);

std::string render_text(const AnalysisReport& r);

/// x, x', x'', x''', x^(4), ...
std::string derivative_name(const std::string& name, int order);

/// Pairs grouped by name in first-appearance order; a name whose orders are
/// exactly 0..r with r >= 1 is written z^(≤r).
std::string shorthand(const std::vector<NamedPair>& pairs);

/// Derivative table and residuals of a solve.
nlohmann::ordered_json solve_to_json(const Analysis& a, const std::string& model_name,
                                     SchemeMode mode, const SolveResult& res);
std::string render_solve_text(const Analysis& a, const std::string& model_name,
                              SchemeMode mode, const SolveResult& res);

}  // namespace sigmadae
