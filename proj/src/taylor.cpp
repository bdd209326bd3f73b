#include "sigmadae/taylor.hpp"

#include <algorithm>

namespace sigmadae {

const char* to_string(ExecutorError::Kind kind) {
  switch (kind) {
    case ExecutorError::Kind::DivisionByZeroSeries: return "DivisionByZeroSeries";
    case ExecutorError::Kind::LogSqrtDomain: return "LogSqrtDomain";
    case ExecutorError::Kind::SingularJacobian: return "SingularJacobian";
    case ExecutorError::Kind::NewtonDivergence: return "NewtonDivergence";
    case ExecutorError::Kind::InfeasibleConstraint: return "InfeasibleConstraint";
    case ExecutorError::Kind::MissingInitialization: return "MissingInitialization";
  }
  return "?";
}

std::vector<int> evaluation_demand(const CodeList& code, const std::vector<int>& output_orders) {
  std::vector<int> demand(code.nodes.size(), -1);
  for (std::size_t i = 0; i < output_orders.size(); ++i)
    demand[code.outputs[i]] = std::max(demand[code.outputs[i]], output_orders[i]);
  for (int r = code.size() - 1; r >= 0; --r) {
    if (demand[r] < 0) continue;
    const Node& node = code.nodes[r];
    const int extra = std::holds_alternative<Deriv>(node) ? std::get<Deriv>(node).order : 0;
    for (int a : operands(node)) demand[a] = std::max(demand[a], demand[r] + extra);
  }
  return demand;
}

std::vector<Series<double>> taylor_eval(const CodeList& code, double t0,
                                        const std::vector<Series<double>>& x, int K) {
  return taylor_eval<double>(code, t0, x, std::vector<int>(code.outputs.size(), K));
}

}  // namespace sigmadae
