#include "sigmadae/builder.hpp"

#include <algorithm>

namespace sigmadae {

namespace {

int max_var(const ExprNode& e) {
  int m = e.kind == ExprNode::Kind::Var ? e.index : -1;
  if (e.a) m = std::max(m, max_var(*e.a));
  if (e.b) m = std::max(m, max_var(*e.b));
  return m;
}

}  // namespace

Expr ModelBuilder::var(const std::string& name) {
  if (std::find(vars_.begin(), vars_.end(), name) != vars_.end() || consts_.count(name))
    throw ModelError(ModelError::Kind::DuplicateName, "duplicate name '" + name + "'");
  vars_.push_back(name);
  return Expr(make_var(static_cast<int>(vars_.size()) - 1));
}

Expr ModelBuilder::variable(const std::string& name) const {
  const auto it = std::find(vars_.begin(), vars_.end(), name);
  if (it == vars_.end())
    throw ModelError(ModelError::Kind::Builder, "undeclared variable '" + name + "'");
  return Expr(make_var(static_cast<int>(it - vars_.begin())));
}

Expr ModelBuilder::constant(const std::string& name, double value) {
  if (std::find(vars_.begin(), vars_.end(), name) != vars_.end() || consts_.count(name))
    throw ModelError(ModelError::Kind::DuplicateName, "duplicate name '" + name + "'");
  consts_[name] = value;
  return Expr(value);
}

void ModelBuilder::equation(const std::string& name, const Expr& lhs, const Expr& rhs) {
  if (std::find(eq_names_.begin(), eq_names_.end(), name) != eq_names_.end())
    throw ModelError(ModelError::Kind::DuplicateName, "duplicate equation name '" + name + "'");
  eq_names_.push_back(name);
  eqs_.emplace_back(lhs.ptr(), rhs.ptr());
}

DaeModel ModelBuilder::build() const {
  const int n = static_cast<int>(vars_.size());
  if (eqs_.empty()) throw ModelError(ModelError::Kind::CountMismatch, "model has zero equations");
  if (static_cast<int>(eqs_.size()) != n)
    throw ModelError(ModelError::Kind::CountMismatch,
                     std::to_string(n) + " variables but " + std::to_string(eqs_.size()) +
                         " equations");
  for (std::size_t i = 0; i < eqs_.size(); ++i) {
    if (std::max(max_var(*eqs_[i].first), max_var(*eqs_[i].second)) >= n)
      throw ModelError(ModelError::Kind::Builder,
                       "equation '" + eq_names_[i] + "' references an undeclared variable");
  }

  DaeModel m;
  m.variable_names = vars_;
  m.equation_names = eq_names_;
  m.constants = consts_;
  m.code.n = n;
  m.code.nodes.push_back(InputTime{});
  for (int j = 0; j < n; ++j) m.code.nodes.push_back(InputVar{j});
  for (const auto& [lhs, rhs] : eqs_) lower_equation(m.code, lhs, rhs);
  require_valid(m);
  return m;
}

}  // namespace sigmadae
