#include "sigmadae/executor.hpp"

#include <algorithm>
#include <cmath>

namespace sigmadae {

namespace {

double factorial(int r) {
  double f = 1.0;
  for (int k = 2; k <= r; ++k) f *= k;
  return f;
}

void ensure(Series<double>& s, int r) {
  if (static_cast<int>(s.size()) <= r) s.resize(r + 1, 0.0);
}

std::vector<int> task_orders(const CodeList& code, const StageTask& task) {
  std::vector<int> orders(code.outputs.size(), -1);
  for (const auto& p : task.equations) orders[p.index] = p.order;
  return orders;
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

double scaled(const Eigen::VectorXd& F, const Eigen::MatrixXd& J, const Eigen::VectorXd& x) {
  const double jn = J.size() ? J.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
  return inf_norm(F) / (1.0 + jn * inf_norm(x));
}

// sigma_max / sigma_min, infinite when rank deficient.
double condition(const Eigen::MatrixXd& J) {
  if (J.size() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

std::string describe(const StageTask& t) {
  return "stage " + std::to_string(t.stage) + ", block " + std::to_string(t.block + 1);
}

}  // namespace

double StatePoint::derivative(int j, int r) const {
  const double c = r < static_cast<int>(tc[j].size()) ? tc[j][r] : 0.0;
  return c * factorial(r);
}

void StatePoint::set_derivative(int j, int r, double value) {
  ensure(tc[j], r);
  tc[j][r] = value / factorial(r);
  known[j] = std::max(known[j], r + 1);
}

const double* InitData::find(const DerivPair& p) const {
  if (auto it = values.find(p); it != values.end()) return &it->second;
  if (auto it = guesses.find(p); it != guesses.end()) return &it->second;
  return nullptr;
}

Eigen::VectorXd stage_residual(const CodeList& code, const StageTask& task,
                               const StatePoint& state) {
  const auto v = taylor_eval<double>(code, state.t0, state.tc, task_orders(code, task));
  Eigen::VectorXd F(task.equations.size());
  for (std::size_t k = 0; k < task.equations.size(); ++k) {
    const auto& p = task.equations[k];
    F(k) = v[code.outputs[p.index]][p.order] * factorial(p.order);
  }
  return F;
}

Eigen::MatrixXd stage_jacobian(const CodeList& code, const StageTask& task,
                               const StatePoint& state) {
  const std::vector<int> orders = task_orders(code, task);
  Eigen::MatrixXd J(task.equations.size(), task.unknowns.size());
  std::vector<Series<Dual>> x(state.tc.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j].assign(state.tc[j].begin(), state.tc[j].end());
  for (std::size_t c = 0; c < task.unknowns.size(); ++c) {
    const auto& u = task.unknowns[c];
    if (static_cast<int>(x[u.index].size()) <= u.order) x[u.index].resize(u.order + 1, Dual(0.0));
    x[u.index][u.order].d = 1.0 / factorial(u.order);
    const auto v = taylor_eval<Dual>(code, state.t0, x, orders);
    for (std::size_t k = 0; k < task.equations.size(); ++k) {
      const auto& p = task.equations[k];
      J(k, c) = v[code.outputs[p.index]][p.order].d * factorial(p.order);
    }
    x[u.index][u.order].d = 0.0;
  }
  return J;
}

Eigen::MatrixXd numeric_jacobian(const DaeModel& model, const SignatureMatrix& sm,
                                 const GlobalOffsets& offs, const JacobianPattern& pattern,
                                 const BlockPartition& part, int l, const StatePoint& state) {
  (void)offs;
  const Block& b = part.blocks[l];
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(b.size(), b.size());
  std::vector<int> orders(model.code.outputs.size(), -1);
  std::vector<Series<Dual>> x(state.tc.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j].assign(state.tc[j].begin(), state.tc[j].end());
  for (int a = 0; a < b.size(); ++a) {
    const int i = b.rows[a];
    orders.assign(orders.size(), -1);
    orders[i] = 0;
    for (int c = 0; c < b.size(); ++c) {
      const int j = b.cols[c];
      if (!pattern.in_s0(i, j)) continue;
      const int s = sm(i, j).value();
      if (static_cast<int>(x[j].size()) <= s) x[j].resize(s + 1, Dual(0.0));
      x[j][s].d = 1.0 / factorial(s);
      const auto v = taylor_eval<Dual>(model.code, state.t0, x, orders);
      J(a, c) = v[model.code.outputs[i]][0].d;
      x[j][s].d = 0.0;
    }
  }
  return J;
}

StageSolveReport solve_stage(const CodeList& code, const StageTask& task, StatePoint& state,
                             const InitData& init, const SolverOptions& opts) {
  StageSolveReport rep;
  rep.task = task;
  const std::size_t m = task.equations.size();
  const std::size_t n = task.unknowns.size();

  auto set = [&](const Eigen::VectorXd& x) {
    for (std::size_t c = 0; c < n; ++c)
      state.set_derivative(task.unknowns[c].index, task.unknowns[c].order, x(c));
  };
  auto finish = [&](const Eigen::VectorXd& x, double res) {
    set(x);
    rep.solution.assign(x.data(), x.data() + x.size());
    rep.residual_norm = res;
    return rep;
  };

  Eigen::VectorXd x0(n);
  for (std::size_t c = 0; c < n; ++c) {
    const double* v = init.find(task.unknowns[c]);
    if (!v && (task.given || task.determinacy == Determinacy::Underdetermined ||
               task.linearity == Linearity::Nonlinear))
      throw ExecutorError(ExecutorError::Kind::MissingInitialization,
                          "no initial value or guess for a derivative at " + describe(task),
                          {task.unknowns[c]});
    x0(c) = v ? *v : 0.0;
  }
  if (task.given) return finish(x0, 0.0);

  set(x0);
  Eigen::VectorXd x = x0;

  if (m == n) {
    Eigen::VectorXd F = stage_residual(code, task, state);
    Eigen::MatrixXd J = stage_jacobian(code, task, state);
    rep.jacobian_condition = condition(J);
    if (rep.jacobian_condition > opts.max_condition)
      throw ExecutorError(ExecutorError::Kind::SingularJacobian,
                          "singular stage Jacobian at " + describe(task));

    if (task.linearity == Linearity::Linear) {
      const auto lu = J.partialPivLu();
      for (int refine = 0; refine < 3; ++refine) {
        x -= lu.solve(F);
        set(x);
        F = stage_residual(code, task, state);
        if (scaled(F, J, x) <= opts.tol) break;
      }
      return finish(x, scaled(F, J, x));
    }

    for (int it = 0;; ++it) {
      if (scaled(F, J, x) <= opts.tol) return finish(x, scaled(F, J, x));
      if (it == opts.max_newton)
        throw ExecutorError(ExecutorError::Kind::NewtonDivergence,
                            "Newton did not converge at " + describe(task));
      const Eigen::VectorXd dx = J.partialPivLu().solve(-F);
      double lambda = 1.0;
      const double f0 = inf_norm(F);
      bool accepted = false;
      for (int h = 0; h <= opts.max_halvings; ++h, lambda /= 2) {
        const Eigen::VectorXd xn = x + lambda * dx;
        set(xn);
        const Eigen::VectorXd Fn = stage_residual(code, task, state);
        if (Fn.allFinite() && inf_norm(Fn) < f0) {
          x = xn;
          F = Fn;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // no decrease possible: already at the floor of rounding error?
        set(x);
        if (scaled(F, J, x) <= 1e3 * opts.tol) return finish(x, scaled(F, J, x));
        throw ExecutorError(ExecutorError::Kind::NewtonDivergence,
                            "Newton line search failed at " + describe(task));
      }
      ++rep.newton_iterations;
      J = stage_jacobian(code, task, state);
      rep.jacobian_condition = condition(J);
      if (rep.jacobian_condition > opts.max_condition)
        throw ExecutorError(ExecutorError::Kind::SingularJacobian,
                            "singular stage Jacobian at " + describe(task));
    }
  }

  // Underdetermined: min ||g - x|| subject to F(x) = 0 by Gauss-Newton on
  // the linearised constraint, x <- g - J^+ (F(x) + J (g - x)).
  const Eigen::VectorXd g = x0;
  for (int it = 0; it <= opts.max_newton; ++it) {
    const Eigen::VectorXd F = stage_residual(code, task, state);
    const Eigen::MatrixXd J = stage_jacobian(code, task, state);
    rep.jacobian_condition = condition(J);
    if (rep.jacobian_condition > opts.max_condition)
      throw ExecutorError(ExecutorError::Kind::SingularJacobian,
                          "stage Jacobian without full row rank at " + describe(task));
    const Eigen::VectorXd rhs = F + J * (g - x);
    const Eigen::VectorXd xn = g - J.completeOrthogonalDecomposition().solve(rhs);
    const double step = inf_norm(xn - x);
    x = xn;
    set(x);
    rep.newton_iterations = it + 1;
    if (step <= opts.tol * (1.0 + inf_norm(x))) break;
  }
  const Eigen::VectorXd F = stage_residual(code, task, state);
  const Eigen::MatrixXd J = stage_jacobian(code, task, state);
  const double res = scaled(F, J, x);
  if (!(res <= 1e3 * opts.tol))
    throw ExecutorError(ExecutorError::Kind::InfeasibleConstraint,
                        "constraints cannot be satisfied at " + describe(task));
  return finish(x, res);
}

PairSet missing_initialization(const Schedule& schedule, const InitData& init) {
  const InitSets need = schedule_init_requirements(schedule);
  PairSet missing;
  for (const auto* set : {&need.values, &need.guesses})
    for (const auto& p : *set)
      if (!init.find(p)) missing.push_back(p);
  std::sort(missing.begin(), missing.end());
  return missing;
}

SolveResult solve_to_order(const Analysis& a, SchemeMode mode, const InitData& init, int K,
                           const SolverOptions& opts, double t0) {
  const Schedule schedule = a.schedule(mode, K);
  const PairSet missing = missing_initialization(schedule, init);
  if (!missing.empty())
    throw ExecutorError(ExecutorError::Kind::MissingInitialization,
                        "initialization is missing " + std::to_string(missing.size()) +
                            " required entries",
                        missing);

  SolveResult res;
  res.order = K;
  res.state = StatePoint(a.model.size(), t0);
  for (const StageTask& task : schedule.tasks)
    res.stages.push_back(solve_stage(a.model.code, task, res.state, init, opts));

  std::vector<int> orders(a.model.size());
  for (int i = 0; i < a.model.size(); ++i) orders[i] = K + a.offsets.c[i];
  for (int j = 0; j < a.model.size(); ++j) res.state.tc[j].resize(K + a.offsets.d[j] + 1, 0.0);
  const auto v = taylor_eval<double>(a.model.code, t0, res.state.tc, orders);
  const CodeList& code = a.model.code;
  for (int i = 0; i < a.model.size(); ++i) {
    for (int r = 0; r <= orders[i]; ++r) {
      double size = 0.0;
      for (int node = code.equation_begin(i); node <= code.outputs[i]; ++node)
        if (r < static_cast<int>(v[node].size())) size = std::max(size, std::abs(v[node][r]));
      const double f = std::abs(v[code.outputs[i]][r]);
      res.max_residual = std::max(res.max_residual, f);
      res.max_scaled_residual = std::max(res.max_scaled_residual, f / (1.0 + size));
    }
  }
  return res;
}

}  // namespace sigmadae
