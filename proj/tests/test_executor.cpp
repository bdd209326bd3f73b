#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sigmadae/executor.hpp"
#include "sigmadae/parser.hpp"
#include "support/models.hpp"
#include "support/oracles.hpp"

using namespace sigmadae;

namespace {

constexpr double G = 9.8;

// One-variable code list evaluating `expr` (in t and x) to order K.
Series<double> series_of(const std::string& expr, int K, Series<double> x = {0.0}) {
  const DaeModel m = parse_model("var x; eq A: " + expr + " = 0;");
  return taylor_eval(m.code, 0.0, {x}, K)[m.code.outputs[0]];
}

double fact(int r) { return r <= 1 ? 1.0 : r * fact(r - 1); }

InitData pendulum_init(double x, double y, double xp, double yp) {
  InitData init;
  init.guesses = {{{0, 0}, x}, {{1, 0}, y}, {{0, 1}, xp}, {{1, 1}, yp}};
  return init;
}

}  // namespace

TEST_CASE("elementary series") {
  CHECK(series_of("Der(t, 1)", 2) == Series<double>{1, 0, 0});
  CHECK(series_of("(1 + t)*(1 + t)", 2) == Series<double>{1, 2, 1});
  // x(t) = t given as TCs (0, 1)
  CHECK(series_of("Der(x, 1)", 2, {0, 1}) == Series<double>{1, 0, 0});

  const int K = 8;
  auto close = [&](const Series<double>& s, auto f) {
    for (int k = 0; k <= K; ++k) CHECK(s[k] == doctest::Approx(f(k)).epsilon(1e-13));
  };
  close(series_of("exp(t)", K), [](int k) { return 1.0 / fact(k); });
  close(series_of("sin(t)", K), [](int k) { return k % 2 ? (k % 4 == 1 ? 1 : -1) / fact(k) : 0.0; });
  close(series_of("cos(t)", K), [](int k) { return k % 2 ? 0.0 : (k % 4 == 0 ? 1 : -1) / fact(k); });
  close(series_of("log(1 + t)", K), [](int k) { return k == 0 ? 0.0 : (k % 2 ? 1.0 : -1.0) / k; });
  close(series_of("1 / (1 - t)", K), [](int) { return 1.0; });
  close(series_of("(1 + t)^(-2)", K), [](int k) { return (k % 2 ? -1.0 : 1.0) * (k + 1); });
  close(series_of("(1 + t)^5", K), [](int k) {
    return k > 5 ? 0.0 : fact(5) / (fact(k) * fact(5 - k));
  });
  // sqrt(1 + t): binomial(1/2, k)
  close(series_of("sqrt(1 + t)", K), [](int k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c *= (0.5 - i) / (i + 1);
    return c;
  });
  close(series_of("Der(exp(2*t), 2)", K), [](int k) { return 4 * std::pow(2.0, k) / fact(k); });
}

TEST_CASE("series domain errors") {
  auto kind = [](const std::string& e) {
    try {
      series_of(e, 3);
    } catch (const ExecutorError& err) {
      return err.kind();
    }
    FAIL("no error");
    return ExecutorError::Kind::SingularJacobian;
  };
  CHECK(kind("1 / t") == ExecutorError::Kind::DivisionByZeroSeries);
  CHECK(kind("t^(-1)") == ExecutorError::Kind::DivisionByZeroSeries);
  CHECK(kind("log(t)") == ExecutorError::Kind::LogSqrtDomain);
  CHECK(kind("sqrt(t - 1)") == ExecutorError::Kind::LogSqrtDomain);
}

TEST_CASE("Der(u, p) equals p applications of Der(u, 1)") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> coef(-2, 2);
  for (int trial = 0; trial < 50; ++trial) {
    Series<double> x(14);
    for (auto& c : x) c = coef(rng);
    const int p = 1 + trial % 4;
    std::string nested = "sin(x)";
    for (int k = 0; k < p; ++k) nested = "Der(" + nested + ", 1)";
    const auto a = series_of("Der(sin(x), " + std::to_string(p) + ")", 6, x);
    const auto b = series_of(nested, 6, x);
    for (int k = 0; k <= 6; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));
  }
}

TEST_CASE("System Jacobian entries") {
  const Analysis pend = analyze(testmodels::pendulum());
  StatePoint s(3);
  s.set_derivative(0, 0, 1);
  s.set_derivative(1, 0, 2);
  s.set_derivative(2, 0, 5);
  const Eigen::MatrixXd J =
      numeric_jacobian(pend.model, pend.sigma, pend.offsets, pend.pattern, pend.fine, 0, s);
  Eigen::MatrixXd want(3, 3);
  want << 1, 0, 1, 0, 1, 2, 2, 4, 0;
  CHECK(J.isApprox(want));

  const Analysis tp = analyze(testmodels::two_pendula());
  StatePoint t(6);
  t.set_derivative(4, 3, 3.0);  // v''' = 3
  const Eigen::MatrixXd JE =
      numeric_jacobian(tp.model, tp.sigma, tp.offsets, tp.pattern, tp.fine, 0, t);
  CHECK(JE(0, 0) == doctest::Approx(6.0));
}

TEST_CASE("System Jacobian agrees with central differences") {
  const Analysis tp = analyze(testmodels::two_pendula());
  const int n = 6;
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> val(-1.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    StatePoint s(n);
    for (int j = 0; j < n; ++j)
      for (int r = 0; r <= tp.offsets.d[j]; ++r) s.set_derivative(j, r, val(rng));
    for (int l = 0; l < tp.fine.num_blocks(); ++l) {
      const Eigen::MatrixXd J =
          numeric_jacobian(tp.model, tp.sigma, tp.offsets, tp.pattern, tp.fine, l, s);
      const Block& b = tp.fine.blocks[l];
      for (int a = 0; a < b.size(); ++a)
        for (int c = 0; c < b.size(); ++c) {
          const int i = b.rows[a], j = b.cols[c];
          if (!tp.pattern.in_s0(i, j)) {
            CHECK(J(a, c) == 0.0);
            continue;
          }
          const int sig = tp.sigma(i, j).value();
          auto f = [&](const std::vector<double>& z) {
            StatePoint p = s;
            p.set_derivative(j, sig, z[0]);
            return taylor_eval(tp.model.code, 0.0, p.tc, 0)[tp.model.code.outputs[i]][0];
          };
          const double fd = oracle::central_difference(f, {s.derivative(j, sig)}, 0, 1e-5);
          CHECK(J(a, c) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        }
    }
  }
}

TEST_CASE("pendulum stage -2 projects the guess onto the circle") {
  const Analysis a = analyze(testmodels::pendulum());
  const Schedule s = a.schedule(SchemeMode::Block, -2, -2);
  REQUIRE(s.tasks.size() == 1);
  StatePoint st(3);
  const auto rep = solve_stage(a.model.code, s.tasks[0], st, pendulum_init(0.8, -0.7, 0, 0));
  const double norm = std::hypot(0.8, -0.7);
  CHECK(st.derivative(0, 0) == doctest::Approx(0.8 / norm).epsilon(1e-12));
  CHECK(st.derivative(1, 0) == doctest::Approx(-0.7 / norm).epsilon(1e-12));
  CHECK(rep.residual_norm < 1e-12);
}

TEST_CASE("pendulum at equilibrium") {
  const Analysis a = analyze(testmodels::pendulum());
  const SolveResult r = solve_to_order(a, SchemeMode::Block, pendulum_init(0, -1, 0, 0), 10);
  CHECK(std::abs(r.state.derivative(2, 0) + G) < 1e-12);
  CHECK(std::abs(r.state.derivative(0, 0)) < 1e-12);
  CHECK(std::abs(r.state.derivative(1, 0) + 1) < 1e-12);
  for (int j = 0; j < 3; ++j)
    for (int k = 1; k <= 10 + a.offsets.d[j]; ++k) CHECK(std::abs(r.state.derivative(j, k)) < 1e-12);
  CHECK(r.max_residual < 1e-10);
}

TEST_CASE("pendulum swing and basic/block equivalence") {
  const double v0 = 2.0;
  const Analysis a = analyze(testmodels::pendulum());
  const SolveResult r = solve_to_order(a, SchemeMode::Block, pendulum_init(1, 0, 0, v0), 10);
  CHECK(r.state.derivative(2, 0) == doctest::Approx(v0 * v0).epsilon(1e-10));
  CHECK(r.state.derivative(0, 2) == doctest::Approx(-v0 * v0).epsilon(1e-10));
  CHECK(r.state.derivative(1, 2) == doctest::Approx(G).epsilon(1e-10));
  CHECK(r.max_scaled_residual < 1e-10);

  for (const auto& st : r.stages)
    if (st.task.local_stage > 0) CHECK(st.newton_iterations == 0);

  const SolveResult b = solve_to_order(a, SchemeMode::Basic, pendulum_init(1, 0, 0, v0), 10);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k <= 10 + a.offsets.d[j]; ++k)
      CHECK(std::abs(r.state.tc[j][k] - b.state.tc[j][k]) <= 1e-12 * (1 + std::abs(r.state.tc[j][k])));
}

TEST_CASE("linear DAE") {
  const Analysis a = analyze(testmodels::linear());
  InitData init;
  init.values[{0, 0}] = 0.5;
  const SolveResult r = solve_to_order(a, SchemeMode::Block, init, 4);
  CHECK(r.state.tc[0][0] == doctest::Approx(0.5));
  CHECK(r.state.tc[0][1] == doctest::Approx(1.0));
  for (int k = 2; k <= 5; ++k) CHECK(std::abs(r.state.tc[0][k]) < 1e-14);
  CHECK(r.state.tc[1][0] == doctest::Approx(1.0));
}

TEST_CASE("two-pendula solve") {
  const Analysis a = analyze(testmodels::two_pendula());
  InitData init;
  // first pendulum at the bottom moving sideways: lambda = 2.2 and
  // lambda'' = -31.2, so F has the real root u near 5.7
  init.guesses = {{{0, 0}, 0.0}, {{1, 0}, -1.0}, {{0, 1}, 2.0}, {{1, 1}, 0.0},
                  {{3, 0}, 5.0}, {{4, 3}, 3.0}};
  init.values = {{{4, 0}, -0.5}, {{4, 1}, 0.1}, {{4, 2}, -0.2}};
  const SolveResult r = solve_to_order(a, SchemeMode::Block, init, 4);
  CHECK(r.max_scaled_residual < 1e-10);
  for (const auto& st : r.stages) {
    if (st.task.block == 1 && st.task.stage == 0) {
      CHECK(st.task.linearity == Linearity::Linear);
      CHECK(st.task.unknowns == PairSet{{5, 0}});
    }
    if (st.task.local_stage > 0) CHECK(st.newton_iterations == 0);
  }

  init.values.erase({4, 2});
  try {
    solve_to_order(a, SchemeMode::Block, init, 4);
    FAIL("expected missing initialization");
  } catch (const ExecutorError& e) {
    CHECK(e.kind() == ExecutorError::Kind::MissingInitialization);
    CHECK(e.missing() == PairSet{{4, 2}});
  }
}

TEST_CASE("solver failures") {
  const Analysis a = analyze(testmodels::pendulum());
  try {
    solve_to_order(a, SchemeMode::Block, pendulum_init(0, 0, 0, 0), 2);
    FAIL("expected a singular Jacobian");
  } catch (const ExecutorError& e) {
    CHECK(e.kind() == ExecutorError::Kind::SingularJacobian);
  }

  const Analysis root = analyze(parse_model("var x; eq A: x^2 + 1 = 0;"));
  InitData g;
  g.guesses[{0, 0}] = 0.5;
  try {
    solve_to_order(root, SchemeMode::Block, g, 0);
    FAIL("expected divergence");
  } catch (const ExecutorError& e) {
    CHECK((e.kind() == ExecutorError::Kind::NewtonDivergence ||
           e.kind() == ExecutorError::Kind::SingularJacobian));
  }
}
