#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sigmadae/builder.hpp"
#include "sigmadae/parser.hpp"
#include "support/models.hpp"
#include "support/oracles.hpp"

using namespace sigmadae;

TEST_CASE("two-pendula source parses to six equations") {
  const DaeModel m = testmodels::two_pendula();
  CHECK(m.size() == 6);
  CHECK(m.code.outputs.size() == 6);
  CHECK(m.variable_names == std::vector<std::string>{"x", "y", "lambda", "u", "v", "mu"});
  CHECK(m.equation_names == std::vector<std::string>{"A", "B", "C", "D", "E", "F"});
  CHECK(validate_model(m).empty());
}

TEST_CASE("smallest model lowers to t, x, Der(x,1), identity") {
  const DaeModel m = parse_model("var x; eq A: Der(x,1) = 0;");
  REQUIRE(m.code.nodes.size() == 4);
  CHECK(std::holds_alternative<InputTime>(m.code.nodes[0]));
  CHECK(m.code.nodes[1] == Node(InputVar{0}));
  CHECK(m.code.nodes[2] == Node(Deriv{1, 1}));
  CHECK(m.code.nodes[3] == Node(Unary{UnaryOp::Identity, 2}));
  CHECK(m.code.outputs == std::vector<int>{3});
}

TEST_CASE("parse errors carry a kind") {
  auto kind_of = [](const std::string& src) {
    try {
      parse_model(src);
    } catch (const ModelError& e) {
      return e.kind();
    }
    FAIL("no error for: " << src);
    return ModelError::Kind::Invalid;
  };
  CHECK(kind_of("var x, y; eq A: x = 0;") == ModelError::Kind::CountMismatch);
  CHECK(kind_of("var x; eq A: z = 0;") == ModelError::Kind::UnknownIdentifier);
  CHECK(kind_of("var x; eq A: x^1.5 = 0;") == ModelError::Kind::NonIntegerExponent);
  CHECK(kind_of("var x; eq A: x + = 0;") == ModelError::Kind::Syntax);
  CHECK(kind_of("var x; eq A: x = 0; eq A: x = 1;") == ModelError::Kind::DuplicateName);

  try {
    parse_model("var x, y; eq A: x = 0;");
  } catch (const ModelError& e) {
    CHECK(std::string(e.what()).find("2 variables but 1 equation") != std::string::npos);
  }
  try {
    parse_model("var x;\neq A: x + ) = 0;");
  } catch (const ModelError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("builder and parser agree node for node") {
  CHECK(testmodels::two_pendula_built().code == testmodels::two_pendula().code);

  ModelBuilder b;
  Expr x = b.var("x");
  b.equation("A", der(x, 1) - sin(x) / 2.0, exp(x));
  const DaeModel built = b.build();
  const DaeModel parsed = parse_model("var x; eq A: Der(x,1) - sin(x)/2 = exp(x);");
  CHECK(built.code == parsed.code);
}

TEST_CASE("builder keeps formally dependent terms") {
  ModelBuilder b;
  Expr x = b.var("x"), lam = b.var("lambda");
  b.equation("A", der(x, 3) + der(x, 2) + lam * x - der(x, 3));
  b.equation("B", lam);
  const DaeModel m = b.build();
  int third = 0;
  for (const Node& nd : m.code.nodes)
    if (nd == Node(Deriv{1, 3})) ++third;
  CHECK(third == 2);
}

TEST_CASE("builder rejects malformed models") {
  CHECK_THROWS_AS(ModelBuilder().build(), ModelError);
  ModelBuilder b;
  Expr x = b.var("x");
  CHECK_THROWS_AS(b.variable("nope"), ModelError);
  b.equation("A", x);
  b.equation("B", x);
  CHECK_THROWS_AS(b.build(), ModelError);

  ModelBuilder third;
  third.var("p");
  Expr stray = Expr(make_var(3));
  third.equation("A", stray);
  CHECK_THROWS_AS(third.build(), ModelError);
}

TEST_CASE("F's code list contains every expected intermediate") {
  const DaeModel m = testmodels::two_pendula_built();
  std::vector<std::string> rendered;
  for (int r = m.code.equation_begin(5); r <= m.code.outputs[5]; ++r)
    rendered.push_back(render_node(m, r));
  auto has = [&](const std::string& s) {
    return std::find(rendered.begin(), rendered.end(), s) != rendered.end();
  };
  CHECK(has("((u^2) + (v^2))"));
  CHECK(has("((1 + (0.1 * lambda))^2)"));
  CHECK(has("Der(lambda, 2)"));
  CHECK(has("((((u^2) + (v^2)) - ((1 + (0.1 * lambda))^2)) + Der(lambda, 2))"));
}

TEST_CASE("validation reports each violation") {
  DaeModel m = parse_model("var x; eq A: Der(x,1) = 0;");
  CHECK(validate_model(m).empty());

  DaeModel fwd = m;
  fwd.code.nodes[2] = Deriv{3, 1};
  auto d = validate_model(fwd);
  REQUIRE_FALSE(d.empty());
  CHECK(d.front().kind == Diagnostic::Kind::ForwardReference);

  DaeModel dup = parse_model("var x, y; eq A: Der(x,1) = 0; eq B: y = 0;");
  dup.equation_names[1] = "A";
  d = validate_model(dup);
  REQUIRE(d.size() == 1);
  CHECK(d.front().kind == Diagnostic::Kind::DuplicateName);

  DaeModel sq = m;
  sq.variable_names.push_back("z");
  sq.code.n = 2;
  CHECK_FALSE(validate_model(sq).empty());
}

TEST_CASE("render and reparse gives the same code list") {
  const DaeModel tp = testmodels::two_pendula();
  CHECK(parse_model(render_model(tp)).code == tp.code);

  const DaeModel odd = parse_model(
      "var x, y; const k = -2;\n"
      "eq A: Der(x*y, 2) + x^(-2) - k*t = 3;\n"
      "eq B: -(y) + sqrt(log(cos(x))) / 4 = 0;");
  CHECK(parse_model(render_model(odd)).code == odd.code);

  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const DaeModel m = oracle::random_model(rng, 1 + trial % 4, 5);
    const DaeModel back = parse_model(render_model(m));
    CHECK(back.code == m.code);
  }
}

TEST_CASE("node count equals operators plus operands") {
  // x*lambda + Der(x,2): operands x, lambda (shared inputs) and operators
  // *, +, Der and the output identity add four nodes.
  const DaeModel m = parse_model("var x, lambda; eq A: x*lambda + Der(x,2) = 0; eq B: lambda = 0;");
  CHECK(m.code.outputs[0] - m.code.equation_begin(0) + 1 == 4);
}
