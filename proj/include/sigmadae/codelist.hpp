#pragma once

// Code-list representation of a DAE model.
//
// A code list is a straight-line program: slot 0 holds the time t, slots
// 1..n hold the state variables x_1..x_n, and every later slot applies one
// operation to earlier slots. Each equation f_i = 0 owns a contiguous run of
// slots ending in its output node. Nothing is ever simplified: x''' - x'''
// still depends on x'''.

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sigmadae {

enum class UnaryOp { Neg, Sin, Cos, Exp, Log, Sqrt, Identity };
enum class BinaryOp { Add, Sub, Mul, Div };

const char* to_string(UnaryOp op);
const char* to_string(BinaryOp op);

struct InputTime {
  friend bool operator==(const InputTime&, const InputTime&) = default;
};
struct InputVar {
  int var = 0;
  friend bool operator==(const InputVar&, const InputVar&) = default;
};
struct Const {
  double value = 0.0;
  friend bool operator==(const Const&, const Const&) = default;
};
struct Unary {
  UnaryOp op = UnaryOp::Identity;
  int arg = 0;
  friend bool operator==(const Unary&, const Unary&) = default;
};
struct Binary {
  BinaryOp op = BinaryOp::Add;
  int lhs = 0;
  int rhs = 0;
  friend bool operator==(const Binary&, const Binary&) = default;
};
/// base^exponent for an integer exponent (negative means reciprocal).
struct IntPow {
  int base = 0;
  int exponent = 1;
  friend bool operator==(const IntPow&, const IntPow&) = default;
};
/// d^order/dt^order of an earlier node.
struct Deriv {
  int arg = 0;
  int order = 0;
  friend bool operator==(const Deriv&, const Deriv&) = default;
};

using Node = std::variant<InputTime, InputVar, Const, Unary, Binary, IntPow, Deriv>;

/// Slots referenced by a node, in operand order.
std::vector<int> operands(const Node& node);

struct CodeList {
  std::vector<Node> nodes;
  int n = 0;                 ///< number of state variables
  std::vector<int> outputs;  ///< node index of f_i, one per equation

  static constexpr int time_node() { return 0; }
  static constexpr int var_node(int j) { return 1 + j; }
  int size() const { return static_cast<int>(nodes.size()); }

  /// First slot of equation i's sub-list (outputs are strictly increasing).
  int equation_begin(int i) const {
    return i == 0 ? n + 1 : outputs[static_cast<std::size_t>(i) - 1] + 1;
  }

  friend bool operator==(const CodeList&, const CodeList&) = default;
};

struct DaeModel {
  std::vector<std::string> variable_names;
  std::vector<std::string> equation_names;
  std::map<std::string, double> constants;
  CodeList code;

  int size() const { return code.n; }
  std::optional<int> variable_index(const std::string& name) const;
  std::optional<int> equation_index(const std::string& name) const;
};

// ---------------------------------------------------------------------------
// Expression trees
// ---------------------------------------------------------------------------

/// Immutable expression tree shared by the parser and the builder. Lowering
/// an equation's tree to code-list nodes is the single path both use, so the
/// two front ends agree node for node.
struct ExprNode {
  enum class Kind { Time, Var, Const, Unary, Binary, Pow, Deriv };
  Kind kind = Kind::Const;
  int index = 0;  ///< variable index, pow exponent or derivative order
  double value = 0.0;
  UnaryOp uop = UnaryOp::Identity;
  BinaryOp bop = BinaryOp::Add;
  std::shared_ptr<const ExprNode> a;
  std::shared_ptr<const ExprNode> b;
};
using ExprPtr = std::shared_ptr<const ExprNode>;

ExprPtr make_time();
ExprPtr make_var(int j);
ExprPtr make_const(double v);
ExprPtr make_unary(UnaryOp op, ExprPtr arg);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_pow(ExprPtr base, int exponent);
ExprPtr make_deriv(ExprPtr arg, int order);

/// Append the nodes of one equation (lhs = rhs) to `code` and register its
/// output. A right-hand side that is the literal 0 gives Identity(lhs);
/// otherwise the output is lhs - rhs.
void lower_equation(CodeList& code, const ExprPtr& lhs, const ExprPtr& rhs);

// ---------------------------------------------------------------------------
// Errors and validation
// ---------------------------------------------------------------------------

class ModelError : public std::runtime_error {
 public:
  enum class Kind {
    Syntax,
    UnknownIdentifier,
    CountMismatch,
    NonIntegerExponent,
    DuplicateName,
    Builder,
    Invalid,
  };

  ModelError(Kind kind, const std::string& message, int line = 0, int column = 0)
      : std::runtime_error(message), kind_(kind), line_(line), column_(column) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

struct Diagnostic {
  enum class Kind {
    NoEquations,
    NotSquare,
    ForwardReference,
    BadVariableIndex,
    BadInputLayout,
    NegativeDerivOrder,
    BadOutput,
    DuplicateName,
  };
  Kind kind;
  std::string message;
};

/// Empty iff the model is square, acyclic and every reference is valid.
std::vector<Diagnostic> validate_model(const DaeModel& model);

/// Throws ModelError(Invalid) with the first diagnostic if any exist.
void require_valid(const DaeModel& model);

/// Model source that reparses to an identical code list.
std::string render_model(const DaeModel& model);

/// Infix rendering of a single node (fully parenthesised).
std::string render_node(const DaeModel& model, int node);

}  // namespace sigmadae
