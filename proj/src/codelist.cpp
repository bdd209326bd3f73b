#include "sigmadae/codelist.hpp"

#include <charconv>
#include <set>
#include <sstream>

namespace sigmadae {

const char* to_string(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "neg";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Identity: return "identity";
  }
  return "?";
}

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
  }
  return "?";
}

std::vector<int> operands(const Node& node) {
  struct Visitor {
    std::vector<int> operator()(const InputTime&) const { return {}; }
    std::vector<int> operator()(const InputVar&) const { return {}; }
    std::vector<int> operator()(const Const&) const { return {}; }
    std::vector<int> operator()(const Unary& u) const { return {u.arg}; }
    std::vector<int> operator()(const Binary& b) const { return {b.lhs, b.rhs}; }
    std::vector<int> operator()(const IntPow& p) const { return {p.base}; }
    std::vector<int> operator()(const Deriv& d) const { return {d.arg}; }
  };
  return std::visit(Visitor{}, node);
}

std::optional<int> DaeModel::variable_index(const std::string& name) const {
  for (std::size_t j = 0; j < variable_names.size(); ++j)
    if (variable_names[j] == name) return static_cast<int>(j);
  return std::nullopt;
}

std::optional<int> DaeModel::equation_index(const std::string& name) const {
  for (std::size_t i = 0; i < equation_names.size(); ++i)
    if (equation_names[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Expression trees
// ---------------------------------------------------------------------------

namespace {

ExprPtr make(ExprNode node) { return std::make_shared<const ExprNode>(std::move(node)); }

int emit(CodeList& code, const ExprNode& e) {
  auto push = [&](Node node) {
    code.nodes.push_back(node);
    return code.size() - 1;
  };
  switch (e.kind) {
    case ExprNode::Kind::Time:
      return CodeList::time_node();
    case ExprNode::Kind::Var:
      return CodeList::var_node(e.index);
    case ExprNode::Kind::Const:
      return push(Const{e.value});
    case ExprNode::Kind::Unary: {
      const int a = emit(code, *e.a);
      return push(Unary{e.uop, a});
    }
    case ExprNode::Kind::Binary: {
      const int a = emit(code, *e.a);
      const int b = emit(code, *e.b);
      return push(Binary{e.bop, a, b});
    }
    case ExprNode::Kind::Pow: {
      const int a = emit(code, *e.a);
      return push(IntPow{a, e.index});
    }
    case ExprNode::Kind::Deriv: {
      const int a = emit(code, *e.a);
      return push(Deriv{a, e.index});
    }
  }
  throw std::logic_error("emit: unknown expression kind");
}

}  // namespace

ExprPtr make_time() { return make({.kind = ExprNode::Kind::Time}); }

ExprPtr make_var(int j) { return make({.kind = ExprNode::Kind::Var, .index = j}); }

ExprPtr make_const(double v) { return make({.kind = ExprNode::Kind::Const, .value = v}); }

ExprPtr make_unary(UnaryOp op, ExprPtr arg) {
  return make({.kind = ExprNode::Kind::Unary, .uop = op, .a = std::move(arg)});
}

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  return make({.kind = ExprNode::Kind::Binary,
               .bop = op,
               .a = std::move(lhs),
               .b = std::move(rhs)});
}

ExprPtr make_pow(ExprPtr base, int exponent) {
  return make({.kind = ExprNode::Kind::Pow, .index = exponent, .a = std::move(base)});
}

ExprPtr make_deriv(ExprPtr arg, int order) {
  return make({.kind = ExprNode::Kind::Deriv, .index = order, .a = std::move(arg)});
}

void lower_equation(CodeList& code, const ExprPtr& lhs, const ExprPtr& rhs) {
  const bool rhs_zero = rhs->kind == ExprNode::Kind::Const && rhs->value == 0.0;
  if (rhs_zero) {
    const int a = emit(code, *lhs);
    code.nodes.push_back(Unary{UnaryOp::Identity, a});
  } else {
    const int a = emit(code, *lhs);
    const int b = emit(code, *rhs);
    code.nodes.push_back(Binary{BinaryOp::Sub, a, b});
  }
  code.outputs.push_back(code.size() - 1);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

std::vector<Diagnostic> validate_model(const DaeModel& model) {
  std::vector<Diagnostic> out;
  const CodeList& code = model.code;
  const int n = code.n;
  auto add = [&](Diagnostic::Kind kind, std::string msg) {
    out.push_back({kind, std::move(msg)});
  };

  if (code.outputs.empty()) add(Diagnostic::Kind::NoEquations, "model has zero equations");
  if (static_cast<int>(code.outputs.size()) != n) {
    add(Diagnostic::Kind::NotSquare, std::to_string(n) + " variables but " +
                                         std::to_string(code.outputs.size()) +
                                         " equations");
  }
  if (static_cast<int>(model.variable_names.size()) != n ||
      model.equation_names.size() != code.outputs.size()) {
    add(Diagnostic::Kind::NotSquare, "name lists do not match the code list sizes");
  }

  // Input layout: slot 0 is t, slots 1..n are x_1..x_n.
  if (code.size() < n + 1) {
    add(Diagnostic::Kind::BadInputLayout, "code list shorter than its input slots");
  } else {
    if (!std::holds_alternative<InputTime>(code.nodes[0]))
      add(Diagnostic::Kind::BadInputLayout, "slot 0 is not the time input");
    for (int j = 0; j < n; ++j) {
      const auto* in = std::get_if<InputVar>(&code.nodes[CodeList::var_node(j)]);
      if (in == nullptr || in->var != j)
        add(Diagnostic::Kind::BadInputLayout,
            "slot " + std::to_string(j + 1) + " is not input variable " + std::to_string(j));
    }
  }

  for (int r = n + 1; r < code.size(); ++r) {
    const Node& node = code.nodes[r];
    if (std::holds_alternative<InputTime>(node) || std::holds_alternative<InputVar>(node))
      add(Diagnostic::Kind::BadInputLayout,
          "input node at non-input slot " + std::to_string(r));
    for (int ref : operands(node)) {
      if (ref < 0 || ref >= r)
        add(Diagnostic::Kind::ForwardReference,
            "node " + std::to_string(r) + " references slot " + std::to_string(ref) +
                " (must be an earlier slot)");
    }
    if (const auto* d = std::get_if<Deriv>(&node); d && d->order < 0)
      add(Diagnostic::Kind::NegativeDerivOrder,
          "node " + std::to_string(r) + " has negative derivative order");
  }

  // Outputs: distinct, strictly increasing, last one closes the list.
  for (std::size_t i = 0; i < code.outputs.size(); ++i) {
    const int o = code.outputs[i];
    if (o <= n || o >= code.size()) {
      add(Diagnostic::Kind::BadOutput,
          "output " + std::to_string(i) + " is not an operation slot");
      continue;
    }
    if (i > 0 && o <= code.outputs[i - 1])
      add(Diagnostic::Kind::BadOutput, "outputs are not distinct and increasing");
  }
  if (!code.outputs.empty() && code.outputs.back() != code.size() - 1)
    add(Diagnostic::Kind::BadOutput, "nodes after the last output");

  std::set<std::string> seen;
  for (const auto& name : model.variable_names)
    if (!seen.insert(name).second)
      add(Diagnostic::Kind::DuplicateName, "duplicate variable name '" + name + "'");
  for (const auto& [name, value] : model.constants)
    if (!seen.insert(name).second)
      add(Diagnostic::Kind::DuplicateName, "constant '" + name + "' clashes with a variable");
  std::set<std::string> eqs;
  for (const auto& name : model.equation_names)
    if (!eqs.insert(name).second)
      add(Diagnostic::Kind::DuplicateName, "duplicate equation name '" + name + "'");
  return out;
}

void require_valid(const DaeModel& model) {
  const auto diags = validate_model(model);
  if (diags.empty()) return;
  const bool count = diags.front().kind == Diagnostic::Kind::NotSquare ||
                     diags.front().kind == Diagnostic::Kind::NoEquations;
  throw ModelError(count ? ModelError::Kind::CountMismatch : ModelError::Kind::Invalid,
                   diags.front().message);
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class Renderer {
 public:
  explicit Renderer(const DaeModel& model) : model_(model) {}

  std::string node(int r) {
    const Node& nd = model_.code.nodes[r];
    if (std::holds_alternative<InputTime>(nd)) return "t";
    if (const auto* v = std::get_if<InputVar>(&nd)) return model_.variable_names[v->var];
    if (const auto* c = std::get_if<Const>(&nd)) return constant(c->value);
    if (const auto* u = std::get_if<Unary>(&nd)) {
      switch (u->op) {
        case UnaryOp::Neg: return "(-" + node(u->arg) + ")";
        case UnaryOp::Identity: return node(u->arg);
        default: return std::string(to_string(u->op)) + "(" + node(u->arg) + ")";
      }
    }
    if (const auto* b = std::get_if<Binary>(&nd))
      return "(" + node(b->lhs) + " " + to_string(b->op) + " " + node(b->rhs) + ")";
    if (const auto* p = std::get_if<IntPow>(&nd)) {
      const std::string e = p->exponent < 0 ? "(" + std::to_string(p->exponent) + ")"
                                            : std::to_string(p->exponent);
      return "(" + node(p->base) + "^" + e + ")";
    }
    const auto& d = std::get<Deriv>(nd);
    return "Der(" + node(d.arg) + ", " + std::to_string(d.order) + ")";
  }

  // Negative values are emitted as named constants: a literal "-2" would
  // reparse as neg(2).
  std::string constant(double v) {
    if (!(v < 0.0)) return format_number(v);
    for (const auto& [name, value] : negatives_)
      if (value == v) return name;
    std::string name = "_k" + std::to_string(negatives_.size());
    while (model_.variable_index(name) || model_.constants.count(name)) name += "_";
    negatives_.emplace_back(name, v);
    return name;
  }

  const std::vector<std::pair<std::string, double>>& negatives() const { return negatives_; }

 private:
  const DaeModel& model_;
  std::vector<std::pair<std::string, double>> negatives_;
};

}  // namespace

std::string render_node(const DaeModel& model, int node) {
  Renderer r(model);
  return r.node(node);
}

std::string render_model(const DaeModel& model) {
  Renderer r(model);
  std::ostringstream eqs;
  for (std::size_t i = 0; i < model.code.outputs.size(); ++i) {
    const Node& out = model.code.nodes[model.code.outputs[i]];
    eqs << "eq " << model.equation_names[i] << ": ";
    if (const auto* b = std::get_if<Binary>(&out); b && b->op == BinaryOp::Sub)
      eqs << r.node(b->lhs) << " = " << r.node(b->rhs);
    else if (const auto* u = std::get_if<Unary>(&out); u && u->op == UnaryOp::Identity)
      eqs << r.node(u->arg) << " = 0";
    else
      eqs << r.node(model.code.outputs[i]) << " = 0";
    eqs << ";\n";
  }

  std::ostringstream os;
  os << "var ";
  for (std::size_t j = 0; j < model.variable_names.size(); ++j)
    os << (j ? ", " : "") << model.variable_names[j];
  os << ";\n";
  for (const auto& [name, value] : r.negatives())
    os << "const " << name << " = " << format_number(value) << ";\n";
  os << eqs.str();
  return os.str();
}

}  // namespace sigmadae
