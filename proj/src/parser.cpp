#include "sigmadae/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace sigmadae {

namespace {

struct Token {
  enum class Kind { Ident, Number, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  double number = 0.0;
  bool integral_literal = false;  ///< digits only, no '.' or exponent
  int line = 1;
  int column = 1;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t m = 0; m < k; ++m) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };

  while (i < src.size()) {
    const char ch = src[i];
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      tok.kind = Token::Kind::Ident;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t j = i;
      bool integral = true;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        integral = false;
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          integral = false;
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      tok.kind = Token::Kind::Number;
      tok.text = std::string(src.substr(i, j - i));
      tok.integral_literal = integral;
      const auto res = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(),
                                       tok.number);
      if (res.ec != std::errc() || res.ptr != tok.text.data() + tok.text.size() ||
          !std::isfinite(tok.number))
        throw ModelError(ModelError::Kind::Syntax,
                         "invalid number '" + tok.text + "' at " + std::to_string(line) +
                             ":" + std::to_string(col),
                         line, col);
      advance(j - i);
    } else if (std::string_view("+-*/^(),;:=").find(ch) != std::string_view::npos) {
      tok.kind = Token::Kind::Symbol;
      tok.text = std::string(1, ch);
      advance(1);
    } else {
      throw ModelError(ModelError::Kind::Syntax,
                       "unexpected character '" + std::string(1, ch) + "' at " +
                           std::to_string(line) + ":" + std::to_string(col),
                       line, col);
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

const std::set<std::string, std::less<>> kReserved = {
    "var", "const", "eq", "t", "sin", "cos", "exp", "log", "sqrt", "Der"};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  DaeModel parse() {
    if (peek().kind == Token::Kind::End) fail_at(peek(), "empty model");
    while (peek().kind != Token::Kind::End) {
      declaration();
      expect(";");
    }
    const int n = static_cast<int>(model_.variable_names.size());
    if (pending_.empty() && n == 0)
      throw ModelError(ModelError::Kind::CountMismatch, "model has zero equations");
    if (static_cast<int>(pending_.size()) != n)
      throw ModelError(ModelError::Kind::CountMismatch,
                       std::to_string(n) + " variables but " + std::to_string(pending_.size()) +
                           " equations");

    model_.code.n = n;
    model_.code.nodes.push_back(InputTime{});
    for (int j = 0; j < n; ++j) model_.code.nodes.push_back(InputVar{j});
    for (const auto& [lhs, rhs] : pending_) lower_equation(model_.code, lhs, rhs);
    require_valid(model_);
    return std::move(model_);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  bool is_symbol(const char* s) const {
    return peek().kind == Token::Kind::Symbol && peek().text == s;
  }

  [[noreturn]] static void fail_at(const Token& tok, const std::string& what,
                                   ModelError::Kind kind = ModelError::Kind::Syntax) {
    const std::string where = std::to_string(tok.line) + ":" + std::to_string(tok.column);
    const std::string got = tok.kind == Token::Kind::End ? "end of input" : "'" + tok.text + "'";
    throw ModelError(kind, what + " at " + where + " (got " + got + ")", tok.line, tok.column);
  }

  void expect(const char* s) {
    if (!is_symbol(s)) fail_at(peek(), std::string("expected '") + s + "'");
    ++pos_;
  }

  std::string identifier(const char* what) {
    const Token& tok = peek();
    if (tok.kind != Token::Kind::Ident) fail_at(tok, std::string("expected ") + what);
    if (kReserved.count(tok.text)) fail_at(tok, "reserved word used as " + std::string(what));
    ++pos_;
    return tok.text;
  }

  void declare_name(const Token& tok, const std::string& name) {
    if (model_.variable_index(name) || model_.constants.count(name))
      fail_at(tok, "duplicate name '" + name + "'", ModelError::Kind::DuplicateName);
  }

  void declaration() {
    const Token& kw = peek();
    if (kw.kind != Token::Kind::Ident) fail_at(kw, "expected 'var', 'const' or 'eq'");
    if (kw.text == "var") {
      ++pos_;
      do {
        const Token& at = peek();
        const std::string name = identifier("variable name");
        declare_name(at, name);
        model_.variable_names.push_back(name);
      } while (is_symbol(",") && (++pos_, true));
    } else if (kw.text == "const") {
      ++pos_;
      const Token& at = peek();
      const std::string name = identifier("constant name");
      declare_name(at, name);
      expect("=");
      double sign = 1.0;
      if (is_symbol("-")) {
        sign = -1.0;
        ++pos_;
      } else if (is_symbol("+")) {
        ++pos_;
      }
      if (peek().kind != Token::Kind::Number) fail_at(peek(), "expected number");
      model_.constants[name] = sign * next().number;
    } else if (kw.text == "eq") {
      ++pos_;
      const Token& at = peek();
      const std::string name = identifier("equation name");
      for (const auto& e : model_.equation_names)
        if (e == name)
          fail_at(at, "duplicate equation name '" + name + "'", ModelError::Kind::DuplicateName);
      expect(":");
      ExprPtr lhs = expr();
      expect("=");
      ExprPtr rhs = expr();
      model_.equation_names.push_back(name);
      pending_.emplace_back(std::move(lhs), std::move(rhs));
    } else {
      fail_at(kw, "expected 'var', 'const' or 'eq'");
    }
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    while (is_symbol("+") || is_symbol("-")) {
      const BinaryOp op = next().text == "+" ? BinaryOp::Add : BinaryOp::Sub;
      lhs = make_binary(op, lhs, term());
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    while (is_symbol("*") || is_symbol("/")) {
      const BinaryOp op = next().text == "*" ? BinaryOp::Mul : BinaryOp::Div;
      lhs = make_binary(op, lhs, unary());
    }
    return lhs;
  }

  ExprPtr unary() {
    if (is_symbol("-")) {
      ++pos_;
      return make_unary(UnaryOp::Neg, unary());
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (is_symbol("^")) {
      ++pos_;
      base = make_pow(base, integer_exponent());
    }
    return base;
  }

  // Exponent: optionally signed integer literal or integral named constant,
  // optionally parenthesised.
  int integer_exponent() {
    const Token& at = peek();
    if (is_symbol("(")) {
      ++pos_;
      const int e = integer_exponent();
      expect(")");
      return e;
    }
    int sign = 1;
    if (is_symbol("-") || is_symbol("+")) {
      sign = next().text == "-" ? -1 : 1;
    }
    const Token& tok = peek();
    double value = 0.0;
    if (tok.kind == Token::Kind::Number) {
      value = tok.number;
    } else if (tok.kind == Token::Kind::Ident && model_.constants.count(tok.text)) {
      value = model_.constants.at(tok.text);
    } else {
      fail_at(at, "non-integer exponent", ModelError::Kind::NonIntegerExponent);
    }
    if (value != std::floor(value) || std::abs(value) > 1e6)
      fail_at(at, "non-integer exponent", ModelError::Kind::NonIntegerExponent);
    ++pos_;
    return sign * static_cast<int>(value);
  }

  ExprPtr primary() {
    const Token& tok = peek();
    if (tok.kind == Token::Kind::Number) {
      ++pos_;
      return make_const(tok.number);
    }
    if (is_symbol("(")) {
      ++pos_;
      ExprPtr e = expr();
      expect(")");
      return e;
    }
    if (tok.kind != Token::Kind::Ident) fail_at(tok, "expected expression");
    ++pos_;
    const std::string& name = tok.text;
    if (name == "t") return make_time();
    if (name == "Der") {
      expect("(");
      ExprPtr arg = expr();
      expect(",");
      const Token& ord = peek();
      if (ord.kind != Token::Kind::Number || !ord.integral_literal)
        fail_at(ord, "derivative order must be a nonnegative integer literal");
      ++pos_;
      expect(")");
      return make_deriv(arg, static_cast<int>(ord.number));
    }
    static const std::pair<const char*, UnaryOp> kFuncs[] = {
        {"sin", UnaryOp::Sin}, {"cos", UnaryOp::Cos}, {"exp", UnaryOp::Exp},
        {"log", UnaryOp::Log}, {"sqrt", UnaryOp::Sqrt}};
    for (const auto& [fname, op] : kFuncs) {
      if (name == fname) {
        expect("(");
        ExprPtr arg = expr();
        expect(")");
        return make_unary(op, arg);
      }
    }
    if (const auto j = model_.variable_index(name)) return make_var(*j);
    if (const auto it = model_.constants.find(name); it != model_.constants.end())
      return make_const(it->second);
    fail_at(tok, "unknown identifier '" + name + "'", ModelError::Kind::UnknownIdentifier);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  DaeModel model_;
  std::vector<std::pair<ExprPtr, ExprPtr>> pending_;
};

}  // namespace

DaeModel parse_model(std::string_view text) { return Parser(tokenize(text)).parse(); }

DaeModel parse_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError(ModelError::Kind::Syntax, "cannot read model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace sigmadae
