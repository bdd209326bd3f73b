#pragma once

#include <string>
#include <string_view>

#include "sigmadae/codelist.hpp"

namespace sigmadae {

/// Parse model source text into a validated DaeModel.
///
///   model := (decl ";")+
///   decl  := "var" ident ("," ident)*
///          | "const" ident "=" ["-"] number
///          | "eq" ident ":" expr "=" expr
///
/// Expressions use + - * / ^ with the usual precedence, unary minus,
/// sin cos exp log sqrt, Der(expr, order), identifiers and numbers. `t`
/// denotes time. `#` starts a line comment. Named constants are substituted
/// while parsing. Throws ModelError on any failure.
DaeModel parse_model(std::string_view text);

/// Reads `path` and parses it. Throws ModelError(Syntax) if unreadable.
DaeModel parse_model_file(const std::string& path);

}  // namespace sigmadae
