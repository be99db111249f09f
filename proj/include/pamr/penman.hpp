#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

#include "pamr/graph.hpp"

namespace pamr {

struct SourceSpan {
  std::size_t start = 0;  // byte offset, inclusive
  std::size_t end = 0;    // byte offset, exclusive
  std::size_t line = 1;   // 1-based line of `start`

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class ParseErrorKind { UnbalancedParen, DuplicateVariable, UndefinedVariable, BadToken, EmptyGraph };

std::string_view parse_error_kind_name(ParseErrorKind kind);

// Every kind aborts the parse.
struct ParseDiagnostic {
  SourceSpan span;
  std::string message;
  ParseErrorKind kind;
};

using ParseResult = std::variant<Graph, ParseDiagnostic>;

/// Strict PENMAN parser for a single graph.
///
/// Leading `#` comment lines are skipped. Tokens are NFC-normalized; ZWNJ is
/// kept. A concept written with internal spaces (`latme zadan`) is joined
/// with underscores. After a role, `+`, `-`, numerals and quoted strings are
/// constants; any other bare token is a variable reference, which may point
/// forward but must be defined somewhere in the graph.
ParseResult parse_penman(std::string_view text);

/// Convenience wrapper that throws FormatError on failure.
Graph parse_penman_or_throw(std::string_view text);

enum class VarNaming {
  Sequential,      // x, x2, x3, ...
  ConceptInitial,  // first letter of the concept: d, r, r2, ...
};

struct SerializeStyle {
  bool canonical_vars = false;
  VarNaming naming = VarNaming::Sequential;
  int indent = 3;
};

/// Deterministic PENMAN text: relations in recorded order, each nested level
/// indented by `style.indent` spaces, reentrant variables written bare after
/// their first preorder occurrence. No trailing newline. Throws ContractError
/// for non-wellformed graphs.
std::string serialize_penman(const Graph& g, const SerializeStyle& style = {});

}  // namespace pamr
