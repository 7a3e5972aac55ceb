#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ngd/chain.hpp"

namespace ngd {

enum class Severity { error, warning };

struct ParseDiagnostic {
  int line = 1;    // 1-based
  int column = 1;  // 1-based, in bytes
  std::string message;
  Severity severity = Severity::error;

  friend bool operator==(const ParseDiagnostic&, const ParseDiagnostic&) = default;
};

/// "line:column: error: message"
[[nodiscard]] std::string to_string(const ParseDiagnostic& d);

[[nodiscard]] bool has_errors(const std::vector<ParseDiagnostic>& diags) noexcept;

template <typename T>
struct ParseResult {
  std::optional<T> value;
  std::vector<ParseDiagnostic> diagnostics;

  [[nodiscard]] bool ok() const noexcept { return value.has_value(); }
};

/// Parse a `.chain` document:
///
///   chain   := source stage* ;
///   source  := "source" "rect" "(" kvpairs ")" tap? ;
///   stage   := "stage" expr tap? ;
///   tap     := "as" IDENT ;
///   expr    := term ( "*" term )* ;
///   term    := block ( "^" INT )? | "(" expr ")" ( "^" INT )? ;
///   block   := IDENT "(" kvpairs ")" ;
///   kvpairs := ( IDENT "=" NUMBER ( "," IDENT "=" NUMBER )* )? ;
///
/// `#` starts a line comment; comment lines before the first statement form
/// the chain description. On failure every error found is reported, with
/// recovery at the next `source`/`stage` keyword. Never throws.
[[nodiscard]] ParseResult<ChainSpec> parse_chain(std::string_view text);

/// Parse the `expr` nonterminal on its own (used for --expr one-liners).
[[nodiscard]] ParseResult<Expr> parse_expr(std::string_view text);

/// Semantic lint of a structurally valid chain:
///  - warning when the low-pass denominator degree is below the number of
///    nd stages (m < n),
///  - warning when the composite up to a tap (or the chain end) is improper,
///  - error when the composite is unstable.
[[nodiscard]] std::vector<ParseDiagnostic> validate_chain(const ChainSpec& chain);

}  // namespace ngd
