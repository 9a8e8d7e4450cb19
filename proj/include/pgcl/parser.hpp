#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "pgcl/ast.hpp"

namespace pgcl {

struct ParseError {
  int line = 1;
  int column = 1;
  std::string message;
  std::string expected;  // short summary of what would have been accepted

  std::string str() const;
};

using ParseResult = std::variant<ProgPtr, ParseError>;

/// Parses the concrete pGCL syntax:
///   prog := stmt (';' stmt)*
///   stmt := VAR ':=' aexp
///         | '{' prog '}' '[' rat ']' '{' prog '}'
///         | 'while' '(' bexp ')' '{' prog '}'
///         | 'if' '(' bexp ')' '{' prog '}' ['else' '{' prog '}']
///         | 'skip'
/// Keywords are case-insensitive. `//` comments run to end of line.
/// Sequencing associates to the right: "A; B; C" is Seq(A, Seq(B, C)).
ParseResult parse_program(std::string_view text);

/// Convenience wrapper; throws std::runtime_error carrying the rendered
/// ParseError.
ProgPtr parse_program_or_throw(std::string_view text);

}  // namespace pgcl
