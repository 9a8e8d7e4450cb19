#pragma once

#include <string>

#include "pgcl/ast.hpp"

namespace pgcl {

/// Canonical ASCII rendering with minimal parentheses. parse(pretty(P))
/// yields a tree structurally equal to P.
std::string pretty(const ArithPtr& e);
std::string pretty(const BoolPtr& b);
std::string pretty(const ProgPtr& p);

}  // namespace pgcl
