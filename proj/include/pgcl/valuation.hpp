#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>

#include "pgcl/rational.hpp"

namespace pgcl {

/// Total map from variable names to non-negative rationals, stored with
/// finite support. Unbound variables read as 0 and zero bindings are never
/// stored, so structural equality of the underlying map is semantic equality
/// of the valuation.
class Valuation {
 public:
  Valuation() = default;

  Rational get(const std::string& name) const {
    auto it = bindings_.find(name);
    return it == bindings_.end() ? Rational(0) : it->second;
  }

  /// Stores `value`; erases the binding when value is 0. Throws on negative
  /// values (the assign rule clamps before calling this).
  void set(const std::string& name, Rational value);

  Valuation with(const std::string& name, Rational value) const {
    Valuation copy = *this;
    copy.set(name, std::move(value));
    return copy;
  }

  bool empty() const { return bindings_.empty(); }
  std::size_t support_size() const { return bindings_.size(); }

  auto begin() const { return bindings_.begin(); }
  auto end() const { return bindings_.end(); }

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.bindings_ == b.bindings_;
  }
  friend bool operator!=(const Valuation& a, const Valuation& b) {
    return !(a == b);
  }

  friend int compare(const Valuation& a, const Valuation& b);

  /// "{x = 3/2, y = 1}"
  std::string str() const;

 private:
  std::map<std::string, Rational> bindings_;
};

struct ValuationParseError {
  int line = 0;
  std::string message;
};

/// One binding per line, `NAME = RAT`; blank lines and `//` comments skipped.
std::variant<Valuation, ValuationParseError> parse_valuation(
    std::string_view text);

}  // namespace pgcl
