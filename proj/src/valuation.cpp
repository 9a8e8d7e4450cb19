#include "pgcl/valuation.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace pgcl {

void Valuation::set(const std::string& name, Rational value) {
  if (value.is_negative()) {
    throw std::invalid_argument("negative value for variable " + name);
  }
  if (value.is_zero()) {
    bindings_.erase(name);
  } else {
    bindings_[name] = std::move(value);
  }
}

int compare(const Valuation& a, const Valuation& b) {
  auto ia = a.bindings_.begin();
  auto ib = b.bindings_.begin();
  for (; ia != a.bindings_.end() && ib != b.bindings_.end(); ++ia, ++ib) {
    if (int c = ia->first.compare(ib->first); c != 0) return c;
    if (int c = compare(ia->second, ib->second); c != 0) return c;
  }
  if (ia != a.bindings_.end()) return 1;
  if (ib != b.bindings_.end()) return -1;
  return 0;
}

std::string Valuation::str() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [name, value] : bindings_) {
    if (!first) os << ", ";
    first = false;
    os << name << " = " << value;
  }
  os << '}';
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::variant<Valuation, ValuationParseError> parse_valuation(
    std::string_view text) {
  Valuation result;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;

    line = trim(line);
    if (line.empty() || line.substr(0, 2) == "//") continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      return ValuationParseError{line_no, "expected NAME = RAT"};
    }
    std::string name(trim(line.substr(0, eq)));
    std::string_view value_text = trim(line.substr(eq + 1));
    if (name.empty()) {
      return ValuationParseError{line_no, "missing variable name"};
    }
    auto value = Rational::parse(value_text, /*allow_negative=*/false);
    if (!value) {
      return ValuationParseError{
          line_no, "bad rational '" + std::string(value_text) + "'"};
    }
    result.set(name, *value);
  }
  return result;
}

}  // namespace pgcl
