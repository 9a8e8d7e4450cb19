#include "pgcl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <vector>

namespace pgcl {

std::string ParseError::str() const {
  std::string out = "parse error at line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ": " + message;
  if (!expected.empty()) out += " (expected " + expected + ")";
  return out;
}

namespace {

enum class Tok {
  Ident,    // variable name
  Keyword,  // while, if, else, skip (lowercased in text)
  Number,   // digits or digits.digits
  Assign,   // :=
  Semi, LBrace, RBrace, LBracket, RBracket, LParen, RParen,
  Plus, Minus, Star, Slash,
  Eq, Ne, Lt, Le, Gt, Ge,
  AndAnd, OrOr, Bang,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

struct LexFail {
  ParseError error;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_keyword(const std::string& lower) {
  return lower == "while" || lower == "if" || lower == "else" ||
         lower == "skip";
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok kind, std::string tok_text, int l, int c) {
    out.push_back(Token{kind, std::move(tok_text), l, c});
  };
  auto fail = [&](const std::string& msg) -> LexFail {
    return LexFail{ParseError{line, col, msg, ""}};
  };
  auto starts_with = [&](std::string_view s) {
    return text.substr(i, s.size()) == s;
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') { ++line; col = 1; ++i; continue; }
    if (std::isspace(static_cast<unsigned char>(c))) { ++col; ++i; continue; }
    if (starts_with("//")) {
      while (i < text.size() && text[i] != '\n') { ++i; ++col; }
      continue;
    }
    int tl = line, tc = col;
    if (ident_start(c)) {
      std::size_t start = i;
      while (i < text.size() && ident_char(text[i])) { ++i; ++col; }
      std::string word(text.substr(start, i - start));
      std::string lower = lowercase(word);
      if (is_keyword(lower)) {
        push(Tok::Keyword, lower, tl, tc);
      } else if (lower == "and") {
        push(Tok::AndAnd, "&&", tl, tc);
      } else if (lower == "or") {
        push(Tok::OrOr, "||", tl, tc);
      } else if (lower == "not") {
        push(Tok::Bang, "!", tl, tc);
      } else {
        push(Tok::Ident, std::move(word), tl, tc);
      }
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) { ++i; ++col; }
      if (i < text.size() && text[i] == '.' && i + 1 < text.size() &&
          std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        ++i; ++col;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) { ++i; ++col; }
      }
      push(Tok::Number, std::string(text.substr(start, i - start)), tl, tc);
      continue;
    }

    struct Sym { std::string_view text; Tok kind; };
    // Longer matches first; Unicode spellings map onto their ASCII forms.
    static const Sym kSymbols[] = {
        {":=", Tok::Assign}, {"!=", Tok::Ne},   {"<=", Tok::Le},
        {">=", Tok::Ge},     {"&&", Tok::AndAnd}, {"||", Tok::OrOr},
        {"≠", Tok::Ne}, {"≤", Tok::Le}, {"≥", Tok::Ge},
        {"∧", Tok::AndAnd}, {"∨", Tok::OrOr}, {"¬", Tok::Bang},
        {"·", Tok::Star},
        {";", Tok::Semi},    {"{", Tok::LBrace}, {"}", Tok::RBrace},
        {"[", Tok::LBracket}, {"]", Tok::RBracket},
        {"(", Tok::LParen},  {")", Tok::RParen},
        {"+", Tok::Plus},    {"-", Tok::Minus},  {"*", Tok::Star},
        {"/", Tok::Slash},   {"=", Tok::Eq},     {"<", Tok::Lt},
        {">", Tok::Gt},      {"!", Tok::Bang},
    };
    bool matched = false;
    for (const auto& sym : kSymbols) {
      if (starts_with(sym.text)) {
        push(sym.kind, std::string(sym.text), tl, tc);
        i += sym.text.size();
        col += static_cast<int>(sym.text.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw fail("unexpected character '" + std::string(1, c) + "'");
    }
  }
  out.push_back(Token{Tok::End, "<end of input>", line, col});
  return out;
}

struct ParseFail {
  ParseError error;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ProgPtr run() {
    ProgPtr p = parse_prog();
    expect(Tok::End, "end of input");
    return p;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;

  const Token& peek(int ahead = 0) const {
    std::size_t idx = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[idx];
  }
  const Token& advance() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_keyword(std::string_view word) const {
    return peek().kind == Tok::Keyword && peek().text == word;
  }

  [[noreturn]] void fail(const std::string& message,
                         const std::string& expected) const {
    const Token& t = peek();
    throw ParseFail{ParseError{t.line, t.column,
                               message + ", found '" + t.text + "'", expected}};
  }
  const Token& expect(Tok kind, const std::string& what) {
    if (!at(kind)) fail("unexpected token", what);
    return advance();
  }

  Rational number_token_value(const Token& t) {
    auto q = Rational::parse(t.text, /*allow_negative=*/false);
    if (!q) {
      throw ParseFail{ParseError{t.line, t.column,
                                 "bad numeric literal '" + t.text + "'", ""}};
    }
    return *q;
  }

  /// NUMBER or NUMBER '/' NUMBER. There is no division operator, so the
  /// slash form is unambiguous.
  Rational parse_rational() {
    const Token& t = expect(Tok::Number, "a rational literal");
    Rational value = number_token_value(t);
    if (at(Tok::Slash)) {
      advance();
      const Token& d = expect(Tok::Number, "a denominator");
      Rational den = number_token_value(d);
      if (den.is_zero()) {
        throw ParseFail{ParseError{d.line, d.column, "zero denominator", ""}};
      }
      value = value / den;
    }
    return value;
  }

  ProgPtr parse_prog() {
    std::vector<ProgPtr> stmts;
    stmts.push_back(parse_stmt());
    while (at(Tok::Semi)) {
      advance();
      stmts.push_back(parse_stmt());
    }
    return seq_of(std::move(stmts));
  }

  ProgPtr parse_block() {
    expect(Tok::LBrace, "'{'");
    if (at(Tok::RBrace)) fail("empty block", "at least one statement");
    ProgPtr body = parse_prog();
    expect(Tok::RBrace, "'}'");
    return body;
  }

  ProgPtr parse_stmt() {
    if (at(Tok::Ident)) {
      std::string name = advance().text;
      expect(Tok::Assign, "':='");
      return assign(std::move(name), parse_aexp());
    }
    if (at(Tok::LBrace)) {
      ProgPtr left = parse_block();
      expect(Tok::LBracket, "'['");
      const Token& pt = peek();
      Rational p = parse_rational();
      if (p.is_negative() || p > Rational(1)) {
        throw ParseFail{ParseError{pt.line, pt.column,
                                   "probability " + p.str() + " outside [0, 1]",
                                   "a rational in [0, 1]"}};
      }
      expect(Tok::RBracket, "']'");
      ProgPtr right = parse_block();
      return choice(std::move(left), std::move(p), std::move(right));
    }
    if (at_keyword("while")) {
      advance();
      expect(Tok::LParen, "'('");
      BoolPtr guard = parse_bexp();
      expect(Tok::RParen, "')'");
      return while_loop(std::move(guard), parse_block());
    }
    if (at_keyword("if")) {
      advance();
      expect(Tok::LParen, "'('");
      BoolPtr guard = parse_bexp();
      expect(Tok::RParen, "')'");
      ProgPtr then_branch = parse_block();
      ProgPtr else_branch = skip();
      if (at_keyword("else")) {
        advance();
        else_branch = parse_block();
      }
      return if_stmt(std::move(guard), std::move(then_branch),
                     std::move(else_branch));
    }
    if (at_keyword("skip")) {
      advance();
      return skip();
    }
    fail("expected a statement",
         "assignment, '{..} [p] {..}', 'while', 'if' or 'skip'");
  }

  ArithPtr parse_aexp() {
    ArithPtr left = parse_term();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      bool plus = advance().kind == Tok::Plus;
      ArithPtr right = parse_term();
      left = plus ? add(std::move(left), std::move(right))
                  : sub(std::move(left), std::move(right));
    }
    return left;
  }

  ArithPtr parse_term() {
    ArithPtr left = parse_factor();
    while (at(Tok::Star)) {
      advance();
      left = mul(std::move(left), parse_factor());
    }
    return left;
  }

  ArithPtr parse_factor() {
    if (at(Tok::Number)) return lit(parse_rational());
    if (at(Tok::Ident)) return var(advance().text);
    if (at(Tok::LParen)) {
      advance();
      ArithPtr inner = parse_aexp();
      expect(Tok::RParen, "')'");
      return inner;
    }
    fail("expected an arithmetic expression",
         "a literal, variable or '('");
  }

  BoolPtr parse_bexp() {
    BoolPtr left = parse_bterm();
    while (at(Tok::OrOr)) {
      advance();
      left = bor(std::move(left), parse_bterm());
    }
    return left;
  }

  BoolPtr parse_bterm() {
    BoolPtr left = parse_bfactor();
    while (at(Tok::AndAnd)) {
      advance();
      left = band(std::move(left), parse_bfactor());
    }
    return left;
  }

  BoolPtr parse_bfactor() {
    if (at(Tok::Bang)) {
      advance();
      return bnot(parse_bfactor());
    }
    if (at(Tok::LParen)) {
      // '(' may group a Boolean expression or start an arithmetic operand of
      // a comparison; try the Boolean reading first and backtrack.
      std::size_t saved = pos_;
      advance();
      try {
        BoolPtr inner = parse_bexp();
        expect(Tok::RParen, "')'");
        return inner;
      } catch (const ParseFail&) {
        pos_ = saved;
      }
    }
    return parse_comparison();
  }

  BoolPtr parse_comparison() {
    ArithPtr left = parse_aexp();
    CmpOp op;
    switch (peek().kind) {
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      default:
        fail("expected a comparison operator",
             "'=', '!=', '<', '<=', '>' or '>='");
    }
    advance();
    return cmp(op, std::move(left), parse_aexp());
  }
};

}  // namespace

ParseResult parse_program(std::string_view text) {
  try {
    Parser parser(lex(text));
    return parser.run();
  } catch (const LexFail& f) {
    return f.error;
  } catch (const ParseFail& f) {
    return f.error;
  }
}

ProgPtr parse_program_or_throw(std::string_view text) {
  ParseResult result = parse_program(text);
  if (auto* err = std::get_if<ParseError>(&result)) {
    throw std::runtime_error(err->str());
  }
  return std::get<ProgPtr>(result);
}

}  // namespace pgcl
