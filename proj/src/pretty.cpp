#include "pgcl/pretty.hpp"

#include <sstream>

namespace pgcl {

namespace {

// Precedence levels; higher binds tighter.
int aprec(const ArithPtr& e) {
  switch (e->kind) {
    case ArithExpr::Kind::Add:
    case ArithExpr::Kind::Sub:
      return 1;
    case ArithExpr::Kind::Mul:
      return 2;
    default:
      return 3;  // atoms
  }
}

void render(const ArithPtr& e, std::ostream& os, int parent, bool right_child) {
  int prec = aprec(e);
  // Operators associate to the left, so an equal-precedence right child
  // needs parentheses to keep its shape on reparse.
  bool parens = prec < parent || (prec == parent && right_child && prec < 3);
  if (parens) os << '(';
  switch (e->kind) {
    case ArithExpr::Kind::Literal:
      os << e->literal;
      break;
    case ArithExpr::Kind::Variable:
      os << e->var;
      break;
    case ArithExpr::Kind::Add:
      render(e->lhs, os, prec, false);
      os << " + ";
      render(e->rhs, os, prec, true);
      break;
    case ArithExpr::Kind::Sub:
      render(e->lhs, os, prec, false);
      os << " - ";
      render(e->rhs, os, prec, true);
      break;
    case ArithExpr::Kind::Mul:
      render(e->lhs, os, prec, false);
      os << " * ";
      render(e->rhs, os, prec, true);
      break;
  }
  if (parens) os << ')';
}

const char* cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

int bprec(const BoolPtr& b) {
  switch (b->kind) {
    case BoolExpr::Kind::Or: return 1;
    case BoolExpr::Kind::And: return 2;
    default: return 3;  // Not and comparisons
  }
}

void render(const BoolPtr& b, std::ostream& os, int parent, bool right_child) {
  int prec = bprec(b);
  bool parens = prec < parent || (prec == parent && right_child && prec < 3);
  if (parens) os << '(';
  switch (b->kind) {
    case BoolExpr::Kind::Compare:
      render(b->alhs, os, 0, false);
      os << ' ' << cmp_text(b->op) << ' ';
      render(b->arhs, os, 0, false);
      break;
    case BoolExpr::Kind::And:
      render(b->blhs, os, prec, false);
      os << " && ";
      render(b->brhs, os, prec, true);
      break;
    case BoolExpr::Kind::Or:
      render(b->blhs, os, prec, false);
      os << " || ";
      render(b->brhs, os, prec, true);
      break;
    case BoolExpr::Kind::Not:
      os << "!(";
      render(b->blhs, os, 0, false);
      os << ')';
      break;
  }
  if (parens) os << ')';
}

constexpr int kIndentWidth = 4;
constexpr std::size_t kInlineChoiceLimit = 72;

std::string render_block(const ProgPtr& p, int indent);

std::string pad(int indent) { return std::string(indent * kIndentWidth, ' '); }

bool single_line(const std::string& s) {
  return s.find('\n') == std::string::npos;
}

// One statement (no trailing separator). Multi-line constructs indent their
// bodies relative to `indent`.
std::string render_stmt(const ProgPtr& p, int indent) {
  std::ostringstream os;
  switch (p->kind) {
    case Prog::Kind::Skip:
      return "skip";
    case Prog::Kind::Assign:
      os << p->var << " := ";
      render(p->expr, os, 0, false);
      return os.str();
    case Prog::Kind::Choice: {
      std::string left = render_block(p->first, 0);
      std::string right = render_block(p->second, 0);
      std::string prob = p->prob.str();
      if (single_line(left) && single_line(right) &&
          left.size() + right.size() + prob.size() < kInlineChoiceLimit) {
        os << '{' << left << "} [" << prob << "] {" << right << '}';
        return os.str();
      }
      os << "{\n" << render_block(p->first, indent + 1) << '\n' << pad(indent)
         << "} [" << prob << "] {\n" << render_block(p->second, indent + 1)
         << '\n' << pad(indent) << '}';
      return os.str();
    }
    case Prog::Kind::While:
      os << "while (";
      render(p->guard, os, 0, false);
      os << ") {\n" << render_block(p->first, indent + 1) << '\n'
         << pad(indent) << '}';
      return os.str();
    case Prog::Kind::If:
      os << "if (";
      render(p->guard, os, 0, false);
      os << ") {\n" << render_block(p->first, indent + 1) << '\n'
         << pad(indent) << '}';
      if (p->second->kind != Prog::Kind::Skip) {
        os << " else {\n" << render_block(p->second, indent + 1) << '\n'
           << pad(indent) << '}';
      }
      return os.str();
    case Prog::Kind::Seq:
      break;  // handled by render_block
  }
  return render_block(p, indent);
}

std::string render_block(const ProgPtr& p, int indent) {
  std::vector<ProgPtr> stmts;
  ProgPtr cursor = p;
  while (cursor->kind == Prog::Kind::Seq) {
    stmts.push_back(cursor->first);
    cursor = cursor->second;
  }
  stmts.push_back(cursor);

  std::ostringstream os;
  for (std::size_t i = 0; i < stmts.size(); ++i) {
    if (i > 0) os << ";\n";
    os << pad(indent) << render_stmt(stmts[i], indent);
  }
  return os.str();
}

}  // namespace

std::string pretty(const ArithPtr& e) {
  std::ostringstream os;
  render(e, os, 0, false);
  return os.str();
}

std::string pretty(const BoolPtr& b) {
  std::ostringstream os;
  render(b, os, 0, false);
  return os.str();
}

std::string pretty(const ProgPtr& p) { return render_block(p, 0); }

}  // namespace pgcl
