#include "pgcl/ast.hpp"

#include <stdexcept>

namespace pgcl {

// --------------------------- builders --------------------------------------

ArithPtr lit(Rational value) {
  if (value.is_negative()) {
    throw std::invalid_argument("negative arithmetic literal");
  }
  auto node = std::make_shared<ArithExpr>();
  node->kind = ArithExpr::Kind::Literal;
  node->literal = std::move(value);
  return node;
}

ArithPtr var(std::string name) {
  auto node = std::make_shared<ArithExpr>();
  node->kind = ArithExpr::Kind::Variable;
  node->var = std::move(name);
  return node;
}

namespace {
ArithPtr abinary(ArithExpr::Kind kind, ArithPtr a, ArithPtr b) {
  auto node = std::make_shared<ArithExpr>();
  node->kind = kind;
  node->lhs = std::move(a);
  node->rhs = std::move(b);
  return node;
}
}  // namespace

ArithPtr add(ArithPtr a, ArithPtr b) {
  return abinary(ArithExpr::Kind::Add, std::move(a), std::move(b));
}
ArithPtr sub(ArithPtr a, ArithPtr b) {
  return abinary(ArithExpr::Kind::Sub, std::move(a), std::move(b));
}
ArithPtr mul(ArithPtr a, ArithPtr b) {
  return abinary(ArithExpr::Kind::Mul, std::move(a), std::move(b));
}

BoolPtr cmp(CmpOp op, ArithPtr a, ArithPtr b) {
  auto node = std::make_shared<BoolExpr>();
  node->kind = BoolExpr::Kind::Compare;
  node->op = op;
  node->alhs = std::move(a);
  node->arhs = std::move(b);
  return node;
}

namespace {
BoolPtr bbinary(BoolExpr::Kind kind, BoolPtr a, BoolPtr b) {
  auto node = std::make_shared<BoolExpr>();
  node->kind = kind;
  node->blhs = std::move(a);
  node->brhs = std::move(b);
  return node;
}
}  // namespace

BoolPtr band(BoolPtr a, BoolPtr b) {
  return bbinary(BoolExpr::Kind::And, std::move(a), std::move(b));
}
BoolPtr bor(BoolPtr a, BoolPtr b) {
  return bbinary(BoolExpr::Kind::Or, std::move(a), std::move(b));
}
BoolPtr bnot(BoolPtr a) {
  auto node = std::make_shared<BoolExpr>();
  node->kind = BoolExpr::Kind::Not;
  node->blhs = std::move(a);
  return node;
}

ProgPtr assign(std::string v, ArithPtr e) {
  auto node = std::make_shared<Prog>();
  node->kind = Prog::Kind::Assign;
  node->var = std::move(v);
  node->expr = std::move(e);
  return node;
}

ProgPtr seq(ProgPtr a, ProgPtr b) {
  auto node = std::make_shared<Prog>();
  node->kind = Prog::Kind::Seq;
  node->first = std::move(a);
  node->second = std::move(b);
  return node;
}

ProgPtr seq_of(std::vector<ProgPtr> stmts) {
  // Splice nested sequences so the result is always a right-nested spine of
  // non-Seq statements — the canonical shape the parser produces, and the
  // one the pretty-printer can reproduce.
  std::vector<ProgPtr> flat;
  flat.reserve(stmts.size());
  auto append = [&](auto&& self, const ProgPtr& p) -> void {
    if (p->kind == Prog::Kind::Seq) {
      self(self, p->first);
      self(self, p->second);
    } else {
      flat.push_back(p);
    }
  };
  for (const ProgPtr& s : stmts) append(append, s);
  if (flat.empty()) throw std::invalid_argument("seq_of on empty list");
  ProgPtr result = flat.back();
  for (auto it = flat.rbegin() + 1; it != flat.rend(); ++it) {
    result = seq(*it, std::move(result));
  }
  return result;
}

ProgPtr choice(ProgPtr left, Rational p, ProgPtr right) {
  if (p.is_negative() || p > Rational(1)) {
    throw std::invalid_argument("choice probability outside [0, 1]: " + p.str());
  }
  auto node = std::make_shared<Prog>();
  node->kind = Prog::Kind::Choice;
  node->first = std::move(left);
  node->second = std::move(right);
  node->prob = std::move(p);
  return node;
}

ProgPtr while_loop(BoolPtr guard, ProgPtr body) {
  auto node = std::make_shared<Prog>();
  node->kind = Prog::Kind::While;
  node->guard = std::move(guard);
  node->first = std::move(body);
  return node;
}

ProgPtr if_stmt(BoolPtr guard, ProgPtr then_branch, ProgPtr else_branch) {
  auto node = std::make_shared<Prog>();
  node->kind = Prog::Kind::If;
  node->guard = std::move(guard);
  node->first = std::move(then_branch);
  node->second = std::move(else_branch);
  return node;
}

ProgPtr if_then(BoolPtr guard, ProgPtr then_branch) {
  return if_stmt(std::move(guard), std::move(then_branch), skip());
}

ProgPtr skip() {
  auto node = std::make_shared<Prog>();
  node->kind = Prog::Kind::Skip;
  return node;
}

// --------------------------- comparison ------------------------------------

namespace {
template <typename T>
int cmp3(const T& a, const T& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}
}  // namespace

int compare(const ArithPtr& a, const ArithPtr& b) {
  if (a == b) return 0;
  if (int c = cmp3(static_cast<int>(a->kind), static_cast<int>(b->kind)); c != 0) return c;
  switch (a->kind) {
    case ArithExpr::Kind::Literal:
      return compare(a->literal, b->literal);
    case ArithExpr::Kind::Variable:
      return a->var.compare(b->var);
    default:
      if (int c = compare(a->lhs, b->lhs); c != 0) return c;
      return compare(a->rhs, b->rhs);
  }
}

int compare(const BoolPtr& a, const BoolPtr& b) {
  if (a == b) return 0;
  if (int c = cmp3(static_cast<int>(a->kind), static_cast<int>(b->kind)); c != 0) return c;
  switch (a->kind) {
    case BoolExpr::Kind::Compare:
      if (int c = cmp3(static_cast<int>(a->op), static_cast<int>(b->op)); c != 0) return c;
      if (int c = compare(a->alhs, b->alhs); c != 0) return c;
      return compare(a->arhs, b->arhs);
    case BoolExpr::Kind::Not:
      return compare(a->blhs, b->blhs);
    default:
      if (int c = compare(a->blhs, b->blhs); c != 0) return c;
      return compare(a->brhs, b->brhs);
  }
}

int compare(const ProgPtr& a, const ProgPtr& b) {
  if (a == b) return 0;
  if (int c = cmp3(static_cast<int>(a->kind), static_cast<int>(b->kind)); c != 0) return c;
  switch (a->kind) {
    case Prog::Kind::Skip:
      return 0;
    case Prog::Kind::Assign:
      if (int c = a->var.compare(b->var); c != 0) return c;
      return compare(a->expr, b->expr);
    case Prog::Kind::Seq:
      if (int c = compare(a->first, b->first); c != 0) return c;
      return compare(a->second, b->second);
    case Prog::Kind::Choice:
      if (int c = compare(a->prob, b->prob); c != 0) return c;
      if (int c = compare(a->first, b->first); c != 0) return c;
      return compare(a->second, b->second);
    case Prog::Kind::While:
      if (int c = compare(a->guard, b->guard); c != 0) return c;
      return compare(a->first, b->first);
    case Prog::Kind::If:
      if (int c = compare(a->guard, b->guard); c != 0) return c;
      if (int c = compare(a->first, b->first); c != 0) return c;
      return compare(a->second, b->second);
  }
  return 0;
}

bool equal(const ArithPtr& a, const ArithPtr& b) { return compare(a, b) == 0; }
bool equal(const BoolPtr& a, const BoolPtr& b) { return compare(a, b) == 0; }
bool equal(const ProgPtr& a, const ProgPtr& b) { return compare(a, b) == 0; }

// --------------------------- free variables --------------------------------

namespace {

void collect(const ArithPtr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case ArithExpr::Kind::Literal:
      return;
    case ArithExpr::Kind::Variable:
      out.insert(e->var);
      return;
    default:
      collect(e->lhs, out);
      collect(e->rhs, out);
  }
}

void collect(const BoolPtr& b, std::set<std::string>& out) {
  switch (b->kind) {
    case BoolExpr::Kind::Compare:
      collect(b->alhs, out);
      collect(b->arhs, out);
      return;
    case BoolExpr::Kind::Not:
      collect(b->blhs, out);
      return;
    default:
      collect(b->blhs, out);
      collect(b->brhs, out);
  }
}

void collect(const ProgPtr& p, std::set<std::string>& out) {
  switch (p->kind) {
    case Prog::Kind::Skip:
      return;
    case Prog::Kind::Assign:
      out.insert(p->var);
      collect(p->expr, out);
      return;
    case Prog::Kind::Seq:
    case Prog::Kind::Choice:
      collect(p->first, out);
      collect(p->second, out);
      return;
    case Prog::Kind::While:
      collect(p->guard, out);
      collect(p->first, out);
      return;
    case Prog::Kind::If:
      collect(p->guard, out);
      collect(p->first, out);
      collect(p->second, out);
      return;
  }
}

}  // namespace

std::set<std::string> free_vars(const ArithPtr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

std::set<std::string> free_vars(const BoolPtr& b) {
  std::set<std::string> out;
  collect(b, out);
  return out;
}

std::set<std::string> free_vars(const ProgPtr& p) {
  std::set<std::string> out;
  collect(p, out);
  return out;
}

bool contains_choice(const ProgPtr& p) {
  switch (p->kind) {
    case Prog::Kind::Choice:
      return true;
    case Prog::Kind::Seq:
    case Prog::Kind::If:
      return contains_choice(p->first) || contains_choice(p->second);
    case Prog::Kind::While:
      return contains_choice(p->first);
    default:
      return false;
  }
}

// --------------------------- evaluation ------------------------------------

Rational eval_arith(const ArithPtr& e, const Valuation& env) {
  switch (e->kind) {
    case ArithExpr::Kind::Literal:
      return e->literal;
    case ArithExpr::Kind::Variable:
      return env.get(e->var);
    case ArithExpr::Kind::Add:
      return eval_arith(e->lhs, env) + eval_arith(e->rhs, env);
    case ArithExpr::Kind::Sub:
      return eval_arith(e->lhs, env) - eval_arith(e->rhs, env);
    case ArithExpr::Kind::Mul:
      return eval_arith(e->lhs, env) * eval_arith(e->rhs, env);
  }
  return Rational(0);
}

bool eval_bool(const BoolPtr& b, const Valuation& env) {
  switch (b->kind) {
    case BoolExpr::Kind::Compare: {
      int c = compare(eval_arith(b->alhs, env), eval_arith(b->arhs, env));
      switch (b->op) {
        case CmpOp::Eq: return c == 0;
        case CmpOp::Ne: return c != 0;
        case CmpOp::Lt: return c < 0;
        case CmpOp::Le: return c <= 0;
        case CmpOp::Gt: return c > 0;
        case CmpOp::Ge: return c >= 0;
      }
      return false;
    }
    case BoolExpr::Kind::And:
      return eval_bool(b->blhs, env) && eval_bool(b->brhs, env);
    case BoolExpr::Kind::Or:
      return eval_bool(b->blhs, env) || eval_bool(b->brhs, env);
    case BoolExpr::Kind::Not:
      return !eval_bool(b->blhs, env);
  }
  return false;
}

}  // namespace pgcl
