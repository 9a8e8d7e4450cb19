#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "pgcl/rational.hpp"
#include "pgcl/valuation.hpp"

namespace pgcl {

// ---------------------------------------------------------------------------
// Arithmetic expressions: non-negative rational literals, variables, +, -, *.
// Evaluation is total over all of Q; intermediate values may go negative —
// clamping to 0 is the assign rule's job, not the expression's.
// ---------------------------------------------------------------------------

struct ArithExpr;
using ArithPtr = std::shared_ptr<const ArithExpr>;

struct ArithExpr {
  enum class Kind { Literal, Variable, Add, Sub, Mul };
  Kind kind;
  Rational literal;      // Literal
  std::string var;       // Variable
  ArithPtr lhs, rhs;     // Add / Sub / Mul
};

ArithPtr lit(Rational value);
ArithPtr var(std::string name);
ArithPtr add(ArithPtr a, ArithPtr b);
ArithPtr sub(ArithPtr a, ArithPtr b);
ArithPtr mul(ArithPtr a, ArithPtr b);

// ---------------------------------------------------------------------------
// Boolean expressions: comparisons of arithmetic expressions plus the usual
// connectives.
// ---------------------------------------------------------------------------

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct BoolExpr;
using BoolPtr = std::shared_ptr<const BoolExpr>;

struct BoolExpr {
  enum class Kind { Compare, And, Or, Not };
  Kind kind;
  CmpOp op;              // Compare
  ArithPtr alhs, arhs;   // Compare
  BoolPtr blhs, brhs;    // And / Or; Not uses blhs only
};

BoolPtr cmp(CmpOp op, ArithPtr a, ArithPtr b);
BoolPtr band(BoolPtr a, BoolPtr b);
BoolPtr bor(BoolPtr a, BoolPtr b);
BoolPtr bnot(BoolPtr a);

// ---------------------------------------------------------------------------
// Programs. Sequences are kept right-nested (Seq(A, Seq(B, C))) by the
// builders and the parser; the small-step rules then peel statements
// left-to-right without rebalancing.
// ---------------------------------------------------------------------------

struct Prog;
using ProgPtr = std::shared_ptr<const Prog>;

struct Prog {
  enum class Kind { Assign, Seq, Choice, While, If, Skip };
  Kind kind;
  std::string var;       // Assign
  ArithPtr expr;         // Assign
  ProgPtr first, second; // Seq; Choice branches; If then/else; While body = first
  Rational prob;         // Choice: probability of the first branch
  BoolPtr guard;         // While / If
};

ProgPtr assign(std::string v, ArithPtr e);
ProgPtr seq(ProgPtr a, ProgPtr b);
/// Right-folds a statement list into a Seq spine. Requires at least one item.
ProgPtr seq_of(std::vector<ProgPtr> stmts);
/// Throws std::invalid_argument unless p is in [0, 1].
ProgPtr choice(ProgPtr left, Rational p, ProgPtr right);
ProgPtr while_loop(BoolPtr guard, ProgPtr body);
ProgPtr if_stmt(BoolPtr guard, ProgPtr then_branch, ProgPtr else_branch);
ProgPtr if_then(BoolPtr guard, ProgPtr then_branch);  // else = skip
ProgPtr skip();

// Structural equality / three-way ordering, with pointer fast paths.
bool equal(const ArithPtr& a, const ArithPtr& b);
bool equal(const BoolPtr& a, const BoolPtr& b);
bool equal(const ProgPtr& a, const ProgPtr& b);
int compare(const ArithPtr& a, const ArithPtr& b);
int compare(const BoolPtr& a, const BoolPtr& b);
int compare(const ProgPtr& a, const ProgPtr& b);

std::set<std::string> free_vars(const ArithPtr& e);
std::set<std::string> free_vars(const BoolPtr& b);
std::set<std::string> free_vars(const ProgPtr& p);

bool contains_choice(const ProgPtr& p);

// Expression evaluation over exact rationals (total).
Rational eval_arith(const ArithPtr& e, const Valuation& env);
bool eval_bool(const BoolPtr& b, const Valuation& env);

}  // namespace pgcl
