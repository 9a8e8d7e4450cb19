#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pgcl/parser.hpp"
#include "pgcl/semantics.hpp"

namespace pgcl::testing {

inline ProgPtr parse(const std::string& text) {
  return parse_program_or_throw(text);
}

// Small corpus used across the suites.

// Fair two-sided outcome in two steps.
inline ProgPtr coin() { return parse("{x := 1} [1/2] {x := 2}"); }

// Geometric counter: i unbounded, so the quotient is infinite-state.
inline ProgPtr geo() {
  return parse(
      "i := 0; {c := 0} [1/2] {c := 1};"
      "while (c != 0) { i := i + 1; {c := 0} [1/2] {c := 1} }");
}

// geo without the counter increment: finite-state, still geometric in length.
inline ProgPtr geo_prime() {
  return parse(
      "i := 0; {c := 0} [1/2] {c := 1};"
      "while (c != 0) { {c := 0} [1/2] {c := 1} }");
}

inline ProgPtr diverge() { return parse("while (0 = 0) { x := x + 1 }"); }

inline ProgPtr self_loop() { return parse("while (0 = 0) { skip }"); }

// Ordinary programs for the reduction gadgets.
inline ProgPtr q_identity() { return parse("y := y"); }            // halts everywhere
inline ProgPtr q_loop_on_zero() { return parse("while (y = 0) { y := y }"); }
inline ProgPtr q_diverge() { return parse("while (0 = 0) { y := y }"); }
inline ProgPtr q_two_vars() { return parse("y := y + z; z := z + 1"); }
inline ProgPtr q_countdown() {
  return parse("while (y > 0) { y := y - 1 }");
}

inline ProgPtr nested_choice() {
  return parse(
      "{{a := 1} [1/3] {a := 2}} [1/4] {{a := 3} [2/5] {a := 4}}");
}

inline ProgPtr two_coins() {
  return parse("{x := 1} [1/2] {x := 2}; {y := 0} [1/3] {y := x}");
}

inline ProgPtr biased_coin() { return parse("{x := 1} [1/3] {x := 0}"); }

inline ProgPtr branchy_if() {
  return parse(
      "{x := 1} [2/3] {x := 2};"
      "if (x = 1) { y := x + 1 } else { y := 0 }");
}

// Deterministic trace of an ordinary program: the states after 0..n steps
// (stops early at termination).
inline std::vector<State> deterministic_trace(const ProgPtr& p,
                                              const Valuation& env,
                                              std::uint64_t n) {
  std::vector<State> trace;
  trace.push_back(initial_state(p, env));
  for (std::uint64_t i = 0; i < n; ++i) {
    StepResult r = step(trace.back());
    if (std::holds_alternative<Terminal>(r)) break;
    trace.push_back(std::get<Deterministic>(r).next);
  }
  return trace;
}

// Runs a choice-free program to termination; returns final valuation and
// step count. Throws on a probabilistic step or when max_steps is hit.
inline std::pair<Valuation, std::uint64_t> run_to_end(
    const ProgPtr& p, Valuation env, std::uint64_t max_steps = 1'000'000) {
  State state = initial_state(p, std::move(env));
  for (std::uint64_t steps = 0; steps <= max_steps; ++steps) {
    if (state.terminated()) return {state.env, steps};
    StepResult r = step(state);
    state = std::get<Deterministic>(r).next;
  }
  throw std::runtime_error("run_to_end: step limit hit");
}

// ---------------------------------------------------------------------------
// Random AST generation (seeded, deterministic).
// ---------------------------------------------------------------------------

class AstGen {
 public:
  explicit AstGen(std::uint64_t seed) : rng_(seed) {}

  Rational rational() {
    long num = pick(0, 6);
    long den = pick(1, 4);
    return Rational(num, den);
  }

  Rational probability() {
    long den = pick(1, 6);
    long num = pick(0, den);
    return Rational(num, den);
  }

  std::string variable() {
    static const char* kPool[] = {"a", "b", "c", "x", "y"};
    return kPool[pick(0, 4)];
  }

  ArithPtr arith(int depth = 2) {
    if (depth == 0 || chance(2, 5)) {
      return chance(1, 2) ? lit(rational()) : var(variable());
    }
    switch (pick(0, 2)) {
      case 0: return add(arith(depth - 1), arith(depth - 1));
      case 1: return sub(arith(depth - 1), arith(depth - 1));
      default: return mul(arith(depth - 1), arith(depth - 1));
    }
  }

  BoolPtr boolean(int depth = 2) {
    if (depth == 0 || chance(1, 2)) {
      static const CmpOp kOps[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt,
                                   CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
      return cmp(kOps[pick(0, 5)], arith(1), arith(1));
    }
    switch (pick(0, 2)) {
      case 0: return band(boolean(depth - 1), boolean(depth - 1));
      case 1: return bor(boolean(depth - 1), boolean(depth - 1));
      default: return bnot(boolean(depth - 1));
    }
  }

  // Statement lists fold to the right, matching the parser's convention.
  ProgPtr program(int depth = 3) {
    int stmts = pick(1, depth > 1 ? 3 : 2);
    std::vector<ProgPtr> list;
    for (int i = 0; i < stmts; ++i) list.push_back(statement(depth));
    return seq_of(std::move(list));
  }

  ProgPtr statement(int depth) {
    if (depth <= 1 || chance(1, 2)) {
      if (chance(1, 6)) return skip();
      return assign(variable(), arith(2));
    }
    switch (pick(0, 3)) {
      case 0:
        return choice(program(depth - 1), probability(), program(depth - 1));
      case 1:
        return while_loop(boolean(1), program(depth - 1));
      case 2:
        return chance(1, 2)
                   ? if_then(boolean(1), program(depth - 1))
                   : if_stmt(boolean(1), program(depth - 1),
                             program(depth - 1));
      default:
        return assign(variable(), arith(2));
    }
  }

  // Choice-free statements only (for OrdinaryProgram inputs). Loops guard on
  // a decreasing counter so most generated programs halt quickly.
  ProgPtr ordinary(int depth = 3) {
    int stmts = pick(1, 3);
    std::vector<ProgPtr> list;
    for (int i = 0; i < stmts; ++i) {
      if (depth > 1 && chance(1, 4)) {
        std::string v = variable();
        list.push_back(while_loop(cmp(CmpOp::Gt, var(v), lit(0)),
                                  assign(v, sub(var(v), lit(1)))));
      } else if (depth > 1 && chance(1, 5)) {
        list.push_back(if_stmt(boolean(1), ordinary(depth - 1),
                               ordinary(depth - 1)));
      } else {
        list.push_back(assign(variable(), arith(2)));
      }
    }
    return seq_of(std::move(list));
  }

  Valuation valuation() {
    Valuation env;
    int n = pick(0, 3);
    for (int i = 0; i < n; ++i) env.set(variable(), rational());
    return env;
  }

  bool chance(int num, int den) { return pick(1, den) <= num; }

  long pick(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng_);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace pgcl::testing
