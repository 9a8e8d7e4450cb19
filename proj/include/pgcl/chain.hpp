#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "pgcl/semantics.hpp"

namespace pgcl {

/// Finite absorbing Markov chain obtained by quotienting run states down to
/// (continuation, valuation): the inference rules never read the accumulated
/// probability or the choice word, so dropping them is a bisimulation. States
/// are numbered in breadth-first discovery order; every state is reachable
/// from the start with positive probability. Terminal states carry no
/// transition row; every other row sums to exactly 1.
struct FiniteChain {
  struct StateInfo {
    Continuation cont;
    Valuation env;
  };
  struct Transition {
    std::size_t target;
    Rational prob;  // in (0, 1]; zero-probability branches are dropped
  };

  std::vector<StateInfo> states;
  std::vector<std::vector<Transition>> rows;  // empty for terminal states
  std::vector<bool> terminal;
  std::size_t start = 0;

  std::size_t size() const { return states.size(); }
};

struct CapExceeded {
  std::uint64_t cap = 0;
};

/// Breadth-first closure of the quotiented step graph. CapExceeded signals
/// that the reachable quotient exceeds state_cap — a scope boundary, not an
/// input error.
std::variant<FiniteChain, CapExceeded> extract_chain(const ProgPtr& program,
                                                     const Valuation& env,
                                                     std::uint64_t state_cap);

/// Per-state probability of eventually reaching a terminal state: the least
/// solution of the absorption system, solved exactly.
std::vector<Rational> absorption_probabilities(const FiniteChain& chain);

/// Expected outcome of v: sum over terminal states of (probability of being
/// absorbed in that state) * (its valuation of v).
Rational expected_outcome_exact(const FiniteChain& chain, const std::string& v);

struct Infinite {};
using StepsResult = std::variant<Rational, Infinite>;

std::string steps_str(const StepsResult& r);

/// Expected number of steps until absorption from the start state; Infinite
/// exactly when some reachable state has absorption probability below 1.
StepsResult expected_steps_exact(const FiniteChain& chain);

struct SolveResult {
  Rational termination_probability;
  std::map<std::string, Rational> expected_outcome;
  StepsResult expected_steps = Infinite{};
  bool ast = false;
  bool past = false;
  std::size_t state_count = 0;
};

/// Runs the three exact solves on the extracted chain. On finite-state
/// programs this decides almost-sure and positive almost-sure termination
/// outright.
std::variant<SolveResult, CapExceeded> decide_ast_past_finite(
    const ProgPtr& program, const Valuation& env, std::uint64_t state_cap,
    const std::vector<std::string>& outcome_vars = {});

/// One line per transition: "src dst prob".
void dump_chain(const FiniteChain& chain, std::ostream& os);

}  // namespace pgcl
