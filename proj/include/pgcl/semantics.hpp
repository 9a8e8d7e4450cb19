#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pgcl/ast.hpp"

namespace pgcl {

/// Continuation of a run, factored as the statement currently executing plus
/// the stack of statements pending behind it (back() runs next). This is the
/// right-spine form of the syntactic continuation: Seq(A, B) decomposes into
/// current = A with B pushed, and current == nullptr marks a finished left
/// component awaiting its pop step. The whole run is terminated only when the
/// stack is empty as well.
struct Continuation {
  ProgPtr current;                // nullptr = finished marker
  std::vector<ProgPtr> pending;   // back() is next up

  bool terminated() const { return current == nullptr && pending.empty(); }
};

int compare(const Continuation& a, const Continuation& b);
bool operator==(const Continuation& a, const Continuation& b);

/// Reconstructs a printable form of the continuation ("<done>" once
/// terminated).
std::string describe(const Continuation& k);

/// Run state: continuation, valuation, accumulated path probability, and the
/// word of probabilistic choices made so far ('L'/'R').
struct State {
  Continuation cont;
  Valuation env;
  Rational weight = Rational(1);
  std::string choices;

  bool terminated() const { return cont.terminated(); }
};

/// Pushes a program onto a continuation, splitting its Seq spine.
Continuation push_program(Continuation k, const ProgPtr& p);

/// The initial state for running P on input env: weight 1, empty choice word.
State initial_state(const ProgPtr& p, Valuation env);

struct Terminal {};
struct Deterministic { State next; };
struct Probabilistic { State left, right; };
using StepResult = std::variant<Terminal, Deterministic, Probabilistic>;

/// Applies exactly one inference rule:
///  - assignment writes max{[[e]], 0} and finishes the statement,
///  - a finished statement with work pending pops to the next statement,
///  - probabilistic choice yields both branches, weights a*p / a*(1-p) and
///    choice words theta.L / theta.R,
///  - loop and conditional guards resolve in one step; skip is a no-op step,
///  - a fully terminated state has no successor.
StepResult step(const State& state);

/// Bottom-or-state: nullopt plays the role of the undefined marker.
using BottomOrState = std::optional<State>;

/// The k-step successor of `state` where probabilistic choices are resolved
/// by `word`, consumed in order and exactly. Returns nullopt when the word
/// length does not match the number of probabilistic steps, or when the run
/// terminates in fewer than k steps.
BottomOrState successor(std::uint64_t k, State state, std::string_view word);

/// Path probability of a terminated state, 0 for anything else.
Rational alpha(const BottomOrState& s);

/// env(v) * a for a terminated state, 0 for anything else.
Rational wp_weight(const BottomOrState& s, const std::string& v);

}  // namespace pgcl
