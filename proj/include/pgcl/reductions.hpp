#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "pgcl/semantics.hpp"

namespace pgcl {

/// A program containing no probabilistic choice. Checked on construction.
class OrdinaryProgram {
 public:
  explicit OrdinaryProgram(ProgPtr program);
  const ProgPtr& get() const { return program_; }

 private:
  ProgPtr program_;
};

/// Hands out variable names that avoid a set of taken names. Preferred names
/// are used as-is when available; collisions get a numeric suffix.
class NameAllocator {
 public:
  explicit NameAllocator(std::set<std::string> used = {});
  std::string fresh(const std::string& base);
  const std::vector<std::string>& allocated() const { return allocated_; }

 private:
  std::set<std::string> used_;
  std::vector<std::string> allocated_;
};

/// Single-step simulation of an ordinary program Q, compiled ahead of time
/// by flattening Q's reachable continuations into numbered locations with a
/// program-counter dispatch block. Running step_block once from any
/// non-final location advances the simulated program by exactly one
/// small-step inference; term_var is set to 1 by the round that reaches Q's
/// terminated continuation.
struct StepperBundle {
  ProgPtr step_block;
  ProgPtr init_reset;  // pc := 0
  std::string pc_var;
  std::string term_var;
  std::uint64_t location_count = 0;    // dispatchable locations
  std::uint64_t terminal_location = 0; // pc value of the terminated state
  /// Location table: locations[i] is the continuation of Q simulated at
  /// pc = i. Index terminal_location holds the terminated continuation.
  std::vector<Continuation> locations;
};

/// Rejects programs containing probabilistic choice (enforced by the
/// OrdinaryProgram wrapper). Fresh pc/term names come from `names`.
StepperBundle flatten_to_stepper(const OrdinaryProgram& q, NameAllocator& names);

/// Choice-free fragment decoding the inverse Cantor n-tupling of index_var
/// into the target variables (arity 1 is a plain copy). Scratch names come
/// from `names`; index_var itself is left untouched.
ProgPtr input_decoder_gadget(const std::vector<std::string>& targets,
                             const std::string& index_var,
                             NameAllocator& names);

/// Choice-free fragment running on the order of 2^x effectless steps: a
/// doubling loop computes 2^x, a padded countdown burns it. Non-scratch
/// variables are unchanged.
ProgPtr cheer_block(const std::string& x_var, NameAllocator& names);

// Meta-level pairing oracle (used to pick and verify input indices).
mpz_class cantor_pair(const mpz_class& a, const mpz_class& b);
std::pair<mpz_class, mpz_class> cantor_unpair(const mpz_class& z);
/// The valuation the in-language decoder produces for this index.
Valuation decode_input_meta(const std::vector<std::string>& targets,
                            mpz_class index);
/// Inverse of decode_input_meta on natural-valued valuations.
mpz_class encode_input_meta(const std::vector<std::string>& targets,
                            const Valuation& env);
/// Decoded variable order used for a program's inputs: sorted free variables.
std::vector<std::string> input_variable_order(const ProgPtr& q);

struct GadgetQuery {
  enum class Kind { ExpectationBound, Termination, PositiveTermination };
  Kind kind = Kind::Termination;
  std::string variable;  // ExpectationBound only
  Rational bound;        // ExpectationBound only
};

struct GadgetOutput {
  ProgPtr program;
  GadgetQuery query;
  std::string notes;  // sidecar text: gadget name, query tuple, reserved names
  std::vector<std::string> reserved;
};

/// v := 0; {v := 1} [1/2] {<load env into Q's variables>; Q; v := 1}.
/// E(v) is 1 when Q halts on env and 1/2 otherwise; query bound 1/2.
GadgetOutput gadget_lexp(const OrdinaryProgram& q, const Valuation& env);

/// Two geometric coin-toss loops draw an input index i and a step count k,
/// then a bounded simulation runs Q on the decoded input for exactly k
/// rounds and pays out 2^(k+1) when Q terminated at round k exactly.
/// E(v) sums to 1 iff Q halts on every input; query bound 1.
GadgetOutput gadget_rexp(const OrdinaryProgram& q);

/// v := 0; Q; v := 1 — E(v) equals Q's termination probability.
GadgetOutput gadget_ast_to_exp(const ProgPtr& q, const Valuation& env);

/// Geometric loop draws an input index, then Q runs to completion on the
/// decoded input via the flattened stepper. Terminates almost surely iff Q
/// halts on every input.
GadgetOutput gadget_uh_to_ast(const OrdinaryProgram& q);

/// Assignment prefix pinning every relevant variable to env, then Q; the
/// result behaves identically on every start valuation.
GadgetOutput gadget_ast_to_uast(const ProgPtr& q, const Valuation& env);

/// The coin-stopped simulation loop: each iteration advances Q's simulation
/// one step, cheers for ~2^x steps whenever a simulated run completes (then
/// moves to the next input), and stops with probability 1/2. Expected
/// runtime is finite iff Q diverges on some input.
GadgetOutput gadget_past(const OrdinaryProgram& q);

/// gadget_past without the `i := 0` prefix assignment: the input valuation
/// chooses the first simulated index.
GadgetOutput gadget_upast(const OrdinaryProgram& q);

}  // namespace pgcl
