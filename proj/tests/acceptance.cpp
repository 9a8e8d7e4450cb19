// Acceptance gate: end-to-end checks covering the exact-value contracts and
// the randomized property suites. Prints one PASS/FAIL line per criterion
// and exits nonzero if any fail.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "pgcl/chain.hpp"
#include "pgcl/explorer.hpp"
#include "pgcl/pretty.hpp"
#include "pgcl/reductions.hpp"
#include "pgcl/sampler.hpp"
#include "test_support.hpp"

using namespace pgcl;
using testing::AstGen;

namespace {

struct Failure {
  std::string message;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw Failure{message};
}

template <typename T>
std::string str_of(const T& value) {
  std::ostringstream os;
  os << value;
  return os.str();
}

// ---------------------------------------------------------------------------
// 1. The two partial-sum engines agree row-by-row, exactly, on the corpus.
// ---------------------------------------------------------------------------

void criterion_partial_sum_engines() {
  auto started = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, ProgPtr>> corpus = {
      {"coin", testing::coin()},
      {"geo", testing::geo()},
      {"geo_prime", testing::geo_prime()},
      {"diverge", testing::diverge()},
      {"lexp(halting)",
       gadget_lexp(OrdinaryProgram(testing::q_identity()), {}).program},
      {"lexp(diverging)",
       gadget_lexp(OrdinaryProgram(testing::q_diverge()), {}).program},
      {"ast_to_exp(coin)", gadget_ast_to_exp(testing::coin(), {}).program},
      {"uh_to_ast(identity)",
       gadget_uh_to_ast(OrdinaryProgram(testing::q_identity())).program},
      {"nested_choice", testing::nested_choice()},
      {"two_coins", testing::two_coins()},
      {"biased_coin", testing::biased_coin()},
      {"branchy_if", testing::branchy_if()},
  };
  require(corpus.size() >= 10, "corpus too small");
  for (const auto& [name, program] : corpus) {
    auto fast = explore_partial_sums(program, {}, "v", 12);
    auto slow = brute_force_def4(program, {}, "v", 12);
    require(fast.size() == slow.size(), name + ": row count");
    for (std::size_t i = 0; i < fast.size(); ++i) {
      const auto& a = fast[i];
      const auto& b = slow[i];
      bool same = a.depth == b.depth && a.exact_k_mass == b.exact_k_mass &&
                  a.pr_within_k == b.pr_within_k &&
                  a.exp_v_partial == b.exp_v_partial &&
                  a.runtime_partial == b.runtime_partial &&
                  a.frontier_size == b.frontier_size &&
                  a.exhausted == b.exhausted;
      require(same, name + ": row " + str_of(i) + " differs: " + csv_line(a) +
                        " vs " + csv_line(b));
    }
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  require(elapsed < 30.0, "oracle comparison took " + str_of(elapsed) + "s");
}

// ---------------------------------------------------------------------------
// 2. Lower-bound gadget dichotomy: E(v) = 1 for halting inputs (certified and
//    chain-solved), E(v) = 1/2 exactly for diverging inputs (never certified).
// ---------------------------------------------------------------------------

void criterion_lower_bound_dichotomy() {
  GadgetOutput halting = gadget_lexp(OrdinaryProgram(testing::q_identity()), {});
  auto cert = certify_lower_expectation(halting.program, {},
                                        halting.query.variable,
                                        Rational(1, 2), 64);
  require(std::holds_alternative<Certified>(cert),
          "halting case not certified within budget 64");

  auto solved =
      decide_ast_past_finite(halting.program, {}, 10'000,
                             {halting.query.variable});
  require(std::holds_alternative<SolveResult>(solved), "halting gadget chain");
  require(std::get<SolveResult>(solved).expected_outcome.at(
              halting.query.variable) == Rational(1),
          "halting gadget must solve to E(v) = 1 exactly");

  GadgetOutput diverging =
      gadget_lexp(OrdinaryProgram(testing::q_diverge()), {});
  auto rows =
      explore_partial_sums(diverging.program, {}, diverging.query.variable, 50);
  // The left branch deposits mass 1/2 at depth 4; nothing ever joins it.
  for (std::size_t k = 0; k < rows.size(); ++k) {
    require(rows[k].exp_v_partial == (k < 4 ? Rational(0) : Rational(1, 2)),
            "diverging gadget partial sum at depth " + str_of(k));
  }
  auto refused = certify_lower_expectation(diverging.program, {},
                                           diverging.query.variable,
                                           Rational(1, 2), 64);
  require(std::holds_alternative<BudgetExhausted>(refused),
          "diverging case must exhaust the budget at bound 1/2");
}

// ---------------------------------------------------------------------------
// 3. Upper-bound gadget masses: every recovered input index pays exactly
//    2^-(i+1); the partial sums pass 1 - 2^-6 at a searched depth for a
//    totally halting input program, and stay at or below 1/2 when the input
//    program diverges on index 0.
// ---------------------------------------------------------------------------

void criterion_upper_bound_masses() {
  GadgetOutput g = gadget_rexp(OrdinaryProgram(testing::q_identity()));
  auto leaves = collect_terminals(g.program, {}, 300);
  std::map<long, Rational> payout;
  std::map<std::pair<long, long>, Rational> joint;
  for (const auto& leaf : leaves) {
    long i = static_cast<long>(leaf.env.get("i").numerator().get_si());
    long k = static_cast<long>(leaf.env.get("k").numerator().get_si());
    payout[i] += leaf.weight * leaf.env.get("v");
    joint[{i, k}] += leaf.weight;
  }
  for (long i = 0; i <= 5; ++i) {
    require(payout[i] == Rational(1, 1L << (i + 1)),
            "payout for index " + str_of(i) + " is " + payout[i].str());
  }
  for (long a = 0; a <= 2; ++a) {
    for (long b = 0; b <= 2; ++b) {
      require(joint[{a, b}] == Rational(1, 1L << (a + b + 2)),
              "joint mass of (i,k)=(" + str_of(a) + "," + str_of(b) + ")");
    }
  }

  // Search for the first depth whose partial sum clears 1 - 2^-6.
  Rational target = Rational(1) - Rational(1, 64);
  FrontierExplorer search(g.program, {}, g.query.variable, {});
  std::uint64_t found = 0;
  for (std::uint64_t k = 0; k < 400 && found == 0; ++k) {
    search.advance();
    if (search.row().exp_v_partial >= target) found = search.row().depth;
  }
  require(found > 0, "partial sums never reached 1 - 2^-6 within depth 400");

  GadgetOutput gd = gadget_rexp(OrdinaryProgram(testing::q_loop_on_zero()));
  auto rows = explore_partial_sums(gd.program, {}, gd.query.variable, 160);
  for (const auto& row : rows) {
    require(row.exp_v_partial <= Rational(1, 2),
            "diverging-on-0 partial sum exceeds 1/2 at depth " +
                str_of(row.depth));
  }
  require(rows.back().exp_v_partial > Rational(1, 4),
          "diverging-on-0 partial sums failed to accumulate");
}

// ---------------------------------------------------------------------------
// 4. Chain solver and explorer agree bit-for-bit wherever both conclude.
// ---------------------------------------------------------------------------

void criterion_chain_explorer_crosscheck() {
  std::vector<std::pair<std::string, ProgPtr>> corpus = {
      {"coin", testing::coin()},
      {"lexp(halting)",
       gadget_lexp(OrdinaryProgram(testing::q_identity()), {}).program},
      {"ast_to_exp(coin)", gadget_ast_to_exp(testing::coin(), {}).program},
      {"nested_choice", testing::nested_choice()},
      {"two_coins", testing::two_coins()},
      {"biased_coin", testing::biased_coin()},
      {"branchy_if", testing::branchy_if()},
  };
  int checked = 0;
  for (const auto& [name, program] : corpus) {
    auto extracted = extract_chain(program, {}, 10'000);
    auto* chain = std::get_if<FiniteChain>(&extracted);
    if (chain == nullptr) continue;
    auto rows = explore_partial_sums(program, {}, "x", 40);
    if (!rows.back().exhausted) continue;
    ++checked;
    require(rows.back().pr_within_k ==
                absorption_probabilities(*chain)[chain->start],
            name + ": termination probability mismatch");
    require(rows.back().exp_v_partial == expected_outcome_exact(*chain, "x"),
            name + ": expected outcome mismatch");
    auto steps = expected_steps_exact(*chain);
    require(std::holds_alternative<Rational>(steps), name + ": steps finite");
    require(rows.back().runtime_partial == std::get<Rational>(steps),
            name + ": expected steps mismatch");
  }
  require(checked >= 5, "too few cross-checkable corpus programs");

  auto coin_solved = decide_ast_past_finite(testing::coin(), {}, 1000, {"x"});
  const auto& r = std::get<SolveResult>(coin_solved);
  require(r.termination_probability == Rational(1), "coin Pr");
  require(r.expected_outcome.at("x") == Rational(3, 2), "coin E(x)");
  require(std::get<Rational>(r.expected_steps) == Rational(2), "coin E(steps)");
}

// ---------------------------------------------------------------------------
// 5. Runtime dichotomy of the simulation-loop gadgets, plus the structural
//    relation between the indexed and free-start variants.
// ---------------------------------------------------------------------------

std::vector<std::uint64_t> all_continue_toss_depths(const ProgPtr& program,
                                                    std::size_t count) {
  std::vector<std::uint64_t> depths;
  State s = initial_state(program, {});
  for (std::uint64_t depth = 0; depths.size() < count; ++depth) {
    require(depth < 100'000, "toss walk exceeded its step allowance");
    StepResult r = step(s);
    if (auto* d = std::get_if<Deterministic>(&r)) {
      s = d->next;
    } else if (auto* p = std::get_if<Probabilistic>(&r)) {
      depths.push_back(depth + 1);
      s = p->right;  // c := 1, keep looping
    } else {
      require(false, "all-continue path terminated unexpectedly");
    }
  }
  return depths;
}

std::vector<ProgPtr> spine(const ProgPtr& p) {
  std::vector<ProgPtr> stmts;
  ProgPtr cursor = p;
  while (cursor->kind == Prog::Kind::Seq) {
    stmts.push_back(cursor->first);
    cursor = cursor->second;
  }
  stmts.push_back(cursor);
  return stmts;
}

void criterion_runtime_dichotomy() {
  // Everywhere-halting input: the cheer block fires on every simulated run,
  // so the runtime series diverges; both bounds certify within the frozen
  // depth budget.
  GadgetOutput diverging = gadget_past(OrdinaryProgram(testing::q_identity()));
  for (long bound : {10L, 100L}) {
    auto cert =
        certify_runtime_exceeds(diverging.program, {}, Rational(bound), 4096);
    require(std::holds_alternative<Certified>(cert),
            "runtime bound " + str_of(bound) + " not certified in 4096");
  }

  // Input diverging on index 0: the simulation never completes a run, the
  // cheer block never fires, and the expected runtime is finite. Bound it by
  // an exact prefix plus the geometric tail sum_{x>d} x * 2^(1-x).
  GadgetOutput converging =
      gadget_past(OrdinaryProgram(testing::q_loop_on_zero()));
  auto tosses = all_continue_toss_depths(converging.program, 28);
  std::uint64_t l_max = 0;
  for (std::size_t i = 1; i < tosses.size(); ++i) {
    l_max = std::max(l_max, tosses[i] - tosses[i - 1]);
  }
  std::uint64_t d = tosses.size() - 1;          // tosses completed at depth D
  std::uint64_t depth_d = tosses.back();        // D: depth of toss number d+1
  require(l_max <= d, "tail bound needs more prefix: l_max = " + str_of(l_max));

  FrontierExplorer explorer(converging.program, {}, "", {});
  Rational rp_at_d;
  Rational bound;
  for (std::uint64_t k = 1; k <= 3000; ++k) {
    explorer.advance();
    const PartialSumRow& row = explorer.row();
    if (row.depth == depth_d) {
      rp_at_d = row.runtime_partial;
      // Beyond D every live path has survived at least d coin tosses; one
      // toss epoch spans at most l_max <= d depths, so the remaining tail is
      // dominated by sum_{x > d-1} x * 2^(1-x) = 2 (d+1) 2^(1-d) / 2.
      require(explorer.frontier_mass() <=
                  Rational(2) / Rational::pow2(static_cast<unsigned long>(d)),
              "live mass at the prefix edge exceeds its bound");
      Rational tail = Rational(2) * Rational(static_cast<long>(d) + 1) /
                      Rational::pow2(static_cast<unsigned long>(d - 1));
      bound = rp_at_d + tail;
    }
    if (!bound.is_zero()) {
      require(row.runtime_partial <= bound,
              "runtime partial exceeded the tail bound at depth " +
                  str_of(row.depth));
    }
  }
  require(!bound.is_zero(), "bound never computed");
  // The bound is tight: the partial sums approach it.
  require(bound - explorer.row().runtime_partial < Rational(1, 100),
          "tail bound is slack by more than 1/100");

  // The free-start variant differs by exactly the removed `i := 0`.
  GadgetOutput upast = gadget_upast(OrdinaryProgram(testing::q_identity()));
  std::vector<ProgPtr> with_init = spine(diverging.program);
  std::vector<ProgPtr> without_init = spine(upast.program);
  require(with_init.size() == without_init.size() + 1,
          "variants differ by more than one statement");
  std::size_t removed = 0;
  for (std::size_t i = 0, j = 0; i < with_init.size(); ++i) {
    if (j < without_init.size() && equal(with_init[i], without_init[j])) {
      ++j;
      continue;
    }
    ++removed;
    require(with_init[i]->kind == Prog::Kind::Assign &&
                with_init[i]->var == "i",
            "unexpected extra statement in the indexed variant");
  }
  require(removed == 1, "exactly one statement must be removed");
}

// ---------------------------------------------------------------------------
// 6. Stepper bisimulation: n dispatch rounds reproduce n small steps.
// ---------------------------------------------------------------------------

void check_bisimulation(const ProgPtr& q, const Valuation& env,
                        std::uint64_t rounds) {
  NameAllocator names(free_vars(q));
  StepperBundle bundle = flatten_to_stepper(OrdinaryProgram(q), names);
  std::vector<State> trace = testing::deterministic_trace(q, env, rounds);
  std::uint64_t halt_step =
      trace.back().terminated() ? trace.size() - 1 : UINT64_MAX;

  Valuation sim = env;
  sim.set(bundle.pc_var, Rational(0));
  sim.set(bundle.term_var, Rational(0));
  for (std::uint64_t j = 0; j <= rounds; ++j) {
    const State& ref = trace[std::min<std::uint64_t>(j, trace.size() - 1)];
    for (const std::string& v : free_vars(q)) {
      require(sim.get(v) == ref.env.get(v),
              "bisimulation: variable " + v + " diverges at round " +
                  str_of(j) + " for " + pretty(q));
    }
    Rational pc = sim.get(bundle.pc_var);
    require(pc.is_integer(), "pc not an integer");
    std::size_t loc = static_cast<std::size_t>(pc.numerator().get_ui());
    require(loc < bundle.locations.size(), "pc out of range");
    require(compare(bundle.locations[loc], ref.cont) == 0,
            "bisimulation: pc decodes to the wrong continuation at round " +
                str_of(j) + " for " + pretty(q));
    require(sim.get(bundle.term_var) ==
                (j >= halt_step ? Rational(1) : Rational(0)),
            "bisimulation: term flag wrong at round " + str_of(j));
    if (j < rounds) {
      sim = testing::run_to_end(bundle.step_block, std::move(sim)).first;
    }
  }
}

void criterion_stepper_bisimulation() {
  Valuation y5;
  y5.set("y", Rational(5));
  Valuation yz;
  yz.set("y", Rational(2));
  yz.set("z", Rational(3));
  check_bisimulation(testing::q_identity(), {}, 50);
  check_bisimulation(testing::q_loop_on_zero(), {}, 50);
  check_bisimulation(testing::q_loop_on_zero(), y5, 50);
  check_bisimulation(testing::q_diverge(), {}, 50);
  check_bisimulation(testing::q_two_vars(), yz, 50);
  check_bisimulation(testing::q_countdown(), y5, 50);
  check_bisimulation(
      testing::parse("if (y = 0) { z := 1 } else { z := 2 }; y := z + y"), {},
      50);
  check_bisimulation(
      testing::parse(
          "while (y > 0) { y := y - 1; while (z > 0) { z := z - 1 } }"),
      yz, 50);
  AstGen gen(86420);
  for (int trial = 0; trial < 60; ++trial) {
    check_bisimulation(gen.ordinary(), gen.valuation(), 50);
  }
}

// ---------------------------------------------------------------------------
// 7. Randomized property suites, >= 1000 cases each.
// ---------------------------------------------------------------------------

void criterion_property_suites() {
  {  // Parser round-trip.
    AstGen gen(1001);
    for (int i = 0; i < 1000; ++i) {
      ProgPtr p = gen.program();
      require(equal(parse_program_or_throw(pretty(p)), p),
              "round-trip failed:\n" + pretty(p));
    }
  }
  {  // Probability conservation at every probabilistic step.
    AstGen gen(1002);
    for (int i = 0; i < 1000; ++i) {
      ProgPtr p = gen.program();
      std::vector<State> frontier = {initial_state(p, gen.valuation())};
      for (int depth = 0; depth < 5; ++depth) {
        std::vector<State> next;
        for (const State& s : frontier) {
          StepResult r = step(s);
          if (auto* det = std::get_if<Deterministic>(&r)) {
            if (!det->next.terminated()) next.push_back(det->next);
          } else if (auto* pr = std::get_if<Probabilistic>(&r)) {
            require(pr->left.weight + pr->right.weight == s.weight,
                    "probability conservation violated");
            if (!pr->left.terminated()) next.push_back(pr->left);
            if (!pr->right.terminated()) next.push_back(pr->right);
          }
        }
        frontier = std::move(next);
      }
    }
  }
  {  // Monotone, bounded partial sums; exact mass conservation per depth.
    AstGen gen(1003);
    for (int i = 0; i < 1000; ++i) {
      ProgPtr p = gen.program();
      FrontierExplorer explorer(p, gen.valuation(), "x",
                                ExploreOptions{.frontier_cap = 2048});
      Rational prev_pr(0), prev_exp(0), prev_rt(0);
      try {
        for (int depth = 0; depth < 7; ++depth) {
          explorer.advance();
          const PartialSumRow& row = explorer.row();
          require(row.pr_within_k >= prev_pr && row.pr_within_k <= Rational(1),
                  "pr_within not monotone in [0,1]");
          require(row.exp_v_partial >= prev_exp, "exp partial not monotone");
          require(row.runtime_partial >= prev_rt, "runtime not monotone");
          require(row.pr_within_k + explorer.frontier_mass() == Rational(1),
                  "mass conservation violated");
          prev_pr = row.pr_within_k;
          prev_exp = row.exp_v_partial;
          prev_rt = row.runtime_partial;
        }
      } catch (const FrontierCapExceeded&) {
        // State-space blow-up on a random program is not a property failure.
      }
    }
  }
  {  // Finite-chain collapse: almost-sure implies positive almost-sure.
    AstGen gen(1004);
    int solved = 0;
    for (int i = 0; i < 1000; ++i) {
      auto result = decide_ast_past_finite(gen.program(), gen.valuation(), 64, {});
      if (auto* r = std::get_if<SolveResult>(&result)) {
        ++solved;
        require(r->ast == r->past, "finite-chain AST/PAST collapse violated");
      }
    }
    require(solved >= 200, "too few solvable random programs: " + str_of(solved));
  }
  {  // Sampler seed determinism.
    AstGen gen(1005);
    for (int i = 0; i < 1000; ++i) {
      ProgPtr p = gen.program();
      Valuation env = gen.valuation();
      std::uint64_t seed = static_cast<std::uint64_t>(gen.pick(0, 1 << 30));
      RunRecord a = sample_run(p, env, seed, 40);
      RunRecord b = sample_run(p, env, seed, 40);
      require(a.terminated == b.terminated && a.steps == b.steps &&
                  a.choices == b.choices && a.final_env == b.final_env,
              "sampler determinism violated");
    }
  }
}

// ---------------------------------------------------------------------------
// 8. Sampler agreement with the exact chain values, 3 standard errors.
// ---------------------------------------------------------------------------

void criterion_sampler_agreement() {
  auto started = std::chrono::steady_clock::now();
  constexpr std::uint64_t kSamples = 100'000;

  {  // coin: E(x) = 3/2 (exact), steps identically 2.
    SampleReport report = estimate(testing::coin(), {}, "x", kSamples, 1701,
                                   100, /*jobs=*/2);
    require(report.terminated == kSamples, "coin runs must all terminate");
    require(*report.mean_steps == Rational(2), "coin steps are deterministic");
    double mean = report.mean_outcome->to_double();
    require(report.outcome_stderr > 0, "stderr must be positive");
    require(std::abs(mean - 1.5) <= 3 * report.outcome_stderr,
            "coin mean " + str_of(mean) + " outside 3 SE of 3/2");
  }
  {  // geo_prime: termination probability 1, E(steps) = 10 (exact solve).
    auto solved = decide_ast_past_finite(testing::geo_prime(), {}, 1000, {});
    Rational exact_steps =
        std::get<Rational>(std::get<SolveResult>(solved).expected_steps);
    require(exact_steps == Rational(10), "geo_prime exact steps");

    // Raw runs so the step variance is available for the 3-SE window.
    Rational sum, sum_sq;
    std::uint64_t terminated = 0;
    for (std::uint64_t i = 0; i < kSamples; ++i) {
      RunRecord r = sample_run(testing::geo_prime(), {},
                               1701 + i * 0x9E3779B97F4A7C15ULL, 4000);
      if (!r.terminated) continue;
      ++terminated;
      Rational steps(static_cast<long>(r.steps));
      sum += steps;
      sum_sq += steps * steps;
    }
    require(terminated == kSamples,
            "geo_prime termination fraction must be 1 within 3 SE: a miss at"
            " cap 4000 has probability ~2^-1300");
    Rational n(static_cast<long>(kSamples));
    Rational mean = sum / n;
    double var =
        ((sum_sq - mean * mean * n) / (n - Rational(1))).to_double();
    double se = std::sqrt(var / static_cast<double>(kSamples));
    require(std::abs(mean.to_double() - 10.0) <= 3 * se,
            "geo_prime mean steps " + str_of(mean.to_double()) +
                " outside 3 SE of 10 (se=" + str_of(se) + ")");
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  require(elapsed < 60.0, "sampler agreement took " + str_of(elapsed) + "s");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void()> body;
  };
  std::vector<Criterion> criteria = {
      {1, "partial-sum engines agree on the corpus (depth 12, exact)",
       criterion_partial_sum_engines},
      {2, "lower-bound gadget dichotomy (1 vs 1/2, exact)",
       criterion_lower_bound_dichotomy},
      {3, "upper-bound gadget payout masses (2^-(i+1), exact)",
       criterion_upper_bound_masses},
      {4, "chain solver and explorer agree bit-for-bit",
       criterion_chain_explorer_crosscheck},
      {5, "runtime dichotomy of the simulation-loop gadgets",
       criterion_runtime_dichotomy},
      {6, "stepper bisimulation over 50 rounds",
       criterion_stepper_bisimulation},
      {7, "randomized property suites (1000 cases each)",
       criterion_property_suites},
      {8, "sampler agrees with exact values within 3 standard errors",
       criterion_sampler_agreement},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    auto started = std::chrono::steady_clock::now();
    std::string verdict = "PASS";
    std::string detail;
    try {
      criterion.body();
    } catch (const Failure& f) {
      verdict = "FAIL";
      detail = f.message;
      ++failures;
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = std::string("exception: ") + e.what();
      ++failures;
    }
    double elapsed = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    std::ostringstream line;
    line << "criterion " << criterion.id << ": " << criterion.name << " ... "
         << verdict << " (" << elapsed << "s)";
    std::cout << line.str() << '\n';
    if (!detail.empty()) std::cout << "    " << detail << '\n';
  }
  return failures == 0 ? 0 : 1;
}
