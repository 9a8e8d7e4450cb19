#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pgcl/semantics.hpp"

namespace pgcl {

/// One depth of the computation-tree unfolding.
///   exact_k_mass    probability of terminating in exactly k steps
///   pr_within_k     probability of terminating within k steps (cumulative)
///   exp_v_partial   partial sum of the expected outcome of the queried
///                   variable, through depth k
///   runtime_partial sum over j < k of (1 - pr_within_j); converges to the
///                   expected number of steps until termination
struct PartialSumRow {
  std::uint64_t depth = 0;
  Rational exact_k_mass;
  Rational pr_within_k;
  Rational exp_v_partial;
  Rational runtime_partial;
  std::uint64_t frontier_size = 0;
  bool exhausted = false;
};

/// CSV line in the stable column order
/// depth,exact_k_mass,pr_within_k,exp_v_partial,runtime_partial,frontier,exhausted
std::string csv_header();
std::string csv_line(const PartialSumRow& row);

struct ExploreOptions {
  std::uint64_t frontier_cap = 1'000'000;
  unsigned jobs = 1;
};

class FrontierCapExceeded : public std::runtime_error {
 public:
  FrontierCapExceeded(std::uint64_t size, std::uint64_t cap,
                      std::uint64_t depth);
  std::uint64_t size, cap, depth;
};

/// A terminated leaf of the computation tree.
struct TerminalLeaf {
  std::uint64_t depth = 0;
  Valuation env;
  Rational weight;
  std::string choices;
};

/// Breadth-first unfolding of the computation tree. Terminal successors are
/// folded into the partial sums at the depth they appear; the frontier holds
/// the live states. Expansion conserves probability mass exactly:
/// pr_within_k + frontier mass == 1 at every depth.
class FrontierExplorer {
 public:
  FrontierExplorer(ProgPtr program, Valuation env, std::string outcome_var,
                   ExploreOptions options = {});

  const PartialSumRow& row() const { return row_; }
  const std::vector<State>& frontier() const { return frontier_; }
  Rational frontier_mass() const;
  bool exhausted() const { return row_.exhausted; }

  /// Advances the unfolding by one depth.
  void advance();

  /// When enabled, terminated leaves are appended to the sink as they are
  /// discovered.
  void collect_terminals(std::vector<TerminalLeaf>* sink) { sink_ = sink; }

 private:
  std::string outcome_var_;
  ExploreOptions options_;
  std::vector<State> frontier_;
  PartialSumRow row_;
  std::vector<TerminalLeaf>* sink_ = nullptr;
};

/// Rows for depths 0..max_depth via frontier propagation.
std::vector<PartialSumRow> explore_partial_sums(const ProgPtr& program,
                                                const Valuation& env,
                                                const std::string& outcome_var,
                                                std::uint64_t max_depth,
                                                ExploreOptions options = {});

/// The same rows computed the expensive way: for every depth k and every
/// choice word w of length at most k, run the k-step successor function and
/// sum its weights. Cost grows as sum over k of 2^(k+1); intended for small
/// depths as the independent test oracle for explore_partial_sums.
std::vector<PartialSumRow> brute_force_def4(const ProgPtr& program,
                                            const Valuation& env,
                                            const std::string& outcome_var,
                                            std::uint64_t max_depth);

/// All terminated leaves discovered up to max_depth.
std::vector<TerminalLeaf> collect_terminals(const ProgPtr& program,
                                            const Valuation& env,
                                            std::uint64_t max_depth,
                                            ExploreOptions options = {});

struct Certified {
  std::uint64_t depth = 0;
  Rational witness_value;
};
struct BudgetExhausted {
  PartialSumRow last_row;
};
using CertificateOutcome = std::variant<Certified, BudgetExhausted>;

/// Semi-decides q < E(v): certifies as soon as some partial sum at depth
/// y <= budget strictly exceeds q. Sound by monotonicity; complete for true
/// strict lower bounds given enough budget. Requires q >= 0.
CertificateOutcome certify_lower_expectation(const ProgPtr& program,
                                             const Valuation& env,
                                             const std::string& outcome_var,
                                             const Rational& q,
                                             std::uint64_t budget,
                                             ExploreOptions options = {});

/// Semi-decides p < Pr(termination) for p in [0, 1).
CertificateOutcome certify_lower_termination(const ProgPtr& program,
                                             const Valuation& env,
                                             const Rational& p,
                                             std::uint64_t budget,
                                             ExploreOptions options = {});

/// Semi-decides c < E(steps until termination) via the monotone runtime
/// partial sums; used to refute candidate expected-runtime bounds. c >= 0.
CertificateOutcome certify_runtime_exceeds(const ProgPtr& program,
                                           const Valuation& env,
                                           const Rational& c,
                                           std::uint64_t budget,
                                           ExploreOptions options = {});

}  // namespace pgcl
