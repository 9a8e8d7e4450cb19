#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pgcl/semantics.hpp"

namespace pgcl {

/// One simulated run.
struct RunRecord {
  bool terminated = false;
  Valuation final_env;
  std::uint64_t steps = 0;
  std::string choices;  // the realized choice word
};

/// Executes P on env, drawing each probabilistic branch with its exact
/// probability. Deterministic for a fixed seed. Hitting step_cap is a
/// reported outcome, not an error.
RunRecord sample_run(const ProgPtr& program, const Valuation& env,
                     std::uint64_t seed, std::uint64_t step_cap);

struct SampleReport {
  std::uint64_t samples = 0;
  std::uint64_t terminated = 0;
  std::uint64_t step_capped = 0;
  std::optional<Rational> mean_outcome;  // over terminated runs
  std::optional<Rational> mean_steps;    // over terminated runs
  double outcome_stderr = 0.0;           // diagnostic only (floating point)
  std::uint64_t seed = 0;

  std::string str() const;  // key=value lines
};

/// n independent runs on streams derived from (seed, sample index); sums are
/// exact rationals, so the report is identical for any worker count.
SampleReport estimate(const ProgPtr& program, const Valuation& env,
                      const std::string& outcome_var, std::uint64_t n,
                      std::uint64_t seed, std::uint64_t step_cap,
                      unsigned jobs = 1);

}  // namespace pgcl
