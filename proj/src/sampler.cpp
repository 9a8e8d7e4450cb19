#include "pgcl/sampler.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace pgcl {

namespace {

/// SplitMix64 (Steele, Lea & Flood's splittable generator finalizer): a
/// fixed, platform-independent 64-bit stream. Per-sample streams are derived
/// by seeding with seed + sample_index * golden-ratio increment.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return seed + index * 0x9E3779B97F4A7C15ULL;
}

/// Bernoulli(p) by exact comparison of a uniform 64-bit dyadic against p:
/// picks the left branch iff draw / 2^64 < p. The bias is below 2^-64.
bool bernoulli(SplitMix64& rng, const Rational& p) {
  mpz_class draw(static_cast<unsigned long>(rng.next()));
  Rational dyadic = Rational(draw) / Rational::pow2(64);
  return dyadic < p;
}

}  // namespace

RunRecord sample_run(const ProgPtr& program, const Valuation& env,
                     std::uint64_t seed, std::uint64_t step_cap) {
  if (step_cap < 1) throw std::invalid_argument("step cap must be >= 1");
  SplitMix64 rng(seed);
  State state = initial_state(program, env);
  RunRecord record;
  for (std::uint64_t i = 0; i < step_cap; ++i) {
    StepResult r = step(state);
    if (std::holds_alternative<Terminal>(r)) break;
    if (auto* d = std::get_if<Deterministic>(&r)) {
      state = std::move(d->next);
    } else {
      auto& pr = std::get<Probabilistic>(r);
      // A probabilistic step always comes from a Choice at the front.
      Rational p = state.cont.current->prob;
      state = bernoulli(rng, p) ? std::move(pr.left) : std::move(pr.right);
    }
    record.steps += 1;
    if (state.terminated()) {
      record.terminated = true;
      break;
    }
  }
  record.final_env = std::move(state.env);
  record.choices = std::move(state.choices);
  return record;
}

std::string SampleReport::str() const {
  std::ostringstream os;
  os << "samples=" << samples << '\n';
  os << "terminated=" << terminated << '\n';
  os << "step_capped=" << step_capped << '\n';
  os << "mean_outcome=" << (mean_outcome ? mean_outcome->str() : "n/a") << '\n';
  os << "mean_steps=" << (mean_steps ? mean_steps->str() : "n/a") << '\n';
  os << "outcome_stderr=" << outcome_stderr << '\n';
  os << "seed=" << seed << '\n';
  return os.str();
}

namespace {

struct Partial {
  std::uint64_t terminated = 0;
  Rational outcome_sum;
  Rational outcome_sq_sum;
  Rational steps_sum;
};

void run_range(const ProgPtr& program, const Valuation& env,
               const std::string& outcome_var, std::uint64_t seed,
               std::uint64_t step_cap, std::uint64_t begin, std::uint64_t end,
               Partial& out) {
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    RunRecord record =
        sample_run(program, env, stream_seed(seed, idx), step_cap);
    if (record.terminated) {
      out.terminated += 1;
      Rational outcome = record.final_env.get(outcome_var);
      out.outcome_sum += outcome;
      out.outcome_sq_sum += outcome * outcome;
      out.steps_sum += Rational(mpz_class(record.steps));
    }
  }
}

}  // namespace

SampleReport estimate(const ProgPtr& program, const Valuation& env,
                      const std::string& outcome_var, std::uint64_t n,
                      std::uint64_t seed, std::uint64_t step_cap,
                      unsigned jobs) {
  if (n < 1) throw std::invalid_argument("need at least one sample");

  Partial total;
  if (jobs <= 1 || n < 1024) {
    run_range(program, env, outcome_var, seed, step_cap, 0, n, total);
  } else {
    std::vector<Partial> parts(jobs);
    std::vector<std::thread> threads;
    std::uint64_t chunk = (n + jobs - 1) / jobs;
    for (unsigned w = 0; w < jobs; ++w) {
      std::uint64_t begin = std::min<std::uint64_t>(n, w * chunk);
      std::uint64_t end = std::min<std::uint64_t>(n, begin + chunk);
      threads.emplace_back([&, w, begin, end] {
        run_range(program, env, outcome_var, seed, step_cap, begin, end,
                  parts[w]);
      });
    }
    for (auto& t : threads) t.join();
    // Exact rational sums: the merge order cannot change the result.
    for (const Partial& p : parts) {
      total.terminated += p.terminated;
      total.outcome_sum += p.outcome_sum;
      total.outcome_sq_sum += p.outcome_sq_sum;
      total.steps_sum += p.steps_sum;
    }
  }

  SampleReport report;
  report.samples = n;
  report.terminated = total.terminated;
  report.step_capped = n - total.terminated;
  report.seed = seed;
  if (total.terminated > 0) {
    Rational count(mpz_class(total.terminated));
    report.mean_outcome = total.outcome_sum / count;
    report.mean_steps = total.steps_sum / count;
    if (total.terminated > 1) {
      Rational var = (total.outcome_sq_sum -
                      *report.mean_outcome * *report.mean_outcome * count) /
                     Rational(mpz_class(total.terminated - 1));
      double v = var.to_double();
      report.outcome_stderr =
          v <= 0 ? 0.0
                 : std::sqrt(v / static_cast<double>(total.terminated));
    }
  }
  return report;
}

}  // namespace pgcl
