#include "pgcl/explorer.hpp"

#include <sstream>
#include <thread>

namespace pgcl {

std::string csv_header() {
  return "depth,exact_k_mass,pr_within_k,exp_v_partial,runtime_partial,"
         "frontier,exhausted";
}

std::string csv_line(const PartialSumRow& row) {
  std::ostringstream os;
  os << row.depth << ',' << row.exact_k_mass << ',' << row.pr_within_k << ','
     << row.exp_v_partial << ',' << row.runtime_partial << ','
     << row.frontier_size << ',' << (row.exhausted ? "true" : "false");
  return os.str();
}

FrontierCapExceeded::FrontierCapExceeded(std::uint64_t size_, std::uint64_t cap_,
                                         std::uint64_t depth_)
    : std::runtime_error("frontier size " + std::to_string(size_) +
                         " exceeds cap " + std::to_string(cap_) + " at depth " +
                         std::to_string(depth_)),
      size(size_),
      cap(cap_),
      depth(depth_) {}

FrontierExplorer::FrontierExplorer(ProgPtr program, Valuation env,
                                   std::string outcome_var,
                                   ExploreOptions options)
    : outcome_var_(std::move(outcome_var)), options_(options) {
  frontier_.push_back(initial_state(std::move(program), std::move(env)));
  row_.depth = 0;
  row_.frontier_size = 1;
  // The initial continuation is a program, never the terminated marker, so
  // depth 0 carries no terminal mass and cannot be exhausted.
}

Rational FrontierExplorer::frontier_mass() const {
  Rational mass;
  for (const State& s : frontier_) mass += s.weight;
  return mass;
}

namespace {

struct ExpandResult {
  std::vector<State> next;
  Rational exact_mass;
  Rational outcome_mass;
  std::vector<TerminalLeaf> terminals;
};

void expand_range(const std::vector<State>& frontier, std::size_t begin,
                  std::size_t end, const std::string& outcome_var,
                  bool want_terminals, std::uint64_t next_depth,
                  ExpandResult& out) {
  auto deliver = [&](State&& s) {
    if (s.terminated()) {
      out.exact_mass += s.weight;
      out.outcome_mass += s.env.get(outcome_var) * s.weight;
      if (want_terminals) {
        out.terminals.push_back(TerminalLeaf{next_depth, std::move(s.env),
                                             std::move(s.weight),
                                             std::move(s.choices)});
      }
    } else {
      out.next.push_back(std::move(s));
    }
  };
  for (std::size_t i = begin; i < end; ++i) {
    StepResult r = step(frontier[i]);
    if (auto* d = std::get_if<Deterministic>(&r)) {
      deliver(std::move(d->next));
    } else if (auto* p = std::get_if<Probabilistic>(&r)) {
      deliver(std::move(p->left));
      deliver(std::move(p->right));
    }
    // Terminal is impossible: the frontier holds live states only.
  }
}

}  // namespace

void FrontierExplorer::advance() {
  std::uint64_t next_depth = row_.depth + 1;
  Rational prev_pr = row_.pr_within_k;

  unsigned jobs = options_.jobs;
  std::size_t n = frontier_.size();
  ExpandResult merged;
  if (jobs <= 1 || n < 512) {
    expand_range(frontier_, 0, n, outcome_var_, sink_ != nullptr, next_depth,
                 merged);
  } else {
    // Deterministic fan-out: fixed chunking, results merged in chunk order.
    // Rational addition is exact, so the sums are identical for any split.
    unsigned workers = jobs;
    std::vector<ExpandResult> parts(workers);
    std::vector<std::thread> threads;
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      std::size_t begin = std::min(n, w * chunk);
      std::size_t end = std::min(n, begin + chunk);
      threads.emplace_back([&, w, begin, end] {
        expand_range(frontier_, begin, end, outcome_var_, sink_ != nullptr,
                     next_depth, parts[w]);
      });
    }
    for (auto& t : threads) t.join();
    for (auto& part : parts) {
      merged.exact_mass += part.exact_mass;
      merged.outcome_mass += part.outcome_mass;
      std::move(part.next.begin(), part.next.end(),
                std::back_inserter(merged.next));
      std::move(part.terminals.begin(), part.terminals.end(),
                std::back_inserter(merged.terminals));
    }
  }

  if (merged.next.size() > options_.frontier_cap) {
    throw FrontierCapExceeded(merged.next.size(), options_.frontier_cap,
                              next_depth);
  }
  if (sink_ != nullptr) {
    std::move(merged.terminals.begin(), merged.terminals.end(),
              std::back_inserter(*sink_));
  }

  frontier_ = std::move(merged.next);
  row_.depth = next_depth;
  row_.exact_k_mass = merged.exact_mass;
  row_.pr_within_k = prev_pr + merged.exact_mass;
  row_.exp_v_partial += merged.outcome_mass;
  row_.runtime_partial += Rational(1) - prev_pr;
  row_.frontier_size = frontier_.size();
  row_.exhausted = frontier_.empty();
}

std::vector<PartialSumRow> explore_partial_sums(const ProgPtr& program,
                                                const Valuation& env,
                                                const std::string& outcome_var,
                                                std::uint64_t max_depth,
                                                ExploreOptions options) {
  FrontierExplorer explorer(program, env, outcome_var, options);
  std::vector<PartialSumRow> rows;
  rows.reserve(max_depth + 1);
  rows.push_back(explorer.row());
  for (std::uint64_t k = 0; k < max_depth; ++k) {
    explorer.advance();
    rows.push_back(explorer.row());
  }
  return rows;
}

std::vector<TerminalLeaf> collect_terminals(const ProgPtr& program,
                                            const Valuation& env,
                                            std::uint64_t max_depth,
                                            ExploreOptions options) {
  std::vector<TerminalLeaf> leaves;
  FrontierExplorer explorer(program, env, "", options);
  explorer.collect_terminals(&leaves);
  for (std::uint64_t k = 0; k < max_depth && !explorer.exhausted(); ++k) {
    explorer.advance();
  }
  return leaves;
}

std::vector<PartialSumRow> brute_force_def4(const ProgPtr& program,
                                            const Valuation& env,
                                            const std::string& outcome_var,
                                            std::uint64_t max_depth) {
  if (max_depth > 32) {
    throw std::invalid_argument(
        "literal enumeration visits ~2^(depth+1) words; refusing depth > 32");
  }
  State start = initial_state(program, env);
  std::vector<PartialSumRow> rows;
  rows.reserve(max_depth + 1);
  Rational pr_within;
  Rational exp_partial;
  Rational runtime_partial;
  for (std::uint64_t k = 0; k <= max_depth; ++k) {
    Rational exact_mass;
    Rational outcome_mass;
    std::uint64_t live = 0;
    std::string word;
    for (std::uint64_t len = 0; len <= k; ++len) {
      word.assign(len, 'L');
      // All 2^len words of this length, in binary-counter order.
      for (std::uint64_t bits = 0;; ++bits) {
        for (std::uint64_t b = 0; b < len; ++b) {
          word[b] = (bits >> (len - 1 - b)) & 1 ? 'R' : 'L';
        }
        BottomOrState result = successor(k, start, word);
        if (result) {
          if (result->terminated()) {
            exact_mass += alpha(result);
            outcome_mass += wp_weight(result, outcome_var);
          } else {
            ++live;
          }
        }
        if (len == 0 || bits + 1 == (std::uint64_t{1} << len)) break;
      }
    }
    if (k > 0) runtime_partial += Rational(1) - pr_within;
    pr_within += exact_mass;
    exp_partial += outcome_mass;
    rows.push_back(PartialSumRow{k, exact_mass, pr_within, exp_partial,
                                 runtime_partial, live, live == 0 && k > 0});
  }
  return rows;
}

namespace {

template <typename Reached>
CertificateOutcome certify(const ProgPtr& program, const Valuation& env,
                           const std::string& outcome_var,
                           std::uint64_t budget, ExploreOptions options,
                           Reached reached) {
  FrontierExplorer explorer(program, env, outcome_var, options);
  for (std::uint64_t y = 0;; ++y) {
    const PartialSumRow& row = explorer.row();
    if (auto witness = reached(row)) {
      return Certified{y, *witness};
    }
    // Once exhausted every partial sum is frozen; no deeper row can certify.
    if (y >= budget || explorer.exhausted()) {
      return BudgetExhausted{row};
    }
    explorer.advance();
  }
}

}  // namespace

CertificateOutcome certify_lower_expectation(const ProgPtr& program,
                                             const Valuation& env,
                                             const std::string& outcome_var,
                                             const Rational& q,
                                             std::uint64_t budget,
                                             ExploreOptions options) {
  if (q.is_negative()) {
    throw std::invalid_argument("expectation bound must be non-negative");
  }
  return certify(program, env, outcome_var, budget, options,
                 [&](const PartialSumRow& row) -> std::optional<Rational> {
                   if (row.exp_v_partial > q) return row.exp_v_partial;
                   return std::nullopt;
                 });
}

CertificateOutcome certify_lower_termination(const ProgPtr& program,
                                             const Valuation& env,
                                             const Rational& p,
                                             std::uint64_t budget,
                                             ExploreOptions options) {
  if (p.is_negative() || p >= Rational(1)) {
    throw std::invalid_argument("termination bound must lie in [0, 1)");
  }
  return certify(program, env, "", budget, options,
                 [&](const PartialSumRow& row) -> std::optional<Rational> {
                   if (row.pr_within_k > p) return row.pr_within_k;
                   return std::nullopt;
                 });
}

CertificateOutcome certify_runtime_exceeds(const ProgPtr& program,
                                           const Valuation& env,
                                           const Rational& c,
                                           std::uint64_t budget,
                                           ExploreOptions options) {
  if (c.is_negative()) {
    throw std::invalid_argument("runtime bound must be non-negative");
  }
  return certify(program, env, "", budget, options,
                 [&](const PartialSumRow& row) -> std::optional<Rational> {
                   if (row.runtime_partial > c) return row.runtime_partial;
                   return std::nullopt;
                 });
}

}  // namespace pgcl
