#include "pgcl/chain.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <ostream>
#include <stdexcept>

namespace pgcl {

namespace {

struct QuotientKey {
  Continuation cont;
  Valuation env;

  friend bool operator<(const QuotientKey& a, const QuotientKey& b) {
    if (int c = compare(a.cont, b.cont); c != 0) return c < 0;
    return compare(a.env, b.env) < 0;
  }
};

}  // namespace

std::variant<FiniteChain, CapExceeded> extract_chain(const ProgPtr& program,
                                                     const Valuation& env,
                                                     std::uint64_t state_cap) {
  if (state_cap < 1) throw std::invalid_argument("state cap must be >= 1");

  FiniteChain chain;
  std::map<QuotientKey, std::size_t> index;
  std::deque<std::size_t> queue;

  auto intern = [&](const Continuation& cont,
                    const Valuation& valuation) -> std::size_t {
    QuotientKey key{cont, valuation};
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    std::size_t id = chain.states.size();
    chain.states.push_back(FiniteChain::StateInfo{cont, valuation});
    chain.rows.emplace_back();
    chain.terminal.push_back(cont.terminated());
    index.emplace(std::move(key), id);
    if (!cont.terminated()) queue.push_back(id);
    return id;
  };

  State start = initial_state(program, env);
  chain.start = intern(start.cont, start.env);

  while (!queue.empty()) {
    if (chain.states.size() > state_cap) return CapExceeded{state_cap};
    std::size_t id = queue.front();
    queue.pop_front();

    State probe;
    probe.cont = chain.states[id].cont;
    probe.env = chain.states[id].env;
    StepResult r = step(probe);

    // Collected locally: intern() may grow chain.rows and invalidate
    // references into it.
    std::vector<FiniteChain::Transition> row;
    auto add_edge = [&](const State& s, Rational prob) {
      if (prob.is_zero()) return;  // unreachable branch of a degenerate coin
      std::size_t target = intern(s.cont, s.env);
      for (auto& t : row) {
        if (t.target == target) {
          t.prob += prob;
          return;
        }
      }
      row.push_back(FiniteChain::Transition{target, std::move(prob)});
    };

    if (auto* d = std::get_if<Deterministic>(&r)) {
      add_edge(d->next, Rational(1));
    } else if (auto* p = std::get_if<Probabilistic>(&r)) {
      // The probe ran with weight 1, so the branch weights are the branch
      // probabilities themselves. Equal targets merge into one edge.
      add_edge(p->left, p->left.weight);
      add_edge(p->right, p->right.weight);
    } else {
      assert(false && "live state stepped to Terminal");
    }
    chain.rows[id] = std::move(row);
  }
  if (chain.states.size() > state_cap) return CapExceeded{state_cap};
  return chain;
}

namespace {

/// Solves A * X = B exactly by Gaussian elimination over the rationals,
/// multiple right-hand sides at once. Pivot choice: the first row (smallest
/// index) with a nonzero entry in the pivot column. The arithmetic is exact,
/// so no magnitude-based pivoting is needed and results are deterministic.
/// Verifies the solution by substitution before returning.
std::vector<std::vector<Rational>> solve_exact(
    std::vector<std::vector<Rational>> a,
    std::vector<std::vector<Rational>> b) {
  std::size_t n = a.size();
  std::size_t m = b.empty() ? 0 : b[0].size();
  std::vector<std::vector<Rational>> a_orig = a;
  std::vector<std::vector<Rational>> b_orig = b;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero()) ++pivot;
    if (pivot == n) {
      throw std::logic_error("singular absorption system");
    }
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    Rational inv = Rational(1) / a[col][col];
    for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
    for (std::size_t j = 0; j < m; ++j) b[col][j] *= inv;
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col].is_zero()) continue;
      Rational factor = a[row][col];
      for (std::size_t j = col; j < n; ++j) a[row][j] -= factor * a[col][j];
      for (std::size_t j = 0; j < m; ++j) b[row][j] -= factor * b[col][j];
    }
  }

  // Solution self-check: substituting back must reproduce the right-hand
  // side with exact equality.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Rational acc;
      for (std::size_t k = 0; k < n; ++k) acc += a_orig[i][k] * b[k][j];
      if (acc != b_orig[i][j]) {
        throw std::logic_error("solver self-check failed");
      }
    }
  }
  return b;
}

/// States from which some terminal state is reachable (reverse BFS).
std::vector<bool> can_reach_terminal(const FiniteChain& chain) {
  std::size_t n = chain.size();
  std::vector<std::vector<std::size_t>> reverse(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto& t : chain.rows[s]) reverse[t.target].push_back(s);
  }
  std::vector<bool> reach(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s) {
    if (chain.terminal[s]) {
      reach[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    for (std::size_t p : reverse[s]) {
      if (!reach[p]) {
        reach[p] = true;
        queue.push_back(p);
      }
    }
  }
  return reach;
}

/// Shared core: solves x_s = sum_t P(s,t) x_t + base contribution for the
/// transient states that can reach absorption, taking x = 0 elsewhere. With
/// the non-absorbing part removed the system is nonsingular, and the computed
/// vector is the least solution of the full system.
std::vector<Rational> least_absorption_solution(
    const FiniteChain& chain,
    const std::vector<Rational>& terminal_value) {
  std::size_t n = chain.size();
  std::vector<bool> reach = can_reach_terminal(chain);

  std::vector<std::size_t> sys_index(n, SIZE_MAX);
  std::vector<std::size_t> sys_states;
  for (std::size_t s = 0; s < n; ++s) {
    if (reach[s] && !chain.terminal[s]) {
      sys_index[s] = sys_states.size();
      sys_states.push_back(s);
    }
  }

  std::size_t dim = sys_states.size();
  std::vector<std::vector<Rational>> a(dim, std::vector<Rational>(dim));
  std::vector<std::vector<Rational>> b(dim, std::vector<Rational>(1));
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t s = sys_states[i];
    a[i][i] = Rational(1);
    for (const auto& t : chain.rows[s]) {
      if (chain.terminal[t.target]) {
        b[i][0] += t.prob * terminal_value[t.target];
      } else if (std::size_t j = sys_index[t.target]; j != SIZE_MAX) {
        a[i][j] -= t.prob;
      }
      // Targets that cannot reach absorption contribute value 0.
    }
  }

  std::vector<std::vector<Rational>> x =
      dim == 0 ? std::vector<std::vector<Rational>>{} : solve_exact(a, b);

  std::vector<Rational> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (chain.terminal[s]) {
      out[s] = terminal_value[s];
    } else if (sys_index[s] != SIZE_MAX) {
      out[s] = x[sys_index[s]][0];
    }
  }
  return out;
}

}  // namespace

std::vector<Rational> absorption_probabilities(const FiniteChain& chain) {
  std::vector<Rational> ones(chain.size());
  for (std::size_t s = 0; s < chain.size(); ++s) {
    if (chain.terminal[s]) ones[s] = Rational(1);
  }
  return least_absorption_solution(chain, ones);
}

Rational expected_outcome_exact(const FiniteChain& chain,
                                const std::string& v) {
  std::vector<Rational> values(chain.size());
  for (std::size_t s = 0; s < chain.size(); ++s) {
    if (chain.terminal[s]) values[s] = chain.states[s].env.get(v);
  }
  return least_absorption_solution(chain, values)[chain.start];
}

std::string steps_str(const StepsResult& r) {
  if (std::holds_alternative<Infinite>(r)) return "INFINITE";
  return std::get<Rational>(r).str();
}

StepsResult expected_steps_exact(const FiniteChain& chain) {
  std::vector<Rational> absorb = absorption_probabilities(chain);
  for (const Rational& p : absorb) {
    // Every chain state is reachable from the start with positive
    // probability, so any deficient state forces infinite expected time.
    if (p != Rational(1)) return Infinite{};
  }

  std::size_t n = chain.size();
  std::vector<std::size_t> sys_index(n, SIZE_MAX);
  std::vector<std::size_t> sys_states;
  for (std::size_t s = 0; s < n; ++s) {
    if (!chain.terminal[s]) {
      sys_index[s] = sys_states.size();
      sys_states.push_back(s);
    }
  }
  std::size_t dim = sys_states.size();
  if (dim == 0) return Rational(0);

  // t_s = 1 + sum_t P(s,t) t_t over transient states.
  std::vector<std::vector<Rational>> a(dim, std::vector<Rational>(dim));
  std::vector<std::vector<Rational>> b(dim, std::vector<Rational>(1));
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t s = sys_states[i];
    a[i][i] = Rational(1);
    b[i][0] = Rational(1);
    for (const auto& t : chain.rows[s]) {
      if (!chain.terminal[t.target]) {
        a[i][sys_index[t.target]] -= t.prob;
      }
    }
  }
  std::vector<std::vector<Rational>> x = solve_exact(a, b);
  if (chain.terminal[chain.start]) return Rational(0);
  return x[sys_index[chain.start]][0];
}

std::variant<SolveResult, CapExceeded> decide_ast_past_finite(
    const ProgPtr& program, const Valuation& env, std::uint64_t state_cap,
    const std::vector<std::string>& outcome_vars) {
  auto extracted = extract_chain(program, env, state_cap);
  if (auto* cap = std::get_if<CapExceeded>(&extracted)) return *cap;
  const FiniteChain& chain = std::get<FiniteChain>(extracted);

  SolveResult result;
  result.state_count = chain.size();
  result.termination_probability = absorption_probabilities(chain)[chain.start];
  for (const std::string& v : outcome_vars) {
    result.expected_outcome[v] = expected_outcome_exact(chain, v);
  }
  result.expected_steps = expected_steps_exact(chain);
  result.ast = result.termination_probability == Rational(1);
  result.past = std::holds_alternative<Rational>(result.expected_steps);
  return result;
}

void dump_chain(const FiniteChain& chain, std::ostream& os) {
  for (std::size_t s = 0; s < chain.size(); ++s) {
    for (const auto& t : chain.rows[s]) {
      os << s << ' ' << t.target << ' ' << t.prob << '\n';
    }
  }
}

}  // namespace pgcl
