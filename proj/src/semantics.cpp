#include "pgcl/semantics.hpp"

#include <stdexcept>

#include "pgcl/pretty.hpp"

namespace pgcl {

int compare(const Continuation& a, const Continuation& b) {
  if (a.current == nullptr || b.current == nullptr) {
    if (a.current != nullptr) return 1;
    if (b.current != nullptr) return -1;
  } else if (int c = compare(a.current, b.current); c != 0) {
    return c;
  }
  if (a.pending.size() != b.pending.size()) {
    return a.pending.size() < b.pending.size() ? -1 : 1;
  }
  for (std::size_t i = 0; i < a.pending.size(); ++i) {
    if (int c = compare(a.pending[i], b.pending[i]); c != 0) return c;
  }
  return 0;
}

bool operator==(const Continuation& a, const Continuation& b) {
  return compare(a, b) == 0;
}

std::string describe(const Continuation& k) {
  if (k.terminated()) return "<done>";
  std::string out = k.current ? pretty(k.current) : "<done>";
  for (auto it = k.pending.rbegin(); it != k.pending.rend(); ++it) {
    out += "; " + pretty(*it);
  }
  return out;
}

Continuation push_program(Continuation k, const ProgPtr& p) {
  ProgPtr cursor = p;
  while (cursor->kind == Prog::Kind::Seq) {
    k.pending.push_back(cursor->second);
    cursor = cursor->first;
  }
  k.current = cursor;
  return k;
}

State initial_state(const ProgPtr& p, Valuation env) {
  State s;
  s.cont = push_program(Continuation{}, p);
  s.env = std::move(env);
  return s;
}

namespace {

State finish_current(const State& state) {
  State next = state;
  next.cont.current = nullptr;
  return next;
}

}  // namespace

StepResult step(const State& state) {
  const Continuation& k = state.cont;
  if (k.current == nullptr) {
    if (k.pending.empty()) return Terminal{};
    // Pop step: the finished left component is discarded and the next
    // pending statement becomes current.
    State next = state;
    ProgPtr up = next.cont.pending.back();
    next.cont.pending.pop_back();
    next.cont = push_program(std::move(next.cont), up);
    return Deterministic{std::move(next)};
  }

  const Prog& p = *k.current;
  switch (p.kind) {
    case Prog::Kind::Assign: {
      State next = finish_current(state);
      Rational value = eval_arith(p.expr, state.env);
      if (value.is_negative()) value = Rational(0);
      next.env.set(p.var, std::move(value));
      return Deterministic{std::move(next)};
    }
    case Prog::Kind::Skip:
      return Deterministic{finish_current(state)};
    case Prog::Kind::Choice: {
      State left = state;
      left.cont.current = nullptr;
      left.cont = push_program(std::move(left.cont), p.first);
      left.weight = state.weight * p.prob;
      left.choices += 'L';
      State right = state;
      right.cont.current = nullptr;
      right.cont = push_program(std::move(right.cont), p.second);
      right.weight = state.weight * (Rational(1) - p.prob);
      right.choices += 'R';
      return Probabilistic{std::move(left), std::move(right)};
    }
    case Prog::Kind::While: {
      if (eval_bool(p.guard, state.env)) {
        // Unroll: body; while ...
        State next = state;
        next.cont.pending.push_back(k.current);
        next.cont = push_program(std::move(next.cont), p.first);
        return Deterministic{std::move(next)};
      }
      return Deterministic{finish_current(state)};
    }
    case Prog::Kind::If: {
      const ProgPtr& branch = eval_bool(p.guard, state.env) ? p.first : p.second;
      State next = state;
      next.cont.current = nullptr;
      next.cont = push_program(std::move(next.cont), branch);
      return Deterministic{std::move(next)};
    }
    case Prog::Kind::Seq:
      throw std::logic_error("unnormalized continuation: Seq at the front");
  }
  return Terminal{};
}

BottomOrState successor(std::uint64_t k, State state, std::string_view word) {
  for (std::uint64_t i = 0; i < k; ++i) {
    StepResult r = step(state);
    if (std::holds_alternative<Terminal>(r)) return std::nullopt;
    if (auto* d = std::get_if<Deterministic>(&r)) {
      state = std::move(d->next);
      continue;
    }
    auto& pr = std::get<Probabilistic>(r);
    if (word.empty()) return std::nullopt;
    char b = word.front();
    word.remove_prefix(1);
    if (b == 'L') {
      state = std::move(pr.left);
    } else if (b == 'R') {
      state = std::move(pr.right);
    } else {
      return std::nullopt;
    }
  }
  if (!word.empty()) return std::nullopt;
  return state;
}

Rational alpha(const BottomOrState& s) {
  if (!s || !s->terminated()) return Rational(0);
  return s->weight;
}

Rational wp_weight(const BottomOrState& s, const std::string& v) {
  if (!s || !s->terminated()) return Rational(0);
  return s->env.get(v) * s->weight;
}

}  // namespace pgcl
