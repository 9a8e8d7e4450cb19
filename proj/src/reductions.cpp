#include "pgcl/reductions.hpp"

#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pgcl/pretty.hpp"

namespace pgcl {

OrdinaryProgram::OrdinaryProgram(ProgPtr program) : program_(std::move(program)) {
  if (contains_choice(program_)) {
    throw std::invalid_argument(
        "ordinary program must not contain probabilistic choice");
  }
}

NameAllocator::NameAllocator(std::set<std::string> used)
    : used_(std::move(used)) {}

std::string NameAllocator::fresh(const std::string& base) {
  std::string candidate = base;
  for (unsigned long n = 1; used_.contains(candidate); ++n) {
    candidate = base + "_" + std::to_string(n);
  }
  used_.insert(candidate);
  allocated_.push_back(candidate);
  return candidate;
}

// ---------------------------------------------------------------------------
// Stepper compilation
// ---------------------------------------------------------------------------

namespace {

struct ContLess {
  bool operator()(const Continuation& a, const Continuation& b) const {
    return compare(a, b) < 0;
  }
};

ArithPtr nat_lit(std::uint64_t n) {
  return lit(Rational(mpz_class(static_cast<unsigned long>(n))));
}

/// Symbolic one-step successors of a continuation: guard-independent nodes
/// have a single successor, guard nodes two (true branch first).
struct NodeSuccessors {
  std::vector<Continuation> next;  // size 1, or 2 for guard nodes
  BoolPtr guard;                   // set for guard nodes
  ProgPtr action;                  // the assignment performed, if any
};

NodeSuccessors symbolic_step(const Continuation& k) {
  NodeSuccessors out;
  if (k.current == nullptr) {
    // Pop to the next pending statement.
    Continuation next = k;
    ProgPtr up = next.pending.back();
    next.pending.pop_back();
    out.next.push_back(push_program(std::move(next), up));
    return out;
  }
  const Prog& p = *k.current;
  Continuation finished = k;
  finished.current = nullptr;
  switch (p.kind) {
    case Prog::Kind::Assign:
      out.action = k.current;
      out.next.push_back(std::move(finished));
      return out;
    case Prog::Kind::Skip:
      out.next.push_back(std::move(finished));
      return out;
    case Prog::Kind::While: {
      out.guard = p.guard;
      Continuation unrolled = k;
      unrolled.pending.push_back(k.current);
      out.next.push_back(push_program(std::move(unrolled), p.first));
      out.next.push_back(std::move(finished));
      return out;
    }
    case Prog::Kind::If: {
      out.guard = p.guard;
      Continuation taken = finished;
      out.next.push_back(push_program(taken, p.first));
      out.next.push_back(push_program(std::move(finished), p.second));
      return out;
    }
    case Prog::Kind::Choice:
      throw std::logic_error("choice inside ordinary program");
    case Prog::Kind::Seq:
      throw std::logic_error("unnormalized continuation");
  }
  return out;
}

}  // namespace

StepperBundle flatten_to_stepper(const OrdinaryProgram& q,
                                 NameAllocator& names) {
  StepperBundle bundle;
  bundle.pc_var = names.fresh("pc");
  bundle.term_var = names.fresh("term");

  // Enumerate the reachable continuations of Q in breadth-first discovery
  // order; they become the pc locations.
  std::map<Continuation, std::size_t, ContLess> index;
  std::vector<Continuation> nodes;
  std::deque<std::size_t> queue;
  auto intern = [&](const Continuation& k) -> std::size_t {
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    std::size_t id = nodes.size();
    nodes.push_back(k);
    index.emplace(k, id);
    if (!k.terminated()) queue.push_back(id);
    return id;
  };
  Continuation start = push_program(Continuation{}, q.get());
  intern(start);

  struct Edge {
    BoolPtr guard;
    ProgPtr action;
    std::vector<std::size_t> next;
  };
  std::vector<Edge> edges;
  while (!queue.empty()) {
    std::size_t id = queue.front();
    queue.pop_front();
    NodeSuccessors succ = symbolic_step(nodes[id]);
    Edge edge;
    edge.guard = succ.guard;
    edge.action = succ.action;
    for (const Continuation& n : succ.next) edge.next.push_back(intern(n));
    if (edges.size() <= id) edges.resize(id + 1);
    edges[id] = std::move(edge);
  }

  std::size_t terminal = SIZE_MAX;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].terminated()) terminal = i;
  }
  if (terminal == SIZE_MAX) {
    // Q can never terminate from its initial shape (e.g. while(0 = 0));
    // give term a location anyway so goto targets stay well-defined.
    terminal = nodes.size();
    nodes.push_back(Continuation{});
  }

  auto goto_stmts = [&](std::size_t target) {
    std::vector<ProgPtr> stmts;
    stmts.push_back(assign(bundle.pc_var, nat_lit(target)));
    if (target == terminal) {
      stmts.push_back(assign(bundle.term_var, lit(Rational(1))));
    }
    return stmts;
  };

  // Dispatch cascade, innermost else = skip so rounds at the terminal
  // location are no-ops.
  ProgPtr cascade = skip();
  for (std::size_t id = nodes.size(); id-- > 0;) {
    if (id == terminal) continue;
    const Edge& edge = edges[id];
    ProgPtr body;
    if (edge.guard) {
      std::vector<ProgPtr> then_stmts = goto_stmts(edge.next[0]);
      std::vector<ProgPtr> else_stmts = goto_stmts(edge.next[1]);
      body = if_stmt(edge.guard, seq_of(std::move(then_stmts)),
                     seq_of(std::move(else_stmts)));
    } else {
      std::vector<ProgPtr> stmts;
      if (edge.action) stmts.push_back(edge.action);
      for (ProgPtr& s : goto_stmts(edge.next[0])) stmts.push_back(std::move(s));
      body = seq_of(std::move(stmts));
    }
    cascade = if_stmt(cmp(CmpOp::Eq, var(bundle.pc_var), nat_lit(id)),
                      std::move(body), std::move(cascade));
  }

  bundle.step_block = cascade;
  bundle.init_reset = assign(bundle.pc_var, nat_lit(0));
  bundle.location_count = nodes.size();
  bundle.terminal_location = terminal;
  bundle.locations = std::move(nodes);
  return bundle;
}

// ---------------------------------------------------------------------------
// Input decoding
// ---------------------------------------------------------------------------

ProgPtr input_decoder_gadget(const std::vector<std::string>& targets,
                             const std::string& index_var,
                             NameAllocator& names) {
  if (targets.empty()) return skip();
  if (targets.size() == 1) {
    return assign(targets[0], var(index_var));
  }
  std::string z = names.fresh("z");
  std::string t = names.fresh("t");
  std::string w = names.fresh("w");
  std::vector<ProgPtr> stmts;
  stmts.push_back(assign(z, var(index_var)));
  for (std::size_t j = 0; j + 1 < targets.size(); ++j) {
    const std::string& x = targets[j];
    // Unpair z: find the largest w with w(w+1)/2 <= z, then split.
    stmts.push_back(assign(t, lit(0)));
    stmts.push_back(assign(w, lit(0)));
    stmts.push_back(while_loop(
        cmp(CmpOp::Le, add(add(var(t), var(w)), lit(1)), var(z)),
        seq(assign(w, add(var(w), lit(1))), assign(t, add(var(t), var(w))))));
    stmts.push_back(assign(x, var(w)));
    stmts.push_back(assign(z, sub(var(z), var(t))));
    stmts.push_back(assign(x, sub(var(x), var(z))));
  }
  stmts.push_back(assign(targets.back(), var(z)));
  return seq_of(std::move(stmts));
}

mpz_class cantor_pair(const mpz_class& a, const mpz_class& b) {
  mpz_class s = a + b;
  return s * (s + 1) / 2 + b;
}

std::pair<mpz_class, mpz_class> cantor_unpair(const mpz_class& z) {
  // w = floor((sqrt(8z + 1) - 1) / 2), exact integer square root.
  mpz_class disc = 8 * z + 1;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
  mpz_class w = (root - 1) / 2;
  mpz_class t = w * (w + 1) / 2;
  mpz_class b = z - t;
  mpz_class a = w - b;
  return {a, b};
}

Valuation decode_input_meta(const std::vector<std::string>& targets,
                            mpz_class index) {
  Valuation env;
  if (targets.empty()) return env;
  for (std::size_t j = 0; j + 1 < targets.size(); ++j) {
    auto [a, rest] = cantor_unpair(index);
    env.set(targets[j], Rational(a));
    index = rest;
  }
  env.set(targets.back(), Rational(index));
  return env;
}

mpz_class encode_input_meta(const std::vector<std::string>& targets,
                            const Valuation& env) {
  auto nat_of = [&](const std::string& name) {
    Rational q = env.get(name);
    if (!q.is_integer() || q.is_negative()) {
      throw std::invalid_argument("non-natural input value for " + name);
    }
    return q.numerator();
  };
  if (targets.empty()) return 0;
  mpz_class acc = nat_of(targets.back());
  for (std::size_t j = targets.size() - 1; j-- > 0;) {
    acc = cantor_pair(nat_of(targets[j]), acc);
  }
  return acc;
}

std::vector<std::string> input_variable_order(const ProgPtr& q) {
  std::set<std::string> vars = free_vars(q);
  return {vars.begin(), vars.end()};
}

// ---------------------------------------------------------------------------
// Cheer block
// ---------------------------------------------------------------------------

ProgPtr cheer_block(const std::string& x_var, NameAllocator& names) {
  std::string t = names.fresh("t");
  std::string j = names.fresh("j");
  std::string u = names.fresh("u");
  std::vector<ProgPtr> stmts;
  stmts.push_back(assign(t, lit(1)));
  stmts.push_back(assign(j, var(x_var)));
  stmts.push_back(while_loop(cmp(CmpOp::Gt, var(j), lit(0)),
                             seq(assign(t, add(var(t), var(t))),
                                 assign(j, sub(var(j), lit(1))))));
  // The countdown body is padded with no-op writes so each of the 2^x rounds
  // burns a handful of steps; u stays 0 throughout.
  stmts.push_back(while_loop(
      cmp(CmpOp::Gt, var(t), lit(0)),
      seq_of({assign(t, sub(var(t), lit(1))), assign(u, lit(0)),
              assign(u, lit(0))})));
  return seq_of(std::move(stmts));
}

// ---------------------------------------------------------------------------
// Gadgets
// ---------------------------------------------------------------------------

namespace {

/// counter := 0; {coin := 0} [1/2] {coin := 1};
/// while (coin != 0) { counter := counter + 1; {coin := 0} [1/2] {coin := 1} }
/// Establishes Pr(counter = n) = 1/2^(n+1).
void emit_geometric(std::vector<ProgPtr>& stmts, const std::string& counter,
                    const std::string& coin) {
  auto toss = [&] {
    return choice(assign(coin, lit(0)), Rational(1, 2), assign(coin, lit(1)));
  };
  stmts.push_back(assign(counter, lit(0)));
  stmts.push_back(toss());
  stmts.push_back(while_loop(
      cmp(CmpOp::Ne, var(coin), lit(0)),
      seq(assign(counter, add(var(counter), lit(1))), toss())));
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ' ';
    out += n;
  }
  return out;
}

std::string render_notes(const std::string& gadget_name,
                         const std::string& reduction,
                         const GadgetQuery& query,
                         const std::vector<std::string>& reserved,
                         const std::vector<std::string>& input_order,
                         const std::string& extra = "") {
  std::ostringstream os;
  os << "gadget: " << gadget_name << '\n';
  os << "reduction: " << reduction << '\n';
  switch (query.kind) {
    case GadgetQuery::Kind::ExpectationBound:
      os << "query: expected outcome of " << query.variable
         << " against bound " << query.bound << '\n';
      break;
    case GadgetQuery::Kind::Termination:
      os << "query: terminates with probability one?\n";
      break;
    case GadgetQuery::Kind::PositiveTermination:
      os << "query: expected steps until termination finite?\n";
      break;
  }
  if (!input_order.empty()) {
    os << "input_order: " << join_names(input_order) << '\n';
  }
  if (!reserved.empty()) {
    os << "reserved: " << join_names(reserved) << '\n';
  }
  if (!extra.empty()) os << extra;
  return os.str();
}

void check_fresh(const GadgetOutput& out, const ProgPtr& q) {
  // Reserved names must never collide with the embedded program's variables.
  std::set<std::string> source = free_vars(q);
  for (const std::string& r : out.reserved) {
    if (source.contains(r)) {
      throw std::logic_error("reserved name captures source variable " + r);
    }
  }
}

}  // namespace

GadgetOutput gadget_lexp(const OrdinaryProgram& q, const Valuation& env) {
  NameAllocator names(free_vars(q.get()));
  std::string v = names.fresh("v");

  std::vector<ProgPtr> right;
  for (const std::string& name : input_variable_order(q.get())) {
    right.push_back(assign(name, lit(env.get(name))));
  }
  right.push_back(q.get());
  right.push_back(assign(v, lit(1)));

  std::vector<ProgPtr> stmts;
  stmts.push_back(assign(v, lit(0)));
  stmts.push_back(
      choice(assign(v, lit(1)), Rational(1, 2), seq_of(std::move(right))));

  GadgetOutput out;
  out.program = seq_of(std::move(stmts));
  out.query = GadgetQuery{GadgetQuery::Kind::ExpectationBound, v,
                          Rational(1, 2)};
  out.reserved = names.allocated();
  out.notes = render_notes(
      "lexp", "halting on a fixed input -> expectation lower bound", out.query,
      out.reserved, {}, "input: " + env.str() + " (inlined)\n");
  check_fresh(out, q.get());
  return out;
}

GadgetOutput gadget_rexp(const OrdinaryProgram& q) {
  NameAllocator names(free_vars(q.get()));
  std::string i = names.fresh("i");
  std::string k = names.fresh("k");
  std::string c = names.fresh("c");
  std::string v = names.fresh("v");
  std::string r = names.fresh("r");
  std::string early = names.fresh("early");
  std::string dbl = names.fresh("j");
  StepperBundle stepper = flatten_to_stepper(q, names);
  std::vector<std::string> inputs = input_variable_order(q.get());
  ProgPtr decoder = input_decoder_gadget(inputs, i, names);

  std::vector<ProgPtr> stmts;
  emit_geometric(stmts, i, c);
  emit_geometric(stmts, k, c);
  stmts.push_back(assign(v, lit(0)));
  // Bounded simulation: run exactly k stepper rounds on the decoded input.
  stmts.push_back(decoder);
  stmts.push_back(stepper.init_reset);
  stmts.push_back(assign(stepper.term_var, lit(0)));
  stmts.push_back(assign(r, lit(0)));
  stmts.push_back(assign(early, lit(0)));
  stmts.push_back(while_loop(
      cmp(CmpOp::Lt, var(r), var(k)),
      seq_of({stepper.step_block, assign(r, add(var(r), lit(1))),
              if_then(cmp(CmpOp::Eq, var(stepper.term_var), lit(1)),
                      if_then(cmp(CmpOp::Lt, var(r), var(k)),
                              assign(early, lit(1))))})));
  // Pay out 2^(k+1) only when the simulated run finished at round k exactly:
  // terminated by round k but not strictly before it.
  stmts.push_back(if_then(
      cmp(CmpOp::Eq, var(stepper.term_var), lit(1)),
      if_then(cmp(CmpOp::Eq, var(early), lit(0)),
              seq_of({assign(v, lit(2)), assign(dbl, var(k)),
                      while_loop(cmp(CmpOp::Gt, var(dbl), lit(0)),
                                 seq(assign(v, add(var(v), var(v))),
                                     assign(dbl, sub(var(dbl), lit(1)))))}))));

  GadgetOutput out;
  out.program = seq_of(std::move(stmts));
  out.query = GadgetQuery{GadgetQuery::Kind::ExpectationBound, v, Rational(1)};
  out.reserved = names.allocated();
  out.notes = render_notes(
      "rexp", "universal-halting complement -> expectation upper bound",
      out.query, out.reserved, inputs);
  check_fresh(out, q.get());
  return out;
}

GadgetOutput gadget_ast_to_exp(const ProgPtr& q, const Valuation& env) {
  NameAllocator names(free_vars(q));
  std::string v = names.fresh("v");
  GadgetOutput out;
  out.program = seq_of({assign(v, lit(0)), q, assign(v, lit(1))});
  out.query = GadgetQuery{GadgetQuery::Kind::ExpectationBound, v, Rational(1)};
  out.reserved = names.allocated();
  out.notes = render_notes(
      "ast-exp", "almost-sure termination -> exact expectation", out.query,
      out.reserved, {}, "input: evaluate on " + env.str() + "\n");
  check_fresh(out, q);
  return out;
}

GadgetOutput gadget_uh_to_ast(const OrdinaryProgram& q) {
  NameAllocator names(free_vars(q.get()));
  std::string i = names.fresh("i");
  std::string c = names.fresh("c");
  StepperBundle stepper = flatten_to_stepper(q, names);
  std::vector<std::string> inputs = input_variable_order(q.get());
  ProgPtr decoder = input_decoder_gadget(inputs, i, names);

  std::vector<ProgPtr> stmts;
  emit_geometric(stmts, i, c);
  stmts.push_back(decoder);
  stmts.push_back(stepper.init_reset);
  stmts.push_back(assign(stepper.term_var, lit(0)));
  stmts.push_back(while_loop(cmp(CmpOp::Eq, var(stepper.term_var), lit(0)),
                             stepper.step_block));

  GadgetOutput out;
  out.program = seq_of(std::move(stmts));
  out.query = GadgetQuery{GadgetQuery::Kind::Termination, "", Rational(0)};
  out.reserved = names.allocated();
  out.notes = render_notes(
      "uh-ast", "universal halting -> almost-sure termination", out.query,
      out.reserved, inputs);
  check_fresh(out, q.get());
  return out;
}

GadgetOutput gadget_ast_to_uast(const ProgPtr& q, const Valuation& env) {
  std::set<std::string> pinned = free_vars(q);
  for (const auto& [name, value] : env) pinned.insert(name);

  std::vector<ProgPtr> stmts;
  for (const std::string& name : pinned) {
    stmts.push_back(assign(name, lit(env.get(name))));
  }
  stmts.push_back(q);

  GadgetOutput out;
  out.program = seq_of(std::move(stmts));
  out.query = GadgetQuery{GadgetQuery::Kind::Termination, "", Rational(0)};
  out.notes = render_notes(
      "ast-uast", "fixed-input termination -> universal termination",
      out.query, {}, {}, "input: " + env.str() + " (inlined)\n");
  return out;
}

namespace {

GadgetOutput build_simulation_loop_gadget(const OrdinaryProgram& q,
                                          bool initialize_index,
                                          const std::string& gadget_name,
                                          const std::string& reduction) {
  NameAllocator names(free_vars(q.get()));
  std::string c = names.fresh("c");
  std::string i = names.fresh("i");
  std::string x = names.fresh("x");
  StepperBundle stepper = flatten_to_stepper(q, names);
  std::vector<std::string> inputs = input_variable_order(q.get());
  ProgPtr decoder = input_decoder_gadget(inputs, i, names);
  ProgPtr cheer = cheer_block(x, names);
  ProgPtr init_q = seq(decoder, stepper.init_reset);

  std::vector<ProgPtr> stmts;
  stmts.push_back(assign(c, lit(1)));
  if (initialize_index) stmts.push_back(assign(i, lit(0)));
  stmts.push_back(assign(x, lit(0)));
  stmts.push_back(assign(stepper.term_var, lit(0)));
  stmts.push_back(init_q);
  stmts.push_back(while_loop(
      cmp(CmpOp::Ne, var(c), lit(0)),
      seq_of({stepper.step_block,
              if_then(cmp(CmpOp::Eq, var(stepper.term_var), lit(1)),
                      seq_of({cheer, assign(i, add(var(i), lit(1))),
                              assign(stepper.term_var, lit(0)), init_q})),
              choice(assign(c, lit(0)), Rational(1, 2), assign(c, lit(1))),
              assign(x, add(var(x), lit(1)))})));

  GadgetOutput out;
  out.program = seq_of(std::move(stmts));
  out.query = GadgetQuery{GadgetQuery::Kind::PositiveTermination, "",
                          Rational(0)};
  out.reserved = names.allocated();
  out.notes =
      render_notes(gadget_name, reduction, out.query, out.reserved, inputs);
  check_fresh(out, q.get());
  return out;
}

}  // namespace

GadgetOutput gadget_past(const OrdinaryProgram& q) {
  return build_simulation_loop_gadget(
      q, /*initialize_index=*/true, "past",
      "universal-halting complement -> positive almost-sure termination");
}

GadgetOutput gadget_upast(const OrdinaryProgram& q) {
  return build_simulation_loop_gadget(
      q, /*initialize_index=*/false, "upast",
      "non-cofinite halting set -> universal positive termination");
}

}  // namespace pgcl
