// Command-line entry point: parse/pretty-print programs, explore partial
// sums, certify lower bounds, solve finite-state programs exactly, emit
// reduction gadgets, and run seeded simulations.
//
// Exit codes: 0 success / certified, 1 parse or usage error,
// 2 budget exhausted, 3 state or frontier cap exceeded.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "pgcl/chain.hpp"
#include "pgcl/explorer.hpp"
#include "pgcl/parser.hpp"
#include "pgcl/pretty.hpp"
#include "pgcl/reductions.hpp"
#include "pgcl/sampler.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBudget = 2;
constexpr int kExitCap = 3;

struct UsageError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError{"cannot open " + path};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

pgcl::ProgPtr load_program(const std::string& path) {
  pgcl::ParseResult result = pgcl::parse_program(read_file(path));
  if (auto* err = std::get_if<pgcl::ParseError>(&result)) {
    throw UsageError{path + ": " + err->str()};
  }
  return std::get<pgcl::ProgPtr>(result);
}

pgcl::Valuation load_valuation(const std::string& path) {
  if (path.empty()) return {};  // default input: all variables zero
  auto result = pgcl::parse_valuation(read_file(path));
  if (auto* err = std::get_if<pgcl::ValuationParseError>(&result)) {
    throw UsageError{path + ":" + std::to_string(err->line) + ": " +
                     err->message};
  }
  return std::get<pgcl::Valuation>(result);
}

pgcl::Rational parse_bound(const std::string& text) {
  auto q = pgcl::Rational::parse(text, /*allow_negative=*/false);
  if (!q) throw UsageError{"bad rational '" + text + "'"};
  return *q;
}

int report_certificate(const pgcl::CertificateOutcome& outcome,
                       const char* what) {
  if (auto* cert = std::get_if<pgcl::Certified>(&outcome)) {
    std::cout << "certified=true\n";
    std::cout << "depth=" << cert->depth << '\n';
    std::cout << what << '=' << cert->witness_value << '\n';
    return kExitOk;
  }
  const auto& last = std::get<pgcl::BudgetExhausted>(outcome).last_row;
  std::cout << "certified=false\n";
  std::cout << "depth=" << last.depth << '\n';
  std::cout << what << '=' << '\n';
  std::cout << "last_row=" << pgcl::csv_line(last) << '\n';
  return kExitBudget;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact analysis toolkit for probabilistic (pGCL) programs"};
  app.require_subcommand(1);

  std::string program_path, valuation_path, var, out_path, dump_path;
  std::string bound_text = "0";
  std::string gadget_kind;
  std::uint64_t depth = 20, budget = 64, frontier_cap = 1'000'000;
  std::uint64_t state_cap = 100'000, samples = 1000, seed = 0, step_cap = 10'000;
  unsigned jobs = 1;
  std::vector<std::string> exact_vars;

  auto* cmd_parse = app.add_subcommand("parse", "syntax-check and pretty-print");
  cmd_parse->add_option("program", program_path)->required();

  auto* cmd_explore =
      app.add_subcommand("explore", "CSV of partial-sum rows per depth");
  cmd_explore->add_option("program", program_path)->required();
  cmd_explore->add_option("--input", valuation_path);
  cmd_explore->add_option("--var", var)->required();
  cmd_explore->add_option("--depth", depth);
  cmd_explore->add_option("--frontier-cap", frontier_cap);
  cmd_explore->add_option("--jobs", jobs);

  auto* cmd_lower = app.add_subcommand(
      "certify-lower", "certify a strict lower bound on an expected outcome");
  cmd_lower->add_option("program", program_path)->required();
  cmd_lower->add_option("--input", valuation_path);
  cmd_lower->add_option("--var", var)->required();
  cmd_lower->add_option("--bound", bound_text)->required();
  cmd_lower->add_option("--budget", budget);
  cmd_lower->add_option("--frontier-cap", frontier_cap);
  cmd_lower->add_option("--jobs", jobs);

  auto* cmd_term = app.add_subcommand(
      "certify-termination", "certify a strict lower bound on Pr(termination)");
  cmd_term->add_option("program", program_path)->required();
  cmd_term->add_option("--input", valuation_path);
  cmd_term->add_option("--bound", bound_text)->required();
  cmd_term->add_option("--budget", budget);
  cmd_term->add_option("--frontier-cap", frontier_cap);
  cmd_term->add_option("--jobs", jobs);

  auto* cmd_rt = app.add_subcommand(
      "certify-runtime-exceeds",
      "certify that the expected runtime strictly exceeds a bound");
  cmd_rt->add_option("program", program_path)->required();
  cmd_rt->add_option("--input", valuation_path);
  cmd_rt->add_option("--bound", bound_text)->required();
  cmd_rt->add_option("--budget", budget);
  cmd_rt->add_option("--frontier-cap", frontier_cap);
  cmd_rt->add_option("--jobs", jobs);

  auto* cmd_exact = app.add_subcommand(
      "exact", "finite-state solve: termination, outcomes, runtime, AST/PAST");
  cmd_exact->add_option("program", program_path)->required();
  cmd_exact->add_option("--input", valuation_path);
  cmd_exact->add_option("--var", exact_vars);
  cmd_exact->add_option("--cap", state_cap);
  cmd_exact->add_option("--dump-chain", dump_path);

  auto* cmd_reduce =
      app.add_subcommand("reduce", "emit a hardness-reduction gadget");
  cmd_reduce->add_option("program", program_path)->required();
  cmd_reduce
      ->add_option("--gadget", gadget_kind)
      ->required()
      ->check(CLI::IsMember(
          {"lexp", "rexp", "ast-exp", "uh-ast", "ast-uast", "past", "upast"}));
  cmd_reduce->add_option("--input", valuation_path);
  cmd_reduce->add_option("--out", out_path);

  auto* cmd_sample = app.add_subcommand("sample", "seeded Monte-Carlo runs");
  cmd_sample->add_option("program", program_path)->required();
  cmd_sample->add_option("--input", valuation_path);
  cmd_sample->add_option("--var", var)->required();
  cmd_sample->add_option("--n", samples);
  cmd_sample->add_option("--seed", seed)->required();
  cmd_sample->add_option("--step-cap", step_cap);
  cmd_sample->add_option("--jobs", jobs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    pgcl::ExploreOptions opts;
    opts.frontier_cap = frontier_cap;
    opts.jobs = jobs;

    if (cmd_parse->parsed()) {
      std::cout << pgcl::pretty(load_program(program_path)) << '\n';
      return kExitOk;
    }

    if (cmd_explore->parsed()) {
      auto rows = pgcl::explore_partial_sums(load_program(program_path),
                                             load_valuation(valuation_path),
                                             var, depth, opts);
      std::cout << pgcl::csv_header() << '\n';
      for (const auto& row : rows) std::cout << pgcl::csv_line(row) << '\n';
      return kExitOk;
    }

    if (cmd_lower->parsed()) {
      auto outcome = pgcl::certify_lower_expectation(
          load_program(program_path), load_valuation(valuation_path), var,
          parse_bound(bound_text), budget, opts);
      return report_certificate(outcome, "partial_sum");
    }

    if (cmd_term->parsed()) {
      auto outcome = pgcl::certify_lower_termination(
          load_program(program_path), load_valuation(valuation_path),
          parse_bound(bound_text), budget, opts);
      return report_certificate(outcome, "pr_within");
    }

    if (cmd_rt->parsed()) {
      auto outcome = pgcl::certify_runtime_exceeds(
          load_program(program_path), load_valuation(valuation_path),
          parse_bound(bound_text), budget, opts);
      return report_certificate(outcome, "runtime_partial");
    }

    if (cmd_exact->parsed()) {
      pgcl::ProgPtr program = load_program(program_path);
      pgcl::Valuation env = load_valuation(valuation_path);
      auto solved = pgcl::decide_ast_past_finite(program, env, state_cap,
                                                 exact_vars);
      if (auto* cap = std::get_if<pgcl::CapExceeded>(&solved)) {
        std::cerr << "state cap " << cap->cap
                  << " exceeded: program appears infinite-state\n";
        return kExitCap;
      }
      const auto& r = std::get<pgcl::SolveResult>(solved);
      std::cout << "states=" << r.state_count << '\n';
      std::cout << "termination_probability=" << r.termination_probability
                << '\n';
      for (const auto& [name, value] : r.expected_outcome) {
        std::cout << "expected_outcome[" << name << "]=" << value << '\n';
      }
      std::cout << "expected_steps=" << pgcl::steps_str(r.expected_steps)
                << '\n';
      std::cout << "ast=" << (r.ast ? "true" : "false") << '\n';
      std::cout << "past=" << (r.past ? "true" : "false") << '\n';
      if (!dump_path.empty()) {
        auto chain = pgcl::extract_chain(program, env, state_cap);
        std::ofstream out(dump_path);
        pgcl::dump_chain(std::get<pgcl::FiniteChain>(chain), out);
      }
      return kExitOk;
    }

    if (cmd_reduce->parsed()) {
      pgcl::ProgPtr source = load_program(program_path);
      pgcl::Valuation env = load_valuation(valuation_path);
      pgcl::GadgetOutput gadget;
      if (gadget_kind == "lexp") {
        gadget = pgcl::gadget_lexp(pgcl::OrdinaryProgram(source), env);
      } else if (gadget_kind == "rexp") {
        gadget = pgcl::gadget_rexp(pgcl::OrdinaryProgram(source));
      } else if (gadget_kind == "ast-exp") {
        gadget = pgcl::gadget_ast_to_exp(source, env);
      } else if (gadget_kind == "uh-ast") {
        gadget = pgcl::gadget_uh_to_ast(pgcl::OrdinaryProgram(source));
      } else if (gadget_kind == "ast-uast") {
        gadget = pgcl::gadget_ast_to_uast(source, env);
      } else if (gadget_kind == "past") {
        gadget = pgcl::gadget_past(pgcl::OrdinaryProgram(source));
      } else {
        gadget = pgcl::gadget_upast(pgcl::OrdinaryProgram(source));
      }
      std::string text = pgcl::pretty(gadget.program) + "\n";
      if (out_path.empty()) {
        std::cout << text;
        std::cerr << gadget.notes;
      } else {
        std::ofstream program_out(out_path);
        program_out << text;
        std::ofstream notes_out(out_path + ".notes");
        notes_out << gadget.notes;
        std::cout << "wrote " << out_path << " and " << out_path << ".notes\n";
      }
      return kExitOk;
    }

    if (cmd_sample->parsed()) {
      pgcl::SampleReport report =
          pgcl::estimate(load_program(program_path),
                         load_valuation(valuation_path), var, samples, seed,
                         step_cap, jobs);
      std::cout << report.str();
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << '\n';
    return kExitUsage;
  } catch (const pgcl::FrontierCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
