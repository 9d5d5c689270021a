#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cteg/commitment.hpp"
#include "cteg/errors.hpp"
#include "cteg/oracle.hpp"
#include "cteg/sequence.hpp"
#include "cteg/trace_format.hpp"

namespace cteg::cli {

namespace {

// Reads and validates a trace file. Returns the exit code to use on failure.
std::optional<int> load_checked(const std::string& path, std::optional<Cteg>& out_trace,
                                std::ostream& out, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot read " << path << '\n';
    return kParseError;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  ParsedTrace parsed;
  try {
    parsed = parse_trace(buf.str());
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  }
  if (!parsed.root) {
    out << "invalid\n" << "missing-root: trace has no parentless node\n";
    return kInvalid;
  }
  Diagnostics diag = validate_cteg(parsed.graph, *parsed.root);
  if (!diag.ok()) {
    out << "invalid\n" << diag.to_string();
    return kInvalid;
  }
  out_trace = Cteg::make(std::move(parsed.graph), *parsed.root);
  return std::nullopt;
}

bool admits_height_two_graft(const UniverseBounds& b) {
  return b.actions.size() >= 3 && b.timestamps.size() >= 3 && b.max_len >= 2;
}

bool is_subset(const SequenceSet& a, const SequenceSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

int cmd_simulate(const SimulationConfig& config, const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
  SimulationResult result = simulate(config);
  const std::string text = export_trace(result.trace, result.session);
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    file << text;
    if (!file) {
      err << "error: cannot write " << out_path << '\n';
      return kParseError;
    }
  }
  std::ostream& summary = out_path.empty() ? err : out;
  summary << "nodes=" << result.trace.size() << " height=" << height(result.trace)
          << " merkle_root=" << merkle_root(result.trace).to_hex() << " invocations=" << result.invocations
          << " failures=" << result.failures << '\n';
  return kOk;
}

int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err) {
  std::optional<Cteg> c;
  if (auto code = load_checked(path, c, out, err)) return *code;
  out << "ok nodes=" << c->size() << " height=" << height(*c)
      << " root_timestamp=" << c->time(c->root()).micros << '\n';
  return kOk;
}

int cmd_commit(const std::string& path, std::ostream& out, std::ostream& err) {
  std::optional<Cteg> c;
  std::ostringstream report;
  if (auto code = load_checked(path, c, report, err)) {
    err << report.str();
    return *code;
  }
  out << merkle_root(*c).to_hex() << '\n';
  return kOk;
}

int cmd_normalize(const std::string& path, std::ostream& out, std::ostream& err) {
  std::optional<Cteg> c;
  std::ostringstream report;
  if (auto code = load_checked(path, c, report, err)) {
    err << report.str();
    return *code;
  }
  ExecutionSequence seq = e0_normalize(*c);
  for (const auto& step : seq.steps()) {
    const auto& em = std::get<EmissionStep>(step);
    ActionId node = *em.emitted.begin();
    out << '(' << em.root.to_hex() << ", " << node.to_hex() << ", " << c->time(node).micros << ")\n";
  }
  return kOk;
}

int cmd_project(const std::string& path, std::ostream& out, std::ostream& err) {
  std::optional<Cteg> c;
  std::ostringstream report;
  if (auto code = load_checked(path, c, report, err)) {
    err << report.str();
    return *code;
  }
  for (ActionId n : temporal_projection(*c)) out << n.to_hex() << '\t' << c->time(n).micros << '\n';
  return kOk;
}

int cmd_oracle(const OracleOptions& options, std::ostream& out, std::ostream& err) {
  UniverseBounds bounds =
      UniverseBounds::make(options.actions, options.timestamps, options.types, options.max_len);
  bounds.max_step_emit = options.max_step_emit;
  try {
    bounds.validate();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  out << "bounds actions=" << options.actions << " timestamps=" << options.timestamps
      << " types=" << options.types << " max_len=" << options.max_len << " d_max=" << options.d_max
      << " budget=" << options.budget << '\n';

  Budget budget(options.budget);
  HierarchyResult h = hierarchy(bounds, options.d_max, &budget);
  for (std::size_t d = 0; d < h.levels.size(); ++d) {
    out << "|E_" << d << "| = " << h.levels[d].size() << '\n';
  }
  if (h.budget_exceeded) {
    out << "budget exceeded after " << h.levels.size() << " level(s), states used " << budget.used() << '\n';
    return kBudgetExceeded;
  }

  bool all_pass = true;
  auto report = [&](bool pass, const std::string& what) {
    out << (pass ? "PASS " : "FAIL ") << what << '\n';
    all_pass = all_pass && pass;
  };

  bool chain = true;
  for (std::size_t d = 1; d < h.levels.size(); ++d) chain = chain && is_subset(h.levels[d - 1], h.levels[d]);
  report(chain, "ascending chain E_0 <= ... <= E_" + std::to_string(options.d_max));

  if (options.d_max >= 1) {
    if (admits_height_two_graft(bounds)) {
      report(h.levels[0] != h.levels[1], "strict E_0 != E_1");
    } else {
      out << "SKIP strict E_0 != E_1 (bounds cannot express a height-2 graft)\n";
    }
  }
  if (options.d_max >= 2) {
    report(h.levels[1] == h.levels[2], "stabilized E_1 = E_2");
  }
  if (options.d_max >= 1) {
    const SequenceSet& stable = h.levels.back();
    try {
      SequenceSet image = phi(stable, bounds, &budget);
      report(image == stable, "fixed point phi(E_" + std::to_string(options.d_max) + ") = E_" +
                                  std::to_string(options.d_max));
    } catch (const BudgetExceededError&) {
      out << "budget exceeded during fixed-point check, states used " << budget.used() << '\n';
      return kBudgetExceeded;
    }
  }

  if (options.listing) {
    std::ofstream file(*options.listing, std::ios::binary | std::ios::trunc);
    file << canonical_listing(h.levels.back(), bounds);
    if (!file) {
      err << "error: cannot write " << *options.listing << '\n';
      return kParseError;
    }
  }
  out << "states used " << budget.used() << '\n';
  return all_pass ? kOk : kInvalid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build, check, commit and analyse causal-temporal event graph traces"};
  app.require_subcommand(1);

  SimulationConfig sim;
  std::vector<std::string> type_names{"step"};
  std::string sim_out;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a seeded recursive agent script and export its trace");
  simulate_cmd->add_option("--seed", sim.seed, "RNG seed");
  simulate_cmd->add_option("--max-depth", sim.max_depth, "Maximum subagent nesting depth");
  simulate_cmd->add_option("--branching", sim.branching, "Maximum events per emission")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--steps", sim.steps, "Scripted steps per agent");
  simulate_cmd->add_option("--fail-prob", sim.fail_prob, "Probability that a subagent fails")
      ->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--types", type_names, "Comma-separated event types")->delimiter(',');
  simulate_cmd->add_option("--out", sim_out, "Output trace file (default: standard output)");

  std::string file;
  auto add_file_cmd = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("FILE", file, "Trace file")->required();
    return cmd;
  };
  auto* verify_cmd = add_file_cmd("verify", "Check that a trace file is a valid CTEG");
  auto* commit_cmd = add_file_cmd("commit", "Print the Merkle root of a trace");
  auto* normalize_cmd = add_file_cmd("normalize", "Print the single-emission schedule rebuilding a trace");
  auto* project_cmd = add_file_cmd("project", "Print nodes in temporal projection order");

  OracleOptions oracle;
  std::string listing;
  auto* oracle_cmd = app.add_subcommand("oracle", "Enumerate the bounded execution hierarchy and check its properties");
  oracle_cmd->add_option("--actions", oracle.actions, "Size of the action pool");
  oracle_cmd->add_option("--timestamps", oracle.timestamps, "Number of timestamps (0..N-1)");
  oracle_cmd->add_option("--types", oracle.types, "Number of event types");
  oracle_cmd->add_option("--max-len", oracle.max_len, "Maximum sequence length in graphs");
  oracle_cmd->add_option("--max-step-emit", oracle.max_step_emit, "Maximum nodes per emission");
  oracle_cmd->add_option("--d-max", oracle.d_max, "Deepest hierarchy level");
  oracle_cmd->add_option("--budget", oracle.budget, "State-count ceiling");
  oracle_cmd->add_option("--listing", listing, "Write the canonical listing of the last level");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (simulate_cmd->parsed()) {
      sim.types.clear();
      for (const auto& t : type_names) sim.types.emplace_back(t);
      return cmd_simulate(sim, sim_out, out, err);
    }
    if (verify_cmd->parsed()) return cmd_verify(file, out, err);
    if (commit_cmd->parsed()) return cmd_commit(file, out, err);
    if (normalize_cmd->parsed()) return cmd_normalize(file, out, err);
    if (project_cmd->parsed()) return cmd_project(file, out, err);
    if (oracle_cmd->parsed()) {
      if (!listing.empty()) oracle.listing = listing;
      return cmd_oracle(oracle, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }
  return kParseError;
}

}  // namespace cteg::cli
