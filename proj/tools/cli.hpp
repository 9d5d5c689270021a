#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cteg/simulate.hpp"

namespace cteg::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kInvalid = 1;
inline constexpr int kParseError = 2;
inline constexpr int kBudgetExceeded = 3;

struct OracleOptions {
  std::size_t actions = 4;
  std::size_t timestamps = 4;
  std::size_t types = 1;
  std::size_t max_len = 3;
  std::size_t max_step_emit = 16;
  std::size_t d_max = 2;
  std::uint64_t budget = 50'000'000;
  std::optional<std::string> listing;  // write canonical listing of the last level here
};

/// Writes the trace to `out_path` (or `out` when empty) and a summary line
/// `nodes=N height=H merkle_root=HEX invocations=I failures=F` to `out`.
int cmd_simulate(const SimulationConfig& config, const std::string& out_path, std::ostream& out,
                 std::ostream& err);
int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_commit(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_normalize(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_project(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_oracle(const OracleOptions& options, std::ostream& out, std::ostream& err);

/// Full command line dispatch (argv[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cteg::cli
