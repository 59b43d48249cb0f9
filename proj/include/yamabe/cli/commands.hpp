#pragma once

#include "yamabe/cli/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace yamabe::cli {

/// Process exit codes shared by every command.
enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_hypothesis = 2,
  exit_gap = 3,
  exit_config = 64,
};

struct CommandOptions {
  std::filesystem::path out = "out";
  /// Run solve/continue even when a hypothesis check fails.
  bool force = false;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<double> gap_threshold;
};

/// Coercivity, H(x0) and the γ admissibility condition. Returns exit_ok or
/// exit_hypothesis.
int cmd_check(const RunConfig& cfg, std::ostream& out);

/// Writes trace.csv, solution.csv and summary.txt under opts.out.
int cmd_solve(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out);

/// Writes continuation.csv and continuation_summary.txt under opts.out.
int cmd_continue(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out);

/// Writes bubble_scan.csv and bubble_report.txt under opts.out. Returns
/// exit_gap when the fitted coefficient misses the prediction by more than
/// the threshold.
int cmd_bubble_scan(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out);

/// Reference values: "aubin P Q", "k0 N", "omega N", "critical N", and
/// "lambda1" (which needs a config).
int cmd_oracle(const std::vector<std::string>& args, const std::optional<RunConfig>& cfg, std::ostream& out);

/// Argument parsing and dispatch; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace yamabe::cli
