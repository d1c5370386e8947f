#pragma once

#include <iosfwd>
#include <string>

#include "config.hpp"
#include "output.hpp"

namespace surfids {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kPass = 0, kStudyFailure = 1, kConfigError = 2, kNumericFailure = 3 };

struct RunContext {
  ExperimentConfig config;
  OutputTree& out;
  unsigned threads = 1;
  std::ostream& log;
};

int cmd_free_ids(RunContext& ctx);
int cmd_transverse_gap(RunContext& ctx);
int cmd_idss(RunContext& ctx);
int cmd_reduced_ids(RunContext& ctx);
int cmd_sandwich(RunContext& ctx);
int cmd_lifshits_fit(RunContext& ctx);

/// Built-in battery of closed-form examples and small invariant checks.
/// Writes selftest.txt under `out_dir` and returns kPass when every line passes.
int cmd_selftest(const std::string& out_dir, unsigned threads, std::ostream& log);

}  // namespace surfids
