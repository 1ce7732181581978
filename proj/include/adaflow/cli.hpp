#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "adaflow/scenarios.hpp"

namespace adaflow {

/// Environment variable naming a directory of user scenario config files
/// (<name>.cfg), searched after the builtins.
inline constexpr const char* kScenarioDirEnv = "ADAFLOW_SCENARIO_DIR";

/// Print builtin scenario names (plus any user configs) with one-line
/// descriptions. Always returns 0.
int cmd_list(std::ostream& out);

struct RunOptions {
    std::string scenario;  // builtin name or path to a config/manifest file
    std::vector<std::pair<std::string, std::string>> overrides;
    std::filesystem::path out_dir;
};

/// Resolve, run, and write per-draw trajectory CSVs, per-law band CSVs and a
/// manifest per variant. Returns 0 on success, 2 on configuration errors.
/// Diverged draws are results, not failures.
int cmd_run(const RunOptions& opts, std::ostream& log);

/// Re-check diagnostic invariants on a run directory written by cmd_run.
/// Prints one line per check; returns 0 when nothing failed (NotApplicable
/// is not a failure), 1 on any failed check, 2 when no manifest is found.
int cmd_verify(const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace adaflow
