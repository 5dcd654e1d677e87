#pragma once

// Batch front door: subcommand execution, deterministic output files and the
// run manifest.  Exit codes: 0 pass, 1 assertion failure, 2 usage/config
// error, 3 runtime error.

#include <string>
#include <vector>

#include "sgf/run_config.hpp"

namespace sgf {

inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertionFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

// simulate | verify | moments | contraction | convergence | decay.
// Writes trajectory CSVs, report JSONs and manifest.json into rc.out_dir.
int run_subcommand(const std::string& subcommand, const RunConfig& rc);

const std::vector<std::string>& subcommand_names();

}  // namespace sgf
