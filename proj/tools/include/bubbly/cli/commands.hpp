#pragma once

#include "bubbly/cli/config.hpp"

#include <iosfwd>

namespace bubbly::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

int cmd_band(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_defect(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep_S(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_mode(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bubbly::cli
