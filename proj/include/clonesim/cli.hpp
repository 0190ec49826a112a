#pragma once

#include <iosfwd>
#include <string>

#include "clonesim/config.hpp"

namespace clonesim {

// Process exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;          // success / all checks passed
inline constexpr int kExitVerifyFail = 1;  // a verification check failed
inline constexpr int kExitUsage = 2;       // bad flags, config or parameters
inline constexpr int kExitRuntime = 3;     // solver or I/O failure at runtime

// Runs one simulation and writes totals.csv, heatmap_stage{1..M}.csv and
// report.txt (human-readable plus a key=value machine section) into
// config.out_dir. Progress goes to `log`.
int cmd_simulate(const RunConfig& config, std::ostream& log);

// Reproduces the data behind one figure id (fig2..fig7): density heatmaps
// and/or totals series for the matching preset(s), with the self-renewal
// optimum trait locations attached as metadata markers.
int cmd_reproduce(const std::string& figure, const RunConfig& config, std::ostream& log);

// Verification suites: "bounds" (a-priori bound certificates on all presets),
// "theorem" (long-run growth-rate sign checks), "ode-equivalence" (density
// solver against the discrete-clone reference), or "all". Prints one PASS or
// FAIL line per check; exit 0 iff everything passed.
int cmd_verify(const std::string& suite, const RunConfig& config, std::ostream& log);

// argv front end: subcommands simulate | reproduce | verify with flags
// --config, --out, --grid, --dt, --horizon, --paper-fidelity, --figure, --suite.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace clonesim
