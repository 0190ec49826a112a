#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "clonesim/calibration.hpp"
#include "clonesim/grid.hpp"
#include "clonesim/solver.hpp"

namespace clonesim {

// Parameterization given directly in the config file instead of by preset
// name. Rates use the same functional forms the presets are built from.
struct InlineModel {
    int num_stages = 3;
    double feedback_strength = 0.0;
    double clearance = 0.0;
    double epsilon = 1.0;
    std::vector<RateSpec> self_renewal;    // stages 1..M-1
    std::vector<RateSpec> proliferation;   // stages 1..M-1
    InitialSpec initial;

    bool operator==(const InlineModel&) const = default;
};

struct RunConfig {
    std::string preset;               // exactly one of preset / model must be set
    std::optional<InlineModel> model;
    int grid_points = 200;
    GridLayout layout = GridLayout::Midpoint;
    // record_every 0 here means "auto": about 2000 snapshots over the horizon
    SolverConfig solver{1e-2, 1e4, 0};
    bool paper_fidelity = false;
    std::string out_dir = "out";
    bool full_totals = false;         // write totals.csv at every step instead of snapshots
    double delta = 0.05;              // concentration window half-width
    double support_threshold = 1e-12;
    double prominence_floor = 0.01;
    double amplitude_floor = 0.05;

    bool operator==(const RunConfig&) const = default;
};

// Parse/format errors carry the 1-based config line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message)
        : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + message
                                      : "config: " + message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// `key = value` lines, '#' starts a comment, blank lines ignored. Unknown or
// duplicate keys are errors with their line number; so are unparseable or
// out-of-range values. The result always satisfies parse(serialize(c)) == c.
RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& config);

RunConfig load_config_file(const std::string& path);

// record_every resolved: explicit value, or steps/2000 (>= 1) when 0.
SolverConfig effective_solver_config(const RunConfig& config);

// Materializes either the named preset or the inline model on the grid.
Preset materialize(const RunConfig& config, const Grid& grid);

}  // namespace clonesim
