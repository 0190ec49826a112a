#pragma once

#include <map>
#include <string>
#include <vector>

#include "clonesim/solver.hpp"

namespace clonesim {

// CSV emitters shared by the command-layer. All floating point values are
// written with %.17g so files round-trip to the exact binary values.

// Columns t, rho_1..rho_M, signal; one row per `stride` steps of the totals
// series plus the final row. stride <= 1 writes every step.
void write_totals_csv(const std::string& path, const TotalsSeries& totals, long stride);

// Long-form stage profile over the recorded snapshots: columns t, x, value
// with value = n_stage / rho_stage(t) when normalize is set (raw density
// otherwise). Leading '# key = value' comment lines carry the stage, the
// normalization, and optional trait markers (e.g. self-renewal optima).
void write_heatmap_csv(const std::string& path, const Trajectory& traj, const Grid& grid,
                       int stage, bool normalize,
                       const std::map<std::string, std::string>& markers);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;                 // column-major
    std::map<std::string, std::string> metadata;              // from '# key = value' lines
    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

// Reads tables written by the emitters above (used by tests and verification).
CsvTable read_csv(const std::string& path);

}  // namespace clonesim
