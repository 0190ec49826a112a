#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "clonesim/growth.hpp"
#include "clonesim/model.hpp"

namespace clonesim {

enum class Integrator { ForwardEuler, RK4 };

struct SolverConfig {
    double dt = 1e-2;          // days
    double horizon = 1e4;      // days
    long record_every = 1;     // snapshot stride in steps (totals are kept every step)
    Integrator integrator = Integrator::ForwardEuler;
    // Relative floor for post-step negativity: a new value v < 0 is clamped to 0
    // while v >= positivity_tolerance * max(old stage values), and is a hard
    // error below that. Must be <= 0.
    double positivity_tolerance = -1e-12;

    bool operator==(const SolverConfig&) const = default;
};

// Stage totals and signal at every step, stored flat so multi-million-step
// runs do not allocate per step.
struct TotalsSeries {
    int num_stages = 0;
    std::vector<double> times;
    std::vector<double> rho;     // times.size() x num_stages, row-major
    std::vector<double> signal;  // times.size()

    std::size_t size() const { return times.size(); }
    DensityTotals at(std::size_t idx) const;
    std::vector<double> stage(int stage) const;  // one stage's column, 1-based
};

struct TrajectoryMeta {
    SolverConfig config;
    long total_steps = 0;
    double max_rate_bound = 0.0;  // a-priori max(d, 2 * max_i sup p_i)
    double max_rate_seen = 0.0;   // realized max |P_i| over the run
    long clamp_count = 0;         // negative values zeroed within tolerance
    bool dt_warning = false;      // dt * max_rate_bound > 0.1
    double wall_seconds = 0.0;
    std::vector<std::string> warnings;
};

struct Trajectory {
    std::vector<double> times;                   // recorded (decimated) times
    std::vector<State> snapshots;                // full densities at `times`
    std::vector<GrowthIntegrals> growth_series;  // growth integrals at `times`
    TotalsSeries totals;                         // every step, t0 .. t0+steps*dt
    TrajectoryMeta meta;
};

// One explicit Euler step: state + dt * rhs(state), with the post-step
// negativity policy above. Bit-identical to one step of simulate().
State euler_step(const State& state, const ModelParams& params, const Grid& grid, double dt,
                 const SolverConfig& config = {});

// Integrates from `initial` over round(horizon/dt) steps with fixed dt.
// Time stamps are t0 + k*dt (computed, not accumulated). Records the state and
// growth integrals every record_every-th step plus the final step
// unconditionally; stage totals and the signal are kept at every step.
//
// Throws std::invalid_argument for bad config/params/initial (negative initial
// densities included) and std::runtime_error when the a-priori stability guard
// dt * max(d, 2*max_i sup p_i) <= 1/2 fails or a density falls below the
// negativity tolerance mid-run. Identical inputs produce bit-identical output.
Trajectory simulate(const State& initial, const ModelParams& params, const Grid& grid,
                    const SolverConfig& config);

}  // namespace clonesim
