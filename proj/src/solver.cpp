#include "clonesim/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "clonesim/numerics.hpp"

namespace clonesim {

namespace {

struct Scratch {
    std::vector<double> deriv;      // M x N, row-major
    std::vector<double> stage_max;  // max of the pre-step values per stage
    double max_rate = 0.0;          // realized max diagonal rate this eval
};

// Derivative of `state` at signal `s` into scr.deriv. Arithmetic matches
// rhs() term for term so euler_step and simulate stay bit-identical with it.
void eval_derivative(const State& state, const ModelParams& params, const Grid& grid, double s,
                     Scratch& scr) {
    const int M = params.num_stages;
    const int N = grid.num_points;
    const double inv_eps = 1.0 / params.epsilon;
    double max_rate = params.clearance;
    std::fill(scr.stage_max.begin(), scr.stage_max.end(), 0.0);
    double* dv = scr.deriv.data();
    for (int k = 0; k < N; ++k) {
        double influx = 0.0;
        for (int i = 1; i < M; ++i) {
            const double a = params.self_renewal[i - 1].values[k];
            const double p = params.proliferation[i - 1].values[k];
            const double n = state.densities[i - 1][k];
            dv[(i - 1) * N + k] = (influx + (2.0 * a * s - 1.0) * p * n) * inv_eps;
            influx = 2.0 * (1.0 - a * s) * p * n;
            max_rate = std::max(max_rate, std::fabs((2.0 * a * s - 1.0) * p));
            scr.stage_max[i - 1] = std::max(scr.stage_max[i - 1], n);
        }
        const double nM = state.densities[M - 1][k];
        dv[(M - 1) * N + k] = (influx - params.clearance * nM) * inv_eps;
        scr.stage_max[M - 1] = std::max(scr.stage_max[M - 1], nM);
    }
    scr.max_rate = max_rate;
}

// state += dt * deriv with the negativity policy; returns the clamp count.
long apply_update(State& state, const std::vector<double>& deriv,
                  const std::vector<double>& stage_max, int N, double dt, double tol_rel,
                  double t_next) {
    long clamps = 0;
    const int M = static_cast<int>(state.densities.size());
    for (int i = 0; i < M; ++i) {
        const double floor_i = tol_rel * stage_max[i];  // <= 0
        double* n = state.densities[i].data();
        const double* dv = deriv.data() + static_cast<std::size_t>(i) * N;
        for (int k = 0; k < N; ++k) {
            double v = n[k] + dt * dv[k];
            if (v < 0.0) {
                if (v >= floor_i) {
                    v = 0.0;
                    ++clamps;
                } else {
                    throw std::runtime_error("solver: density went negative beyond tolerance at t = " +
                                             fmt17(t_next) + " (stage " + std::to_string(i + 1) +
                                             ", grid index " + std::to_string(k) + ", value " +
                                             fmt17(v) + ")");
                }
            }
            n[k] = v;
        }
    }
    return clamps;
}

double apriori_max_rate(const ModelParams& params) {
    double pmax = 0.0;
    for (const auto& tab : params.proliferation)
        for (double v : tab.values) pmax = std::max(pmax, v);
    // |2 a s - 1| <= 1 for a < 1 and 0 < s <= 1, so every diagonal rate is
    // below max(d, sup p); the factor 2 keeps the guard conservative
    return std::max(params.clearance, 2.0 * pmax);
}

void check_state_shape(const State& state, const ModelParams& params, const Grid& grid,
                       bool require_nonnegative) {
    if (static_cast<int>(state.densities.size()) != params.num_stages)
        throw std::invalid_argument("solver: state has " + std::to_string(state.densities.size()) +
                                    " stages, params expect " + std::to_string(params.num_stages));
    for (std::size_t i = 0; i < state.densities.size(); ++i) {
        const auto& n = state.densities[i];
        if (static_cast<int>(n.size()) != grid.num_points)
            throw std::invalid_argument("solver: stage " + std::to_string(i + 1) + " density has " +
                                        std::to_string(n.size()) + " points, grid has " +
                                        std::to_string(grid.num_points));
        if (require_nonnegative)
            for (int k = 0; k < grid.num_points; ++k) {
                if (!(n[k] >= 0.0) || !std::isfinite(n[k]))
                    throw std::invalid_argument("solver: initial density must be finite and >= 0 "
                                                "(stage " + std::to_string(i + 1) + ", grid index " +
                                                std::to_string(k) + ", value " + fmt17(n[k]) + ")");
            }
    }
}

void check_config(const SolverConfig& config) {
    if (!(config.dt > 0.0)) throw std::invalid_argument("solver: dt must be > 0");
    if (!(config.horizon > 0.0)) throw std::invalid_argument("solver: horizon must be > 0");
    if (config.record_every < 1) throw std::invalid_argument("solver: record_every must be >= 1");
    if (config.positivity_tolerance > 0.0)
        throw std::invalid_argument("solver: positivity_tolerance must be <= 0");
}

}  // namespace

DensityTotals TotalsSeries::at(std::size_t idx) const {
    DensityTotals t;
    t.totals.assign(rho.begin() + idx * num_stages, rho.begin() + (idx + 1) * num_stages);
    t.signal = signal[idx];
    return t;
}

std::vector<double> TotalsSeries::stage(int stage) const {
    std::vector<double> out(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) out[j] = rho[j * num_stages + (stage - 1)];
    return out;
}

State euler_step(const State& state, const ModelParams& params, const Grid& grid, double dt,
                 const SolverConfig& config) {
    if (!(dt > 0.0)) throw std::invalid_argument("euler_step: dt must be > 0");
    check_state_shape(state, params, grid, false);
    const int M = params.num_stages;
    const int N = grid.num_points;
    Scratch scr{std::vector<double>(static_cast<std::size_t>(M) * N), std::vector<double>(M), 0.0};
    const double s =
        feedback_signal(integrate(grid, state.densities[M - 1]), params.feedback_strength);
    eval_derivative(state, params, grid, s, scr);
    State next = state;
    apply_update(next, scr.deriv, scr.stage_max, N, dt, config.positivity_tolerance,
                 state.time + dt);
    next.time = state.time + dt;
    return next;
}

Trajectory simulate(const State& initial, const ModelParams& params, const Grid& grid,
                    const SolverConfig& config) {
    const auto wall0 = std::chrono::steady_clock::now();
    check_config(config);
    ValidationReport assumptions = validate_assumptions(params, grid);
    if (!assumptions.ok()) {
        const auto& v = assumptions.violations.front();
        throw std::invalid_argument("solver: model assumptions violated (" + v.what + " at stage " +
                                    std::to_string(v.stage) + ", grid index " +
                                    std::to_string(v.grid_index) + ", value " + fmt17(v.value) +
                                    "); " + std::to_string(assumptions.violations.size()) +
                                    " violation(s) total");
    }
    check_state_shape(initial, params, grid, true);

    const double dt = config.dt;
    const long steps = std::llround(config.horizon / dt);
    if (steps < 1)
        throw std::invalid_argument("solver: horizon " + fmt17(config.horizon) +
                                    " is shorter than half a step of dt " + fmt17(dt));

    Trajectory traj;
    traj.meta.config = config;
    traj.meta.total_steps = steps;
    traj.meta.max_rate_bound = apriori_max_rate(params);
    const double stiffness = dt * traj.meta.max_rate_bound;
    if (stiffness > 0.5)
        throw std::runtime_error("solver: explicit step unstable, dt * max_rate = " +
                                 fmt17(stiffness) + " > 0.5; use dt <= " +
                                 fmt17(0.5 / traj.meta.max_rate_bound));
    if (stiffness > 0.1) {
        traj.meta.dt_warning = true;
        traj.meta.warnings.push_back("dt * max_rate = " + fmt17(stiffness) +
                                     " > 0.1: expect visible first-order error");
    }
    if (std::fabs(steps * dt - config.horizon) >
        1e-9 * std::max(1.0, std::fabs(config.horizon)))
        traj.meta.warnings.push_back("horizon is not a multiple of dt; integrated to t0 + " +
                                     fmt17(steps * dt));
    for (const auto& w : assumptions.warnings) traj.meta.warnings.push_back(w.what);

    const int M = params.num_stages;
    const int N = grid.num_points;
    const double t0 = initial.time;

    traj.totals.num_stages = M;
    traj.totals.times.reserve(steps + 1);
    traj.totals.rho.reserve(static_cast<std::size_t>(steps + 1) * M);
    traj.totals.signal.reserve(steps + 1);
    const std::size_t approx_snaps = static_cast<std::size_t>(steps / config.record_every) + 2;
    traj.times.reserve(approx_snaps);
    traj.snapshots.reserve(approx_snaps);
    traj.growth_series.reserve(approx_snaps);

    State state = initial;
    GrowthIntegrals growth = make_growth_integrals(M, N);
    growth.time = t0;
    Scratch scr{std::vector<double>(static_cast<std::size_t>(M) * N), std::vector<double>(M), 0.0};
    const bool rk4 = config.integrator == Integrator::RK4;
    // extra buffers only touched on the RK4 path
    std::vector<double> k2, k3, k4;
    State stage_state;
    if (rk4) {
        k2.resize(scr.deriv.size());
        k3.resize(scr.deriv.size());
        k4.resize(scr.deriv.size());
        stage_state = state;
    }

    auto record_totals = [&](double t) {
        traj.totals.times.push_back(t);
        for (int i = 1; i <= M; ++i)
            traj.totals.rho.push_back(integrate(grid, state.densities[i - 1]));
        traj.totals.signal.push_back(
            feedback_signal(traj.totals.rho[traj.totals.rho.size() - 1],
                            params.feedback_strength));
        return traj.totals.signal.back();
    };
    auto record_snapshot = [&](double t) {
        traj.times.push_back(t);
        state.time = t;
        traj.snapshots.push_back(state);
        GrowthIntegrals g = growth;
        g.time = t;
        traj.growth_series.push_back(std::move(g));
    };

    for (long step = 0; step < steps; ++step) {
        const double t = t0 + step * dt;
        state.time = t;
        const double s = record_totals(t);
        if (step % config.record_every == 0) record_snapshot(t);

        eval_derivative(state, params, grid, s, scr);
        traj.meta.max_rate_seen = std::max(traj.meta.max_rate_seen, scr.max_rate);
        accumulate_growth(growth, s, params, dt);
        growth.time = t + dt;

        if (!rk4) {
            traj.meta.clamp_count += apply_update(state, scr.deriv, scr.stage_max, N, dt,
                                                  config.positivity_tolerance, t + dt);
        } else {
            // classical RK4; intermediate stages are not clamped, the final
            // combination gets the same negativity policy as Euler
            auto stage_eval = [&](const std::vector<double>& slope, double frac,
                                  std::vector<double>& out) {
                for (std::size_t i = 0; i < state.densities.size(); ++i)
                    for (int k = 0; k < N; ++k)
                        stage_state.densities[i][k] =
                            state.densities[i][k] + frac * dt * slope[i * N + k];
                const double ss = feedback_signal(
                    std::max(0.0, integrate(grid, stage_state.densities[M - 1])),
                    params.feedback_strength);
                Scratch tmp{std::move(out), std::vector<double>(M), 0.0};
                eval_derivative(stage_state, params, grid, ss, tmp);
                out = std::move(tmp.deriv);
            };
            stage_eval(scr.deriv, 0.5, k2);
            stage_eval(k2, 0.5, k3);
            stage_eval(k3, 1.0, k4);
            std::vector<double>& combo = k2;  // reuse: combo = (k1 + 2k2 + 2k3 + k4)/6
            for (std::size_t j = 0; j < combo.size(); ++j)
                combo[j] = (scr.deriv[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) / 6.0;
            traj.meta.clamp_count += apply_update(state, combo, scr.stage_max, N, dt,
                                                  config.positivity_tolerance, t + dt);
        }
    }

    const double t_end = t0 + steps * dt;
    state.time = t_end;
    record_totals(t_end);
    record_snapshot(t_end);

    traj.meta.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return traj;
}

}  // namespace clonesim
