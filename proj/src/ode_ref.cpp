#include "clonesim/ode_ref.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "clonesim/numerics.hpp"

namespace clonesim {

namespace {

void check_ode_structure(const OdeParams& p) {
    if (p.num_stages < 2)
        throw std::invalid_argument("ode: num_stages must be >= 2");
    if (p.num_clones < 1)
        throw std::invalid_argument("ode: num_clones must be >= 1");
    const auto want = static_cast<std::size_t>(p.num_stages - 1);
    if (p.self_renewal.size() != want || p.proliferation.size() != want)
        throw std::invalid_argument("ode: need num_stages - 1 rate rows");
    for (std::size_t i = 0; i < want; ++i)
        if (static_cast<int>(p.self_renewal[i].size()) != p.num_clones ||
            static_cast<int>(p.proliferation[i].size()) != p.num_clones)
            throw std::invalid_argument("ode: rate row " + std::to_string(i + 1) +
                                        " does not have num_clones entries");
    if (!(p.feedback_strength > 0.0) || !(p.clearance > 0.0) || !(p.epsilon > 0.0))
        throw std::invalid_argument("ode: K, d and epsilon must be > 0");
}

void check_ode_state(const OdeState& s, const OdeParams& p) {
    if (static_cast<int>(s.counts.size()) != p.num_stages)
        throw std::invalid_argument("ode: state has wrong stage count");
    for (const auto& row : s.counts)
        if (static_cast<int>(row.size()) != p.num_clones)
            throw std::invalid_argument("ode: state row does not have num_clones entries");
}

}  // namespace

DensityTotals ode_totals(const OdeState& state, const OdeParams& params) {
    DensityTotals t;
    t.totals.resize(state.counts.size());
    for (std::size_t i = 0; i < state.counts.size(); ++i)
        t.totals[i] = pairwise_sum(state.counts[i]);
    t.signal = feedback_signal(t.totals.back(), params.feedback_strength);
    return t;
}

OdeState ode_rhs(const OdeState& state, const OdeParams& params) {
    check_ode_structure(params);
    check_ode_state(state, params);
    const int M = params.num_stages;
    const int J = params.num_clones;
    const double s =
        feedback_signal(pairwise_sum(state.counts[M - 1]), params.feedback_strength);
    const double inv_eps = 1.0 / params.epsilon;
    OdeState out;
    out.time = state.time;
    out.counts.assign(state.counts.size(), std::vector<double>(J, 0.0));
    for (int j = 0; j < J; ++j) {
        double influx = 0.0;
        for (int i = 1; i < M; ++i) {
            const double a = params.self_renewal[i - 1][j];
            const double p = params.proliferation[i - 1][j];
            const double n = state.counts[i - 1][j];
            out.counts[i - 1][j] = (influx + (2.0 * a * s - 1.0) * p * n) * inv_eps;
            influx = 2.0 * (1.0 - a * s) * p * n;
        }
        out.counts[M - 1][j] = (influx - params.clearance * state.counts[M - 1][j]) * inv_eps;
    }
    return out;
}

OdeTrajectory ode_simulate(const OdeState& initial, const OdeParams& params,
                           const SolverConfig& config) {
    const auto wall0 = std::chrono::steady_clock::now();
    if (config.integrator != Integrator::ForwardEuler)
        throw std::invalid_argument("ode_simulate: only forward Euler is supported");
    if (!(config.dt > 0.0)) throw std::invalid_argument("ode_simulate: dt must be > 0");
    if (!(config.horizon > 0.0)) throw std::invalid_argument("ode_simulate: horizon must be > 0");
    if (config.record_every < 1)
        throw std::invalid_argument("ode_simulate: record_every must be >= 1");
    check_ode_structure(params);
    check_ode_state(initial, params);
    for (const auto& row : initial.counts)
        for (double v : row)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("ode_simulate: initial counts must be finite and >= 0");

    const double dt = config.dt;
    const long steps = std::llround(config.horizon / dt);
    if (steps < 1) throw std::invalid_argument("ode_simulate: horizon shorter than half a step");

    const int M = params.num_stages;
    const int J = params.num_clones;

    double pmax = 0.0;
    for (const auto& row : params.proliferation)
        for (double v : row) pmax = std::max(pmax, v);
    const double max_rate = std::max(params.clearance, 2.0 * pmax);

    OdeTrajectory traj;
    traj.meta.config = config;
    traj.meta.total_steps = steps;
    traj.meta.max_rate_bound = max_rate;
    if (dt * max_rate > 0.5)
        throw std::runtime_error("ode_simulate: dt * max_rate = " + fmt17(dt * max_rate) +
                                 " > 0.5");
    if (dt * max_rate > 0.1) traj.meta.dt_warning = true;

    traj.totals.num_stages = M;
    traj.totals.times.reserve(steps + 1);
    traj.totals.rho.reserve(static_cast<std::size_t>(steps + 1) * M);
    traj.totals.signal.reserve(steps + 1);

    OdeState state = initial;
    std::vector<double> deriv(static_cast<std::size_t>(M) * J);
    std::vector<double> stage_max(M);
    const double t0 = initial.time;

    auto record_totals = [&](double t) {
        traj.totals.times.push_back(t);
        for (int i = 0; i < M; ++i) traj.totals.rho.push_back(pairwise_sum(state.counts[i]));
        traj.totals.signal.push_back(feedback_signal(traj.totals.rho.back(),
                                                     params.feedback_strength));
        return traj.totals.signal.back();
    };

    for (long step = 0; step < steps; ++step) {
        const double t = t0 + step * dt;
        state.time = t;
        const double s = record_totals(t);
        if (step % config.record_every == 0) {
            traj.times.push_back(t);
            traj.snapshots.push_back(state);
        }
        std::fill(stage_max.begin(), stage_max.end(), 0.0);
        const double inv_eps = 1.0 / params.epsilon;
        for (int j = 0; j < J; ++j) {
            double influx = 0.0;
            for (int i = 1; i < M; ++i) {
                const double a = params.self_renewal[i - 1][j];
                const double p = params.proliferation[i - 1][j];
                const double n = state.counts[i - 1][j];
                deriv[(i - 1) * J + j] = (influx + (2.0 * a * s - 1.0) * p * n) * inv_eps;
                influx = 2.0 * (1.0 - a * s) * p * n;
                stage_max[i - 1] = std::max(stage_max[i - 1], n);
                traj.meta.max_rate_seen =
                    std::max(traj.meta.max_rate_seen, std::fabs((2.0 * a * s - 1.0) * p));
            }
            const double nM = state.counts[M - 1][j];
            deriv[(M - 1) * J + j] = (influx - params.clearance * nM) * inv_eps;
            stage_max[M - 1] = std::max(stage_max[M - 1], nM);
        }
        for (int i = 0; i < M; ++i) {
            const double floor_i = config.positivity_tolerance * stage_max[i];
            for (int j = 0; j < J; ++j) {
                double v = state.counts[i][j] + dt * deriv[i * J + j];
                if (v < 0.0) {
                    if (v >= floor_i) {
                        v = 0.0;
                        ++traj.meta.clamp_count;
                    } else {
                        throw std::runtime_error("ode_simulate: count went negative beyond "
                                                 "tolerance at t = " + fmt17(t + dt));
                    }
                }
                state.counts[i][j] = v;
            }
        }
    }

    const double t_end = t0 + steps * dt;
    state.time = t_end;
    record_totals(t_end);
    traj.times.push_back(t_end);
    traj.snapshots.push_back(state);

    traj.meta.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return traj;
}

std::pair<OdeState, OdeParams> ide_to_ode(const State& state, const ModelParams& params,
                                          const Grid& grid) {
    if (grid.layout != GridLayout::Midpoint)
        throw std::invalid_argument("ide_to_ode: only midpoint grids map to equal-mass clones "
                                    "(vertex end cells carry half weight)");
    if (static_cast<int>(state.densities.size()) != params.num_stages)
        throw std::invalid_argument("ide_to_ode: state/params stage mismatch");
    OdeParams op;
    op.num_stages = params.num_stages;
    op.num_clones = grid.num_points;
    op.feedback_strength = params.feedback_strength;
    op.clearance = params.clearance;
    op.epsilon = params.epsilon;
    for (int i = 1; i < params.num_stages; ++i) {
        op.self_renewal.push_back(params.self_renewal[i - 1].values);
        op.proliferation.push_back(params.proliferation[i - 1].values);
    }
    OdeState os;
    os.time = state.time;
    os.counts.assign(params.num_stages, std::vector<double>(grid.num_points));
    for (int i = 0; i < params.num_stages; ++i) {
        if (static_cast<int>(state.densities[i].size()) != grid.num_points)
            throw std::invalid_argument("ide_to_ode: density length does not match grid");
        for (int k = 0; k < grid.num_points; ++k)
            os.counts[i][k] = state.densities[i][k] * grid.cell_width;
    }
    return {std::move(os), std::move(op)};
}

}  // namespace clonesim
