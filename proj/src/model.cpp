#include "clonesim/model.hpp"

#include <stdexcept>
#include <string>

#include "clonesim/numerics.hpp"

namespace clonesim {

namespace {

void require_structure(const ModelParams& p, const Grid& grid) {
    if (p.num_stages < 2)
        throw std::invalid_argument("model: num_stages must be >= 2, got " +
                                    std::to_string(p.num_stages));
    const auto want = static_cast<std::size_t>(p.num_stages - 1);
    if (p.self_renewal.size() != want)
        throw std::invalid_argument("model: expected " + std::to_string(want) +
                                    " self_renewal tables, got " +
                                    std::to_string(p.self_renewal.size()));
    if (p.proliferation.size() != want)
        throw std::invalid_argument("model: expected " + std::to_string(want) +
                                    " proliferation tables, got " +
                                    std::to_string(p.proliferation.size()));
    for (std::size_t i = 0; i < want; ++i) {
        if (static_cast<int>(p.self_renewal[i].values.size()) != grid.num_points)
            throw std::invalid_argument("model: self_renewal table " + std::to_string(i + 1) +
                                        " has length " +
                                        std::to_string(p.self_renewal[i].values.size()) +
                                        ", grid has " + std::to_string(grid.num_points));
        if (static_cast<int>(p.proliferation[i].values.size()) != grid.num_points)
            throw std::invalid_argument("model: proliferation table " + std::to_string(i + 1) +
                                        " has length " +
                                        std::to_string(p.proliferation[i].values.size()) +
                                        ", grid has " + std::to_string(grid.num_points));
    }
}

void check_stage_point(const ModelParams& p, int stage, int k, const char* who) {
    if (stage < 1 || stage > p.num_stages - 1)
        throw std::invalid_argument(std::string(who) + ": stage must be in 1.." +
                                    std::to_string(p.num_stages - 1) + " (stage " +
                                    std::to_string(p.num_stages) + " does not divide), got " +
                                    std::to_string(stage));
    const auto& tab = p.proliferation[stage - 1].values;
    if (k < 0 || k >= static_cast<int>(tab.size()))
        throw std::invalid_argument(std::string(who) + ": grid index " + std::to_string(k) +
                                    " out of range 0.." + std::to_string(tab.size() - 1));
}

}  // namespace

ValidationReport validate_assumptions(const ModelParams& params, const Grid& grid) {
    require_structure(params, grid);
    ValidationReport rep;
    auto hard = [&rep](std::string what, int stage, int k, double v) {
        rep.violations.push_back({std::move(what), stage, k, v, true});
    };
    if (!(params.feedback_strength > 0.0))
        hard("feedback_strength must be > 0", 0, -1, params.feedback_strength);
    if (!(params.clearance > 0.0))
        hard("clearance must be > 0", 0, -1, params.clearance);
    if (!(params.epsilon > 0.0))
        hard("epsilon must be > 0", 0, -1, params.epsilon);
    for (int i = 1; i < params.num_stages; ++i) {
        const auto& a = params.self_renewal[i - 1].values;
        const auto& p = params.proliferation[i - 1].values;
        for (int k = 0; k < grid.num_points; ++k) {
            if (!(a[k] > 0.5 && a[k] < 1.0))
                hard("self_renewal outside (1/2, 1)", i, k, a[k]);
            if (!(p[k] > 0.0 && p[k] < 1.0))
                hard("proliferation outside (0, 1)", i, k, p[k]);
        }
    }
    // ordering of division speeds across stages is advisory: the a-priori
    // bound constants assume it, the dynamics do not need it
    for (int i = 1; i + 1 < params.num_stages; ++i) {
        const auto& lo = params.proliferation[i - 1].values;
        const auto& hi = params.proliferation[i].values;
        for (int k = 0; k < grid.num_points; ++k) {
            if (lo[k] > hi[k]) {
                rep.warnings.push_back({"proliferation not nondecreasing across stages "
                                        + std::to_string(i) + "->" + std::to_string(i + 1),
                                        i, k, lo[k] - hi[k], false});
                break;  // one note per stage pair is enough
            }
        }
    }
    return rep;
}

double feedback_signal(double rho_M, double feedback_strength) {
    if (rho_M < 0.0)
        throw std::domain_error("feedback_signal: negative mature mass " + fmt17(rho_M));
    return 1.0 / (1.0 + feedback_strength * rho_M);
}

double net_growth(const ModelParams& params, int stage, int k, double signal) {
    check_stage_point(params, stage, k, "net_growth");
    const double a = params.self_renewal[stage - 1].values[k];
    const double p = params.proliferation[stage - 1].values[k];
    return (2.0 * a * signal - 1.0) * p;
}

double differentiation_outflux(const ModelParams& params, int stage, int k, double signal) {
    check_stage_point(params, stage, k, "differentiation_outflux");
    const double a = params.self_renewal[stage - 1].values[k];
    const double p = params.proliferation[stage - 1].values[k];
    return 2.0 * (1.0 - a * signal) * p;
}

double total_density(const State& state, int stage, const Grid& grid) {
    if (stage < 1 || stage > static_cast<int>(state.densities.size()))
        throw std::invalid_argument("total_density: stage " + std::to_string(stage) +
                                    " out of range 1.." + std::to_string(state.densities.size()));
    return integrate(grid, state.densities[stage - 1]);
}

DensityTotals compute_totals(const State& state, const ModelParams& params, const Grid& grid) {
    DensityTotals t;
    t.totals.resize(state.densities.size());
    for (std::size_t i = 0; i < state.densities.size(); ++i)
        t.totals[i] = integrate(grid, state.densities[i]);
    t.signal = feedback_signal(t.totals.back(), params.feedback_strength);
    return t;
}

State rhs(const State& state, const ModelParams& params, const Grid& grid) {
    require_structure(params, grid);
    if (static_cast<int>(state.densities.size()) != params.num_stages)
        throw std::invalid_argument("rhs: state has " + std::to_string(state.densities.size()) +
                                    " stages, params expect " + std::to_string(params.num_stages));
    const int M = params.num_stages;
    const int N = grid.num_points;
    const double s = feedback_signal(integrate(grid, state.densities[M - 1]),
                                     params.feedback_strength);
    const double inv_eps = 1.0 / params.epsilon;

    State out;
    out.time = state.time;
    out.densities.assign(state.densities.size(), std::vector<double>(N, 0.0));
    for (int k = 0; k < N; ++k) {
        double influx = 0.0;  // Q_{i-1} n_{i-1} from the previous stage
        for (int i = 1; i < M; ++i) {
            const double a = params.self_renewal[i - 1].values[k];
            const double p = params.proliferation[i - 1].values[k];
            const double n = state.densities[i - 1][k];
            out.densities[i - 1][k] = (influx + (2.0 * a * s - 1.0) * p * n) * inv_eps;
            influx = 2.0 * (1.0 - a * s) * p * n;
        }
        out.densities[M - 1][k] =
            (influx - params.clearance * state.densities[M - 1][k]) * inv_eps;
    }
    return out;
}

}  // namespace clonesim
