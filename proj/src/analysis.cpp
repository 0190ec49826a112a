#include "clonesim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "clonesim/numerics.hpp"

namespace clonesim {

namespace {

std::size_t nearest_index(const std::vector<GrowthIntegrals>& series, double t) {
    std::size_t best = 0;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < series.size(); ++j) {
        const double d = std::fabs(series[j].time - t);
        if (d < dist) {
            dist = d;
            best = j;
        }
    }
    return best;
}

}  // namespace

SignReport check_theorem_signs(const std::vector<GrowthIntegrals>& series, double t_start,
                               double t_end) {
    if (series.size() < 2)
        throw std::invalid_argument("check_theorem_signs: need at least two recorded entries");
    if (!(t_end > t_start))
        throw std::invalid_argument("check_theorem_signs: window must have t_end > t_start");
    const std::size_t j0 = nearest_index(series, t_start);
    const std::size_t j1 = nearest_index(series, t_end);
    if (j0 == j1)
        throw std::invalid_argument("check_theorem_signs: window collapses onto one entry "
                                    "(recorded times too coarse for [" + fmt17(t_start) + ", " +
                                    fmt17(t_end) + "])");
    const GrowthIntegrals& g0 = series[std::min(j0, j1)];
    const GrowthIntegrals& g1 = series[std::max(j0, j1)];
    const double span = g1.time - g0.time;
    if (!(span > 0.0))
        throw std::invalid_argument("check_theorem_signs: selected entries have equal times");

    SignReport rep;
    rep.t_start = g0.time;
    rep.t_end = g1.time;
    const int M = g0.num_stages;
    const int N = g0.num_points;
    rep.avg_rates.assign(M - 1, std::vector<double>(N, 0.0));
    for (int i = 1; i < M; ++i) {
        StageSignSummary sum;
        sum.stage = i;
        sum.max_avg_rate = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < N; ++k) {
            const double rate = (g1.at(i, k) - g0.at(i, k)) / span;
            rep.avg_rates[i - 1][k] = rate;
            if (rate > sum.max_avg_rate) {
                sum.max_avg_rate = rate;
                sum.argmax_index = k;
            }
        }
        rep.stages.push_back(sum);
    }
    return rep;
}

ConcentrationReport concentration_report(const State& state, const Grid& grid, double half_width,
                                         const std::vector<double>& centers,
                                         double support_threshold) {
    if (!(half_width >= grid.cell_width))
        throw std::invalid_argument("concentration_report: half_width " + fmt17(half_width) +
                                    " is narrower than one grid cell " + fmt17(grid.cell_width));
    ConcentrationReport rep;
    rep.half_width = half_width;
    for (std::size_t i = 0; i < state.densities.size(); ++i) {
        const auto& n = state.densities[i];
        if (static_cast<int>(n.size()) != grid.num_points)
            throw std::invalid_argument("concentration_report: density length mismatch");
        StageConcentration sc;
        sc.stage = static_cast<int>(i) + 1;
        sc.argmax_index = table_argmax(n);
        sc.max_density = n[sc.argmax_index];
        const double total = integrate(grid, n);
        double min_density = *std::min_element(n.begin(), n.end());
        sc.full_support = min_density >= support_threshold * sc.max_density;
        for (double c : centers) {
            WindowMass wm;
            wm.center = c;
            wm.half_width = half_width;
            std::vector<double> inside;
            inside.reserve(n.size());
            for (int k = 0; k < grid.num_points; ++k)
                if (std::fabs(grid.points[k] - c) <= half_width + 1e-12) inside.push_back(n[k]);
            wm.cells = static_cast<int>(inside.size());
            // window mass with the grid's cell weight; vertex end corrections
            // do not apply inside an interior window, so plain sum * width
            wm.fraction = total > 0.0 ? grid.cell_width * pairwise_sum(inside) / total : 0.0;
            sc.windows.push_back(wm);
        }
        rep.stages.push_back(std::move(sc));
    }
    return rep;
}

double max_window_fraction(const State& state, const Grid& grid, int stage, double half_width) {
    if (!(half_width >= grid.cell_width))
        throw std::invalid_argument("max_window_fraction: half_width narrower than one cell");
    if (stage < 1 || stage > static_cast<int>(state.densities.size()))
        throw std::invalid_argument("max_window_fraction: stage out of range");
    const auto& n = state.densities[stage - 1];
    const int N = grid.num_points;
    const double total = pairwise_sum(n);
    if (!(total > 0.0)) return 0.0;
    const int m = static_cast<int>((half_width + 1e-12) / grid.cell_width);
    double best = 0.0;
    double window = 0.0;
    // sliding sum over the up-to-(2m+1)-cell window centered at each point
    for (int k = 0; k < std::min(N, m + 1); ++k) window += n[k];
    for (int c = 0; c < N; ++c) {
        best = std::max(best, window);
        const int enter = c + m + 1;
        const int leave = c - m;
        if (enter < N) window += n[enter];
        if (leave >= 0) window -= n[leave];
    }
    return best / total;
}

int table_argmax(const std::vector<double>& table) {
    if (table.empty()) throw std::invalid_argument("table_argmax: empty table");
    return static_cast<int>(std::max_element(table.begin(), table.end()) - table.begin());
}

std::vector<int> table_local_maxima(const std::vector<double>& table) {
    std::vector<int> out;
    const int n = static_cast<int>(table.size());
    if (n == 0) throw std::invalid_argument("table_local_maxima: empty table");
    if (n == 1) return {0};
    for (int k = 0; k < n; ++k) {
        const bool rises = k == 0 ? true : table[k] > table[k - 1];
        const bool falls = k == n - 1 ? true : table[k] >= table[k + 1];
        if (rises && falls) out.push_back(k);
    }
    return out;
}

BoundEstimates bound_estimates(const ModelParams& params, const State& initial) {
    const int M = params.num_stages;
    if (M < 2 || static_cast<int>(params.self_renewal.size()) != M - 1 ||
        static_cast<int>(params.proliferation.size()) != M - 1)
        throw std::invalid_argument("bound_estimates: malformed parameter set");
    if (static_cast<int>(initial.densities.size()) != M)
        throw std::invalid_argument("bound_estimates: initial state has wrong stage count");

    BoundEstimates b;
    for (int i = 0; i < M - 1; ++i) {
        const auto& a = params.self_renewal[i].values;
        const auto& p = params.proliferation[i].values;
        if (a.empty() || p.empty())
            throw std::invalid_argument("bound_estimates: empty rate table");
        b.sup_self_renewal.push_back(*std::max_element(a.begin(), a.end()));
        b.sup_proliferation.push_back(*std::max_element(p.begin(), p.end()));
        b.inf_proliferation.push_back(*std::min_element(p.begin(), p.end()));
    }
    std::vector<double> ninf(M);
    for (int i = 0; i < M; ++i) {
        if (initial.densities[i].empty())
            throw std::invalid_argument("bound_estimates: empty initial stage");
        ninf[i] = *std::max_element(initial.densities[i].begin(), initial.densities[i].end());
        if (!(ninf[i] > 0.0))
            throw std::domain_error("bound_estimates: initial stage " + std::to_string(i + 1) +
                                    " has zero sup-norm; the ratio constants divide by it");
    }

    for (int i = 0; i < M - 1; ++i) {
        b.growth_sup.push_back(2.0 * b.sup_self_renewal[i] * b.sup_proliferation[i]);
        b.outflux_inf.push_back(2.0 * (1.0 - b.sup_self_renewal[i]) * b.inf_proliferation[i]);
        if (!(b.outflux_inf[i] > 0.0))
            throw std::domain_error("bound_estimates: differentiation floor vanishes at stage " +
                                    std::to_string(i + 1) + " (sup a = 1?)");
    }

    // ratio chain: each stage against the next, decay pressure from below
    for (int i = 0; i < M - 1; ++i) {
        const double downstream = i + 1 < M - 1 ? b.sup_proliferation[i + 1] : params.clearance;
        const double influx = i > 0 ? 2.0 * b.sup_proliferation[i - 1] * b.ratio_bound[i - 1] : 0.0;
        const double dyn = (influx + b.growth_sup[i] + downstream) / b.outflux_inf[i];
        b.ratio_bound.push_back(std::max(ninf[i] / ninf[i + 1], dyn));
    }
    b.chain_bound.assign(M - 1, 1.0);
    for (int i = M - 2; i >= 0; --i)
        b.chain_bound[i] = b.ratio_bound[i] * (i + 1 < M - 1 ? b.chain_bound[i + 1] : 1.0);

    b.density_bound.resize(M);
    b.constructed.assign(M, false);
    // first stage: closed form from rho_1 <= A_1 rho_M, so the signal itself
    // throttles growth once rho_1 passes (A_1/K)(2 sup a_1 - 1)
    b.density_bound[0] = std::max(ninf[0],
                                  (b.chain_bound[0] / params.feedback_strength) *
                                      (2.0 * b.sup_self_renewal[0] - 1.0));
    // middle stages: same comparison argument with the upstream influx bound
    // folded in; the positive root of p_inf*kappa*r^2 - (F*kappa + p_inf*(2a-1))*r - F
    // is a barrier for dr/dt <= F + (2a/(1+kappa r) - 1) p_inf r
    for (int i = 1; i < M - 1; ++i) {
        const double F = 2.0 * b.sup_proliferation[i - 1] * b.density_bound[i - 1];
        const double kappa = params.feedback_strength / b.chain_bound[i];
        const double pinf = b.inf_proliferation[i];
        const double lin = F * kappa + pinf * (2.0 * b.sup_self_renewal[i] - 1.0);
        const double root =
            (lin + std::sqrt(lin * lin + 4.0 * pinf * kappa * F)) / (2.0 * pinf * kappa);
        b.density_bound[i] = std::max(ninf[i], root);
        b.constructed[i] = true;
    }
    // last stage: clearance balances the bounded influx
    b.density_bound[M - 1] = std::max(
        ninf[M - 1],
        (2.0 / params.clearance) * b.sup_proliferation[M - 2] * b.density_bound[M - 2]);
    b.constructed[M - 1] = M > 2 ? b.constructed[M - 2] : false;
    return b;
}

std::vector<BoundViolation> check_bounds(const Trajectory& traj, const BoundEstimates& bounds) {
    std::vector<BoundViolation> out;
    const int M = traj.totals.num_stages;
    if (static_cast<int>(bounds.density_bound.size()) != M)
        throw std::invalid_argument("check_bounds: bounds/trajectory stage mismatch");
    for (std::size_t row = 0; row < traj.totals.size(); ++row) {
        const double t = traj.totals.times[row];
        const double* rho = traj.totals.rho.data() + row * M;
        for (int i = 0; i < M - 1; ++i) {
            if (rho[i] > bounds.ratio_bound[i] * rho[i + 1])
                out.push_back({t, "ratio", i + 1, rho[i], bounds.ratio_bound[i] * rho[i + 1]});
        }
        for (int i = 0; i < M; ++i) {
            if (rho[i] > bounds.density_bound[i])
                out.push_back({t, "absolute", i + 1, rho[i], bounds.density_bound[i]});
        }
    }
    return out;
}

SteadyStatePrediction steady_state_predictor(double a1, double a2, double p1, double p2,
                                             double feedback_strength, double clearance) {
    if (!(a1 > 0.5))
        throw std::domain_error("steady_state_predictor: a_1 = " + fmt17(a1) +
                                " <= 1/2 admits no positive equilibrium");
    if (!(p1 > 0.0) || !(p2 > 0.0) || !(feedback_strength > 0.0) || !(clearance > 0.0))
        throw std::domain_error("steady_state_predictor: rates and constants must be positive");
    SteadyStatePrediction out;
    out.signal = 1.0 / (2.0 * a1);
    const double ratio = a2 / a1;
    const double rho3 = (2.0 * a1 - 1.0) / feedback_strength;
    const double rho2 = clearance * rho3 / ((2.0 - ratio) * p2);
    const double rho1 = (1.0 - ratio) * p2 * rho2 / p1;
    out.totals = {rho1, rho2, rho3};
    return out;
}

SteadyStatePrediction steady_state_predictor(const ModelParams& params, int k) {
    if (params.num_stages != 3)
        throw std::invalid_argument("steady_state_predictor: closed form requires 3 stages");
    const auto& a1 = params.self_renewal[0].values;
    if (k < 0 || k >= static_cast<int>(a1.size()))
        throw std::invalid_argument("steady_state_predictor: grid index out of range");
    return steady_state_predictor(a1[k], params.self_renewal[1].values[k],
                                  params.proliferation[0].values[k],
                                  params.proliferation[1].values[k], params.feedback_strength,
                                  params.clearance);
}

OscillationReport detect_oscillations(const std::vector<double>& series, double dt, double t0,
                                      double prominence_floor, double amplitude_floor) {
    if (series.size() < 200)
        throw std::invalid_argument("detect_oscillations: window too short (" +
                                    std::to_string(series.size()) + " samples, need >= 200)");
    if (!(dt > 0.0)) throw std::invalid_argument("detect_oscillations: dt must be > 0");
    for (double v : series)
        if (!std::isfinite(v))
            throw std::invalid_argument("detect_oscillations: non-finite sample");

    const double vmax = *std::max_element(series.begin(), series.end());
    const double vmin = *std::min_element(series.begin(), series.end());
    const double range = vmax - vmin;
    const double mean = pairwise_sum(series) / static_cast<double>(series.size());
    if (!(mean > 0.0))
        throw std::domain_error("detect_oscillations: window mean must be positive");

    OscillationReport rep;
    rep.relative_amplitude = range / mean;

    // plateau-aware strict maxima; the first sample of a tie run qualifies
    std::vector<std::size_t> cand;
    for (std::size_t i = 1; i + 1 < series.size(); ++i)
        if (series[i] > series[i - 1] && series[i] >= series[i + 1]) cand.push_back(i);

    // prominence against the lower of the valleys to the neighboring candidates
    std::vector<std::size_t> peaks;
    for (std::size_t c = 0; c < cand.size(); ++c) {
        const std::size_t lo = c == 0 ? 0 : cand[c - 1];
        const std::size_t hi = c + 1 == cand.size() ? series.size() - 1 : cand[c + 1];
        const double left_min = *std::min_element(series.begin() + lo, series.begin() + cand[c]);
        const double right_min =
            *std::min_element(series.begin() + cand[c] + 1, series.begin() + hi + 1);
        const double prominence = series[cand[c]] - std::max(left_min, right_min);
        if (prominence >= prominence_floor * range) peaks.push_back(cand[c]);
    }
    rep.num_peaks = static_cast<int>(peaks.size());
    for (std::size_t i : peaks) rep.peak_times.push_back(t0 + static_cast<double>(i) * dt);

    if (peaks.size() >= 2) {
        std::vector<double> gaps(peaks.size() - 1);
        for (std::size_t j = 0; j + 1 < peaks.size(); ++j)
            gaps[j] = rep.peak_times[j + 1] - rep.peak_times[j];
        rep.mean_period = pairwise_sum(gaps) / static_cast<double>(gaps.size());
        double var = 0.0;
        for (double g : gaps) var += (g - rep.mean_period) * (g - rep.mean_period);
        var /= static_cast<double>(gaps.size());
        rep.period_cv = rep.mean_period > 0.0 ? std::sqrt(var) / rep.mean_period : 0.0;
    }

    if (rep.relative_amplitude < amplitude_floor) {
        rep.classification = OscillationKind::Converged;
        return rep;
    }
    const std::size_t half = series.size() / 2;
    const auto minmax_lead = std::minmax_element(series.begin(), series.begin() + half);
    const auto minmax_trail = std::minmax_element(series.begin() + half, series.end());
    const double lead_amp = *minmax_lead.second - *minmax_lead.first;
    const double trail_amp = *minmax_trail.second - *minmax_trail.first;
    const bool holds_up = trail_amp >= 0.5 * lead_amp;
    rep.classification = (rep.num_peaks >= 5 && holds_up) ? OscillationKind::Sustained
                                                          : OscillationKind::Damped;
    return rep;
}

}  // namespace clonesim
