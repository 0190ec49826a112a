// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Desk-scale discretization throughout: 200-cell midpoint grid, dt = 1e-2,
// horizon = 1e4 days, totals kept every step, snapshots every 500 steps.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "clonesim/analysis.hpp"
#include "clonesim/calibration.hpp"
#include "clonesim/grid.hpp"
#include "clonesim/model.hpp"
#include "clonesim/numerics.hpp"
#include "clonesim/ode_ref.hpp"
#include "clonesim/solver.hpp"

using namespace clonesim;

namespace {

struct Criterion {
    bool ok = false;
    std::string detail;
};

std::string pct(double x) { return fmt17(100.0 * x) + "%"; }

double rel_dev(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

Trajectory run_preset(const std::string& name, const Grid& grid) {
    const Preset pr = build_preset(name, grid);
    return simulate(pr.initial, pr.params, grid, pr.solver);
}

}  // namespace

int main() {
    std::vector<Criterion> crit(10);  // 1-based
    const Grid grid = make_grid(200, GridLayout::Midpoint);

    // ---- converging single-optimum run: criteria 1, 2, 6, and parts of 7-9
    const Preset single = build_preset("cal1-single", grid);
    const Trajectory run1 = simulate(single.initial, single.params, grid, single.solver);
    const State& final1 = run1.snapshots.back();
    const DensityTotals totals1 = run1.totals.at(run1.totals.size() - 1);

    long clamp_total = run1.meta.clamp_count;
    std::size_t bound_violations = 0;
    std::string bound_detail;
    {
        const BoundEstimates b = bound_estimates(single.params, single.initial);
        const auto v = check_bounds(run1, b);
        bound_violations += v.size();
        bound_detail += "cal1-single=" + std::to_string(v.size());
    }

    // criterion 1: concentration on the selected clone
    {
        const ConcentrationReport conc =
            concentration_report(final1, grid, 0.05, {0.6, 0.4}, 1e-12);
        const double f1 = conc.stages[0].windows[0].fraction;
        const double f2 = conc.stages[1].windows[0].fraction;
        const double f3 = conc.stages[2].windows[0].fraction;
        const double off = conc.stages[0].windows[1].fraction;
        const bool windows_ok = f1 >= 0.99 && f2 >= 0.99 && f3 >= 0.99;
        const bool off_ok = off <= 0.01;
        const bool time_ok = run1.meta.wall_seconds <= 60.0;
        crit[1].ok = windows_ok && off_ok && time_ok;
        crit[1].detail = "mass in |x-0.6|<=0.05 at t=1e4: stage1 " + fmt17(f1) + ", stage2 " +
                         fmt17(f2) + ", stage3 " + fmt17(f3) + " (need >= 0.99 each); |x-0.4| " +
                         fmt17(off) + " (<= 0.01); wall " + fmt17(run1.meta.wall_seconds) +
                         " s (<= 60)";
    }

    // criterion 2: analytic equilibrium oracle
    {
        const int kstar = table_argmax(single.params.self_renewal[0].values);
        const SteadyStatePrediction pred = steady_state_predictor(single.params, kstar);
        const double d3 = rel_dev(totals1.totals[2], 4.4171e8);
        const double d1 = rel_dev(totals1.totals[0], pred.totals[0]);
        const double d2 = rel_dev(totals1.totals[1], pred.totals[1]);
        crit[2].ok = d3 <= 0.02 && d1 <= 0.05 && d2 <= 0.05;
        crit[2].detail = "final rho_3 " + fmt17(totals1.totals[2]) + " vs 4.4171e8 (" + pct(d3) +
                         ", <= 2%); rho_1 dev " + pct(d1) + ", rho_2 dev " + pct(d2) +
                         " vs closed form at x = " + fmt17(grid.points[kstar]) + " (<= 5%)";
    }

    // criterion 6: growth-rate signs over the trailing quarter
    {
        const double t0 = run1.growth_series.front().time;
        const double t1 = run1.growth_series.back().time;
        const SignReport rep =
            check_theorem_signs(run1.growth_series, t1 - 0.25 * (t1 - t0), t1);
        const double r1 = rep.stages[0].max_avg_rate;
        const double r2 = rep.stages[1].max_avg_rate;
        const int kstar = table_argmax(single.params.self_renewal[0].values);
        const double analytic = (single.params.self_renewal[1].values[kstar] /
                                     single.params.self_renewal[0].values[kstar] -
                                 1.0) *
                                single.params.proliferation[1].values[kstar];
        const double measured = rep.avg_rates[1][kstar];
        const bool analytic_ok = std::fabs(measured - analytic) <= 0.2 * std::fabs(analytic);
        crit[6].ok = std::fabs(r1) <= 1e-3 && r2 <= -1e-2 && analytic_ok;
        crit[6].detail = "max avg dR_1/dt = " + fmt17(r1) + " (|.| <= 1e-3); max avg dR_2/dt = " +
                         fmt17(r2) + " (<= -1e-2); at the optimum " + fmt17(measured) +
                         " vs analytic " + fmt17(analytic) + " (20%)";
    }

    // criterion 8: discrete-clone reference reproduces the totals
    {
        auto [ostate, oparams] = ide_to_ode(single.initial, single.params, grid);
        const OdeTrajectory ode = ode_simulate(ostate, oparams, single.solver);
        double worst = 0.0;
        const bool shape = ode.totals.size() == run1.totals.size();
        if (shape)
            for (std::size_t r = 0; r < run1.totals.size(); ++r)
                for (int i = 0; i < 3; ++i) {
                    const double x = run1.totals.rho[r * 3 + i];
                    const double y = ode.totals.rho[r * 3 + i];
                    worst = std::max(worst, std::fabs(x - y) /
                                                std::max({std::fabs(x), std::fabs(y), 1.0}));
                }
        crit[8].ok = shape && worst <= 1e-10;
        crit[8].detail = "max relative stage-total gap over 1e6 steps = " + fmt17(worst) +
                         " (<= 1e-10)";
    }

    // criterion 9: determinism, positivity, first-order step-size response
    {
        bool deterministic;
        {
            const Trajectory again = simulate(single.initial, single.params, grid, single.solver);
            deterministic = again.totals.rho == run1.totals.rho &&
                            again.totals.signal == run1.totals.signal &&
                            again.snapshots.back().densities == final1.densities &&
                            again.growth_series.back().R == run1.growth_series.back().R;
        }

        auto final_totals_at = [&](double dt) {
            SolverConfig cfg = single.solver;
            cfg.dt = dt;
            cfg.record_every = 1L << 40;  // keep only the endpoints
            const Trajectory t = simulate(single.initial, single.params, grid, cfg);
            return t.totals.at(t.totals.size() - 1).totals;
        };
        const std::vector<double> base = totals1.totals;
        std::vector<double> half, quarter;
        {
            half = final_totals_at(5e-3);
            quarter = final_totals_at(2.5e-3);
        }
        double d1 = 0.0, d2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            d1 += (base[i] - half[i]) * (base[i] - half[i]);
            d2 += (half[i] - quarter[i]) * (half[i] - quarter[i]);
        }
        const double ratio = std::sqrt(d1 / d2);

        crit[9].ok = deterministic && ratio >= 1.5 && ratio <= 3.0;
        crit[9].detail = std::string("rerun bit-identical: ") +
                         (deterministic ? "yes" : "NO") +
                         "; halving dt shrinks the final-state change by " + fmt17(ratio) +
                         " (in [1.5, 3])";
        // clamp census is finished after the remaining presets below
    }

    // ---- competing-optima run: criterion 3
    {
        const Preset multi = build_preset("cal1-multi", grid);
        const Trajectory run3 = simulate(multi.initial, multi.params, grid, multi.solver);
        clamp_total += run3.meta.clamp_count;
        const BoundEstimates b = bound_estimates(multi.params, multi.initial);
        const auto v = check_bounds(run3, b);
        bound_violations += v.size();
        bound_detail += " cal1-multi=" + std::to_string(v.size());

        const ConcentrationReport conc = concentration_report(
            run3.snapshots.back(), grid, 0.03, {0.35, 0.55, 0.7, 0.85}, 1e-12);
        double sum = 0.0, least = 1.0;
        std::string windows;
        for (const auto& w : conc.stages[0].windows) {
            sum += w.fraction;
            least = std::min(least, w.fraction);
            windows += (windows.empty() ? "" : " ") + fmt17(w.fraction);
        }
        crit[3].ok = sum >= 0.95 && least >= 0.01;
        crit[3].detail = "stage-1 mass in the four |x-c|<=0.03 windows: " + windows +
                         "; combined " + fmt17(sum) + " (>= 0.95), smallest " + fmt17(least) +
                         " (>= 0.01)";
    }

    // ---- flat run: criterion 4
    {
        const Preset flat = build_preset("cal1-flat", grid);
        const Trajectory run4 = simulate(flat.initial, flat.params, grid, flat.solver);
        clamp_total += run4.meta.clamp_count;
        const BoundEstimates b = bound_estimates(flat.params, flat.initial);
        const auto v = check_bounds(run4, b);
        bound_violations += v.size();
        bound_detail += " cal1-flat=" + std::to_string(v.size());

        const State& fin = run4.snapshots.back();
        const ConcentrationReport conc = concentration_report(fin, grid, 0.05, {}, 1e-12);
        const bool support = conc.stages[0].full_support;
        const double best = max_window_fraction(fin, grid, 1, 0.05);
        crit[4].ok = support && best <= 0.5;
        crit[4].detail = std::string("stage-1 support spans the grid: ") +
                         (support ? "yes" : "NO") + "; best delta = 0.05 window holds " +
                         fmt17(best) + " (<= 0.5)";
    }

    // ---- slow-clearance run: criterion 5
    {
        const Preset hopf = build_preset("cal2-hopf", grid);
        const Trajectory run5 = simulate(hopf.initial, hopf.params, grid, hopf.solver);
        clamp_total += run5.meta.clamp_count;
        const BoundEstimates b = bound_estimates(hopf.params, hopf.initial);
        const auto v = check_bounds(run5, b);
        bound_violations += v.size();
        bound_detail += " cal2-hopf=" + std::to_string(v.size());

        const std::size_t n = run5.totals.size();
        std::vector<double> tail;
        tail.reserve(n - n / 2);
        for (std::size_t r = n / 2; r < n; ++r) tail.push_back(run5.totals.rho[r * 3 + 2]);
        const OscillationReport osc =
            detect_oscillations(tail, hopf.solver.dt, run5.totals.times[n / 2]);
        const ConcentrationReport conc =
            concentration_report(run5.snapshots.back(), grid, 0.05, {0.6}, 1e-12);
        const double f1 = conc.stages[0].windows[0].fraction;
        crit[5].ok = osc.classification == OscillationKind::Sustained && osc.num_peaks >= 5 &&
                     osc.relative_amplitude >= 0.05 && f1 >= 0.95;
        crit[5].detail = "rho_3 over [5e3, 1e4]: " +
                         std::string(osc.classification == OscillationKind::Sustained
                                         ? "sustained"
                                         : "NOT sustained") +
                         ", " + std::to_string(osc.num_peaks) + " peaks, period " +
                         fmt17(osc.mean_period) + " d, relative amplitude " +
                         fmt17(osc.relative_amplitude) + " (>= 0.05); stage-1 mass at the " +
                         "optimum " + fmt17(f1) + " (>= 0.95)";
    }

    // criterion 7: a-priori bound certificates across all four parameterizations
    crit[7].ok = bound_violations == 0;
    crit[7].detail = "violations " + bound_detail + " (all must be 0)";

    // fold the clamp census into criterion 9's verdict
    crit[9].ok = crit[9].ok && clamp_total == 0;
    crit[9].detail += "; clamped negatives across all presets: " + std::to_string(clamp_total);

    int failures = 0;
    for (int i = 1; i <= 9; ++i) {
        std::cout << "criterion " << i << (crit[i].ok ? " PASS: " : " FAIL: ")
                  << crit[i].detail << "\n";
        if (!crit[i].ok) ++failures;
    }
    std::cout << (failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << " (" << failures
              << " of 9 failed)\n";
    return failures == 0 ? 0 : 1;
}
