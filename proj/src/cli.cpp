#include "clonesim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <vector>

#include "clonesim/analysis.hpp"
#include "clonesim/csv.hpp"
#include "clonesim/numerics.hpp"
#include "clonesim/ode_ref.hpp"

namespace clonesim {

namespace {

namespace fs = std::filesystem;

struct RunOutput {
    Preset preset;
    Grid grid;
    SolverConfig solver;
    Trajectory traj;
};

RunOutput execute(const RunConfig& cfg) {
    RunOutput out;
    out.grid = make_grid(cfg.grid_points, cfg.layout);
    out.preset = materialize(cfg, out.grid);
    out.solver = effective_solver_config(cfg);
    out.traj = simulate(out.preset.initial, out.preset.params, out.grid, out.solver);
    return out;
}

bool table_is_flat(const std::vector<double>& t) {
    const double hi = *std::max_element(t.begin(), t.end());
    const double lo = *std::min_element(t.begin(), t.end());
    return hi - lo <= 1e-12 * std::max(std::fabs(hi), 1.0);
}

std::string join_points(const Grid& grid, const std::vector<int>& idx) {
    std::string out;
    for (int k : idx) out += (out.empty() ? "" : ",") + fmt17(grid.points[k]);
    return out;
}

// trait locations of the self-renewal optima, as plotted marker lines
std::map<std::string, std::string> heatmap_markers(const ModelParams& params, const Grid& grid) {
    std::map<std::string, std::string> m;
    const auto& a1 = params.self_renewal.front().values;
    if (!table_is_flat(a1)) m["marker_black"] = join_points(grid, table_local_maxima(a1));
    if (params.num_stages >= 3) {
        const auto& a2 = params.self_renewal[1].values;
        if (!table_is_flat(a2)) m["marker_white"] = fmt17(grid.points[table_argmax(a2)]);
    }
    return m;
}

std::vector<double> window_centers(const Preset& preset) {
    std::vector<double> c = preset.expected.stem_centers;
    if (preset.expected.progenitor_center >= 0.0)
        c.push_back(preset.expected.progenitor_center);
    return c;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Equilibrium: return "equilibrium";
        case Regime::Oscillatory: return "oscillatory";
        default: return "no-selection";
    }
}

const char* kind_name(OscillationKind k) {
    switch (k) {
        case OscillationKind::Converged: return "converged";
        case OscillationKind::Damped: return "damped";
        default: return "sustained";
    }
}

// oscillation diagnostics over the trailing half of the run, stage M totals
std::unique_ptr<OscillationReport> tail_oscillations(const RunConfig& cfg,
                                                     const Trajectory& traj) {
    const std::size_t n = traj.totals.size();
    if (n < 400) return nullptr;
    const std::size_t begin = n / 2;
    const int M = traj.totals.num_stages;
    std::vector<double> series;
    series.reserve(n - begin);
    for (std::size_t r = begin; r < n; ++r) series.push_back(traj.totals.rho[r * M + (M - 1)]);
    auto rep = std::make_unique<OscillationReport>(
        detect_oscillations(series, traj.meta.config.dt, traj.totals.times[begin],
                            cfg.prominence_floor, cfg.amplitude_floor));
    return rep;
}

void write_report(const std::string& path, const RunConfig& cfg, const RunOutput& run) {
    const Preset& pr = run.preset;
    const Grid& grid = run.grid;
    const Trajectory& traj = run.traj;
    const int M = pr.params.num_stages;
    const State& final_state = traj.snapshots.back();
    const DensityTotals final_totals = traj.totals.at(traj.totals.size() - 1);

    const auto centers = window_centers(pr);
    const ConcentrationReport conc =
        concentration_report(final_state, grid, cfg.delta, centers, cfg.support_threshold);
    const BoundEstimates bounds = bound_estimates(pr.params, pr.initial);
    const auto violations = check_bounds(traj, bounds);
    const auto osc = tail_oscillations(cfg, traj);

    // trailing-quarter growth rates
    std::unique_ptr<SignReport> signs;
    if (traj.growth_series.size() >= 2) {
        const double t0 = traj.growth_series.front().time;
        const double t1 = traj.growth_series.back().time;
        if (t1 > t0)
            signs = std::make_unique<SignReport>(
                check_theorem_signs(traj.growth_series, t1 - 0.25 * (t1 - t0), t1));
    }

    // equilibrium prediction at the stage-1 self-renewal argmax
    std::unique_ptr<SteadyStatePrediction> pred;
    int pred_index = -1;
    if (M == 3) {
        pred_index = table_argmax(pr.params.self_renewal.front().values);
        try {
            pred = std::make_unique<SteadyStatePrediction>(
                steady_state_predictor(pr.params, pred_index));
        } catch (const std::domain_error&) {
            pred.reset();  // a_1 <= 1/2 at the argmax: no positive equilibrium
        }
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");

    out << "simulation report\n";
    out << "=================\n";
    out << "parameterization: " << pr.name << " (expected regime: "
        << regime_name(pr.expected.regime) << ")\n";
    out << "grid: " << grid.num_points << " "
        << (grid.layout == GridLayout::Midpoint ? "midpoint" : "vertex")
        << " cells, dx = " << fmt17(grid.cell_width) << "\n";
    out << "solver: " << (run.solver.integrator == Integrator::ForwardEuler ? "euler" : "rk4")
        << ", dt = " << fmt17(run.solver.dt) << ", horizon = " << fmt17(run.solver.horizon)
        << " (" << traj.meta.total_steps << " steps), record_every = " << run.solver.record_every
        << "\n";
    out << "wall: " << traj.meta.wall_seconds << " s, clamped negatives: "
        << traj.meta.clamp_count << "\n";
    if (!traj.meta.warnings.empty()) {
        out << "warnings:\n";
        for (const auto& w : traj.meta.warnings) out << "  - " << w << "\n";
    }

    out << "\ntotals at t = " << fmt17(final_state.time) << ":\n";
    for (int i = 1; i <= M; ++i)
        out << "  rho_" << i << " = " << fmt17(final_totals.totals[i - 1]) << "\n";
    out << "  signal = " << fmt17(final_totals.signal) << "\n";

    if (pred) {
        out << "\nequilibrium prediction at x = " << fmt17(grid.points[pred_index])
            << " (stage-1 self-renewal argmax):\n";
        for (int i = 1; i <= 3; ++i) {
            const double star = pred->totals[i - 1];
            const double got = final_totals.totals[i - 1];
            const double dev = star != 0.0 ? (got - star) / star : 0.0;
            out << "  rho_" << i << "* = " << fmt17(star) << "  (run deviates "
                << fmt17(100.0 * dev) << "%)\n";
        }
        out << "  signal* = " << fmt17(pred->signal) << "\n";
    }

    out << "\nconcentration at final time (delta = " << fmt17(cfg.delta) << "):\n";
    for (const auto& sc : conc.stages) {
        out << "  stage " << sc.stage << ": argmax x = " << fmt17(grid.points[sc.argmax_index])
            << ", max window fraction = "
            << fmt17(max_window_fraction(final_state, grid, sc.stage, cfg.delta))
            << ", full support = " << (sc.full_support ? "true" : "false") << "\n";
        for (const auto& w : sc.windows)
            out << "    window |x - " << fmt17(w.center) << "| <= " << fmt17(w.half_width)
                << ": fraction = " << fmt17(w.fraction) << " (" << w.cells << " cells)\n";
    }

    out << "\noscillation diagnostics on rho_" << M << ", trailing half:\n";
    if (osc) {
        out << "  classification = " << kind_name(osc->classification) << ", peaks = "
            << osc->num_peaks << ", mean period = " << fmt17(osc->mean_period)
            << " d (cv " << fmt17(osc->period_cv) << "), relative amplitude = "
            << fmt17(osc->relative_amplitude) << "\n";
    } else {
        out << "  (window too short)\n";
    }

    out << "\na-priori bounds from table extrema and initial data:\n";
    for (int i = 1; i < M; ++i)
        out << "  B_" << i << " = " << fmt17(bounds.ratio_bound[i - 1]) << "\n";
    for (int i = 1; i <= M; ++i)
        out << "  rho_bar_" << i << " = " << fmt17(bounds.density_bound[i - 1])
            << (bounds.constructed[i - 1] ? "  (constructed barrier)" : "") << "\n";
    out << "  violations along the run: " << violations.size() << "\n";
    for (std::size_t v = 0; v < violations.size() && v < 10; ++v)
        out << "    t = " << fmt17(violations[v].time) << " " << violations[v].kind << " stage "
            << violations[v].stage << ": " << fmt17(violations[v].value) << " > "
            << fmt17(violations[v].bound) << "\n";

    if (signs) {
        out << "\naverage growth rates over [" << fmt17(signs->t_start) << ", "
            << fmt17(signs->t_end) << "]:\n";
        for (const auto& st : signs->stages)
            out << "  stage " << st.stage << ": max avg dR/dt = " << fmt17(st.max_avg_rate)
                << " /day at x = " << fmt17(grid.points[st.argmax_index]) << "\n";
    }

    // machine section: stable key=value lines
    out << "\n[machine]\n";
    out << "preset = " << pr.name << "\n";
    out << "grid_points = " << grid.num_points << "\n";
    out << "grid_layout = " << (grid.layout == GridLayout::Midpoint ? "midpoint" : "vertex")
        << "\n";
    out << "dt = " << fmt17(run.solver.dt) << "\n";
    out << "horizon = " << fmt17(run.solver.horizon) << "\n";
    out << "steps = " << traj.meta.total_steps << "\n";
    out << "record_every = " << run.solver.record_every << "\n";
    out << "wall_seconds = " << fmt17(traj.meta.wall_seconds) << "\n";
    out << "clamp_count = " << traj.meta.clamp_count << "\n";
    out << "final_time = " << fmt17(final_state.time) << "\n";
    for (int i = 1; i <= M; ++i)
        out << "final_rho_" << i << " = " << fmt17(final_totals.totals[i - 1]) << "\n";
    out << "final_signal = " << fmt17(final_totals.signal) << "\n";
    if (pred) {
        for (int i = 1; i <= 3; ++i)
            out << "rho_" << i << "_star = " << fmt17(pred->totals[i - 1]) << "\n";
        out << "signal_star = " << fmt17(pred->signal) << "\n";
    }
    for (const auto& sc : conc.stages) {
        out << "argmax_stage" << sc.stage << "_x = " << fmt17(grid.points[sc.argmax_index])
            << "\n";
        out << "full_support_stage" << sc.stage << " = " << (sc.full_support ? "true" : "false")
            << "\n";
        out << "max_window_fraction_stage" << sc.stage << " = "
            << fmt17(max_window_fraction(final_state, grid, sc.stage, cfg.delta)) << "\n";
        for (const auto& w : sc.windows)
            out << "window_stage" << sc.stage << "_at_" << fmt17(w.center) << " = "
                << fmt17(w.fraction) << "\n";
    }
    if (osc) {
        out << "oscillation_stage" << M << " = " << kind_name(osc->classification) << "\n";
        out << "num_peaks = " << osc->num_peaks << "\n";
        out << "mean_period_days = " << fmt17(osc->mean_period) << "\n";
        out << "period_cv = " << fmt17(osc->period_cv) << "\n";
        out << "relative_amplitude = " << fmt17(osc->relative_amplitude) << "\n";
    }
    for (int i = 1; i < M; ++i)
        out << "bound_ratio_B" << i << " = " << fmt17(bounds.ratio_bound[i - 1]) << "\n";
    for (int i = 1; i <= M; ++i)
        out << "bound_rho_bar_" << i << " = " << fmt17(bounds.density_bound[i - 1]) << "\n";
    out << "bound_violations = " << violations.size() << "\n";
    if (signs) {
        out << "growth_window_start = " << fmt17(signs->t_start) << "\n";
        out << "growth_window_end = " << fmt17(signs->t_end) << "\n";
        for (const auto& st : signs->stages) {
            out << "growth_rate_stage" << st.stage << "_max = " << fmt17(st.max_avg_rate) << "\n";
            out << "growth_rate_stage" << st.stage << "_argmax_x = "
                << fmt17(grid.points[st.argmax_index]) << "\n";
        }
    }
}

void write_run_files(const RunConfig& cfg, const RunOutput& run, std::ostream& log,
                     bool heatmaps, bool totals, const std::string& totals_name) {
    fs::create_directories(cfg.out_dir);
    if (totals) {
        const std::string path = (fs::path(cfg.out_dir) / totals_name).string();
        write_totals_csv(path, run.traj.totals,
                         cfg.full_totals ? 1 : run.solver.record_every);
        log << "wrote " << path << "\n";
    }
    if (heatmaps) {
        const auto markers = heatmap_markers(run.preset.params, run.grid);
        for (int i = 1; i <= run.preset.params.num_stages; ++i) {
            const std::string path =
                (fs::path(cfg.out_dir) / ("heatmap_stage" + std::to_string(i) + ".csv")).string();
            write_heatmap_csv(path, run.traj, run.grid, i, true, markers);
            log << "wrote " << path << "\n";
        }
    }
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
    RunOutput run = execute(cfg);
    write_run_files(cfg, run, log, true, true, "totals.csv");
    const std::string report = (fs::path(cfg.out_dir) / "report.txt").string();
    write_report(report, cfg, run);
    log << "wrote " << report << "\n";
    const DensityTotals fin = run.traj.totals.at(run.traj.totals.size() - 1);
    log << "final totals:";
    for (double v : fin.totals) log << " " << fmt17(v);
    log << " signal " << fmt17(fin.signal) << "\n";
    return kExitOk;
}

int cmd_reproduce(const std::string& figure, const RunConfig& base, std::ostream& log) {
    struct FigureSpec {
        std::vector<std::string> presets;
        bool heatmaps;
        bool totals_only;
    };
    static const std::map<std::string, FigureSpec> figures = {
        {"fig2", {{"cal1-single"}, true, false}},
        {"fig3", {{"cal1-multi"}, true, false}},
        {"fig4", {{"cal1-flat"}, true, false}},
        {"fig5", {{"cal1-single", "cal1-multi", "cal1-flat"}, false, true}},
        {"fig6", {{"cal2-hopf"}, true, false}},
        {"fig7", {{"cal2-hopf"}, false, true}},
    };
    const auto it = figures.find(figure);
    if (it == figures.end())
        throw std::invalid_argument("unknown figure id '" + figure +
                                    "' (valid: fig2, fig3, fig4, fig5, fig6, fig7)");
    const FigureSpec& spec = it->second;

    for (const auto& name : spec.presets) {
        RunConfig cfg = base;
        cfg.preset = name;
        cfg.model.reset();
        log << figure << ": running " << name << "\n";
        RunOutput run = execute(cfg);
        const bool multi = spec.presets.size() > 1;
        const std::string totals_name =
            multi || spec.totals_only ? "totals_" + name + ".csv" : "totals.csv";
        write_run_files(cfg, run, log, spec.heatmaps, true, totals_name);
        const std::string report_name = multi ? "report_" + name + ".txt" : "report.txt";
        const std::string report = (fs::path(cfg.out_dir) / report_name).string();
        write_report(report, cfg, run);
        log << "wrote " << report << "\n";
    }
    return kExitOk;
}

namespace {

struct VerifyContext {
    const RunConfig& base;
    std::ostream& log;
    int failures = 0;
    std::map<std::string, std::shared_ptr<RunOutput>> cache;

    explicit VerifyContext(const RunConfig& cfg, std::ostream& out) : base(cfg), log(out) {}

    std::shared_ptr<RunOutput> run(const std::string& preset) {
        auto it = cache.find(preset);
        if (it != cache.end()) return it->second;
        RunConfig cfg = base;
        cfg.preset = preset;
        cfg.model.reset();
        auto out = std::make_shared<RunOutput>(execute(cfg));
        cache.emplace(preset, out);
        return out;
    }

    void check(const std::string& name, bool ok, const std::string& detail) {
        log << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
        if (!ok) ++failures;
    }
};

void verify_bounds(VerifyContext& ctx) {
    for (const auto& name : preset_names()) {
        auto run = ctx.run(name);
        const BoundEstimates b = bound_estimates(run->preset.params, run->preset.initial);
        const auto violations = check_bounds(run->traj, b);
        std::ostringstream detail;
        detail << "violations=" << violations.size();
        for (std::size_t i = 0; i < b.ratio_bound.size(); ++i)
            detail << " B" << i + 1 << "=" << fmt17(b.ratio_bound[i]);
        if (!violations.empty())
            detail << " first at t=" << fmt17(violations.front().time) << " ("
                   << violations.front().kind << " stage " << violations.front().stage << ")";
        ctx.check("bounds/" + name, violations.empty(), detail.str());
    }
}

void verify_theorem(VerifyContext& ctx) {
    // converging parameterization: trailing-quarter averages
    {
        auto run = ctx.run("cal1-single");
        const double t0 = run->traj.growth_series.front().time;
        const double t1 = run->traj.growth_series.back().time;
        const SignReport rep =
            check_theorem_signs(run->traj.growth_series, t1 - 0.25 * (t1 - t0), t1);
        const double r1 = rep.stages[0].max_avg_rate;
        const double r2 = rep.stages[1].max_avg_rate;
        ctx.check("theorem/cal1-single/stage1-rate-vanishes", std::fabs(r1) <= 1e-3,
                  "max avg dR_1/dt = " + fmt17(r1) + " /day (|.| <= 1e-3)");
        ctx.check("theorem/cal1-single/stage2-rate-negative", r2 <= -1e-2,
                  "max avg dR_2/dt = " + fmt17(r2) + " /day (<= -1e-2)");
        // analytic rate at the selected clone: (a_2/a_1 - 1) p_2 there
        const int kstar = table_argmax(run->preset.params.self_renewal[0].values);
        const double a1 = run->preset.params.self_renewal[0].values[kstar];
        const double a2 = run->preset.params.self_renewal[1].values[kstar];
        const double p2 = run->preset.params.proliferation[1].values[kstar];
        const double analytic = (a2 / a1 - 1.0) * p2;
        const double measured = rep.avg_rates[1][kstar];
        const bool ok = std::fabs(measured - analytic) <= 0.2 * std::fabs(analytic);
        ctx.check("theorem/cal1-single/stage2-rate-analytic", ok,
                  "measured " + fmt17(measured) + " vs analytic " + fmt17(analytic) +
                      " at x = " + fmt17(run->grid.points[kstar]) + " (20%)");
    }
    // oscillatory parameterization: average over whole detected periods
    {
        auto run = ctx.run("cal2-hopf");
        const auto& totals = run->traj.totals;
        const std::size_t n = totals.size();
        const std::size_t begin = n / 2;
        const int M = totals.num_stages;
        std::vector<double> tail;
        tail.reserve(n - begin);
        for (std::size_t r = begin; r < n; ++r) tail.push_back(totals.rho[r * M + (M - 1)]);
        const OscillationReport osc = detect_oscillations(
            tail, run->solver.dt, totals.times[begin], ctx.base.prominence_floor,
            ctx.base.amplitude_floor);
        double t0 = totals.times[begin];
        double t1 = totals.times[n - 1];
        if (osc.num_peaks >= 2) {  // snap to whole cycles to kill partial-period bias
            t0 = osc.peak_times.front();
            t1 = osc.peak_times.back();
        }
        const SignReport rep = check_theorem_signs(run->traj.growth_series, t0, t1);
        const double r1 = rep.stages[0].max_avg_rate;
        const double r2 = rep.stages[1].max_avg_rate;
        ctx.check("theorem/cal2-hopf/stage1-rate-vanishes", std::fabs(r1) <= 1e-3,
                  "max avg dR_1/dt = " + fmt17(r1) + " /day over " +
                      std::to_string(osc.num_peaks) + " peak-to-peak cycles (|.| <= 1e-3)");
        ctx.check("theorem/cal2-hopf/stage2-rate-negative", r2 <= -1e-3,
                  "max avg dR_2/dt = " + fmt17(r2) + " /day (<= -1e-3)");
    }
}

void verify_ode_equivalence(VerifyContext& ctx) {
    auto run = ctx.run("cal1-single");
    auto [ostate, oparams] = ide_to_ode(run->preset.initial, run->preset.params, run->grid);
    const OdeTrajectory ode = ode_simulate(ostate, oparams, run->solver);
    const TotalsSeries& a = run->traj.totals;
    const TotalsSeries& b = ode.totals;
    double worst = 0.0;
    double worst_t = 0.0;
    bool shape_ok = a.size() == b.size() && a.num_stages == b.num_stages;
    if (shape_ok) {
        for (std::size_t r = 0; r < a.size(); ++r) {
            for (int i = 0; i < a.num_stages; ++i) {
                const double x = a.rho[r * a.num_stages + i];
                const double y = b.rho[r * b.num_stages + i];
                const double rel = std::fabs(x - y) / std::max({std::fabs(x), std::fabs(y), 1.0});
                if (rel > worst) {
                    worst = rel;
                    worst_t = a.times[r];
                }
            }
        }
    }
    ctx.check("ode-equivalence/cal1-single", shape_ok && worst <= 1e-10,
              "max relative totals gap = " + fmt17(worst) + " at t = " + fmt17(worst_t) +
                  " (<= 1e-10)");
}

}  // namespace

int cmd_verify(const std::string& suite, const RunConfig& cfg, std::ostream& log) {
    if (suite != "bounds" && suite != "theorem" && suite != "ode-equivalence" && suite != "all")
        throw std::invalid_argument("unknown suite '" + suite +
                                    "' (valid: bounds, theorem, ode-equivalence, all)");
    VerifyContext ctx(cfg, log);
    if (suite == "bounds" || suite == "all") verify_bounds(ctx);
    if (suite == "theorem" || suite == "all") verify_theorem(ctx);
    if (suite == "ode-equivalence" || suite == "all") verify_ode_equivalence(ctx);
    log << (ctx.failures == 0 ? "VERIFY PASS" : "VERIFY FAIL") << " (" << ctx.failures
        << " failed)\n";
    return ctx.failures == 0 ? kExitOk : kExitVerifyFail;
}

}  // namespace clonesim

// CLI11 only touches this translation unit
#include "CLI11.hpp"

namespace clonesim {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"structured-population clonal selection simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, figure, suite = "all";
    int grid_points = 0;
    double dt = 0.0, horizon = 0.0;
    bool paper_fidelity = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "run configuration file (key = value lines)");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--grid", grid_points, "grid points override");
        cmd->add_option("--dt", dt, "time step override [days]");
        cmd->add_option("--horizon", horizon, "integration horizon override [days]");
        cmd->add_flag("--paper-fidelity", paper_fidelity,
                      "full-resolution profile (1000 cells, dt = 1e-3)");
    };

    CLI::App* sim = app.add_subcommand("simulate", "run one simulation and write CSV + report");
    add_common(sim);
    CLI::App* rep = app.add_subcommand("reproduce", "regenerate the data behind one figure");
    add_common(rep);
    rep->add_option("--figure", figure, "figure id: fig2..fig7")->required();
    CLI::App* ver = app.add_subcommand("verify", "run verification suites");
    add_common(ver);
    ver->add_option("--suite", suite, "bounds | theorem | ode-equivalence | all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        RunConfig cfg;
        bool have_cfg = false;
        if (!config_path.empty()) {
            cfg = load_config_file(config_path);
            have_cfg = true;
        }
        if (paper_fidelity) cfg.paper_fidelity = true;
        if (cfg.paper_fidelity) {  // explicit --grid / --dt below still win
            cfg.grid_points = 1000;
            cfg.solver.dt = 1e-3;
        }
        if (grid_points > 0) cfg.grid_points = grid_points;
        if (dt > 0.0) cfg.solver.dt = dt;
        if (horizon > 0.0) cfg.solver.horizon = horizon;
        if (!out_dir.empty()) cfg.out_dir = out_dir;

        if (sim->parsed()) {
            if (!have_cfg)
                throw std::invalid_argument("simulate needs --config (preset or inline model)");
            return cmd_simulate(cfg, out);
        }
        if (rep->parsed()) {
            if (have_cfg && cfg.model)
                throw std::invalid_argument("reproduce uses fixed presets; inline models are "
                                            "not accepted here");
            return cmd_reproduce(figure, cfg, out);
        }
        return cmd_verify(suite, cfg, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace clonesim
