#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "clonesim/analysis.hpp"
#include "clonesim/calibration.hpp"
#include "clonesim/model.hpp"
#include "clonesim/solver.hpp"

using namespace clonesim;

namespace {

GrowthIntegrals at_time(double t, const std::vector<std::vector<double>>& rows) {
    GrowthIntegrals g = make_growth_integrals(static_cast<int>(rows.size()) + 1,
                                              static_cast<int>(rows.front().size()));
    g.time = t;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < rows[i].size(); ++k)
            g.at(static_cast<int>(i) + 1, static_cast<int>(k)) = rows[i][k];
    return g;
}

}  // namespace

TEST_CASE("windowed growth-rate signs on a synthetic series") {
    std::vector<GrowthIntegrals> series;
    series.push_back(at_time(0.0, {{0, 0, 0, 0}, {0, 0, 0, 0}}));
    series.push_back(at_time(5.0, {{0.5, -1, 0, 1.5}, {-0.5, -1, -1.5, -0.25}}));
    series.push_back(at_time(10.0, {{1, -2, 0, 3}, {-1, -2, -3, -0.5}}));

    const SignReport rep = check_theorem_signs(series, 0.0, 10.0);
    CHECK(rep.t_start == 0.0);
    CHECK(rep.t_end == 10.0);
    REQUIRE(rep.stages.size() == 2);
    CHECK(rep.stages[0].max_avg_rate == doctest::Approx(0.3));
    CHECK(rep.stages[0].argmax_index == 3);
    CHECK(rep.stages[1].max_avg_rate == doctest::Approx(-0.05));
    CHECK(rep.stages[1].argmax_index == 3);
    CHECK(rep.avg_rates[0][1] == doctest::Approx(-0.2));

    SUBCASE("window endpoints snap to the nearest recorded entries") {
        const SignReport snapped = check_theorem_signs(series, 4.2, 11.7);
        CHECK(snapped.t_start == 5.0);
        CHECK(snapped.t_end == 10.0);
        CHECK(snapped.stages[0].max_avg_rate == doctest::Approx((3 - 1.5) / 5.0));
    }

    SUBCASE("degenerate windows are errors") {
        CHECK_THROWS_AS(check_theorem_signs(series, 9.9, 10.1), std::invalid_argument);
        CHECK_THROWS_AS(check_theorem_signs(series, 10.0, 5.0), std::invalid_argument);
        std::vector<GrowthIntegrals> one(series.begin(), series.begin() + 1);
        CHECK_THROWS_AS(check_theorem_signs(one, 0.0, 10.0), std::invalid_argument);
    }
}

TEST_CASE("concentration windows and support flags") {
    const Grid grid = make_grid(100, GridLayout::Midpoint);
    State st;
    st.densities.assign(2, std::vector<double>(100, 0.0));
    st.densities[0][60] = 7.0;                       // point mass at x = 0.605
    st.densities[1].assign(100, 3.0);                // uniform profile

    const ConcentrationReport rep =
        concentration_report(st, grid, 0.05, {0.6, 0.1}, 1e-12);
    REQUIRE(rep.stages.size() == 2);

    const StageConcentration& spike = rep.stages[0];
    CHECK(spike.argmax_index == 60);
    CHECK(spike.max_density == 7.0);
    CHECK_FALSE(spike.full_support);
    REQUIRE(spike.windows.size() == 2);
    CHECK(spike.windows[0].fraction == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spike.windows[0].cells == 10);
    CHECK(spike.windows[1].fraction == 0.0);

    const StageConcentration& flat = rep.stages[1];
    CHECK(flat.full_support);
    CHECK(flat.argmax_index == 0);  // earliest tie
    CHECK(flat.windows[0].fraction == doctest::Approx(0.1).epsilon(1e-12));

    CHECK(max_window_fraction(st, grid, 1, 0.05) == doctest::Approx(1.0).epsilon(1e-12));
    // interior window of the uniform profile holds 2*delta + one cell
    CHECK(max_window_fraction(st, grid, 2, 0.05) == doctest::Approx(0.11).epsilon(1e-12));

    SUBCASE("sub-cell windows are rejected") {
        CHECK_THROWS_AS(concentration_report(st, grid, 0.001, {0.5}, 1e-12),
                        std::invalid_argument);
        CHECK_THROWS_AS(max_window_fraction(st, grid, 1, 0.001), std::invalid_argument);
        CHECK_THROWS_AS(max_window_fraction(st, grid, 5, 0.05), std::invalid_argument);
    }
}

TEST_CASE("table argmax and plateau-aware local maxima") {
    CHECK(table_argmax({1.0, 3.0, 2.0}) == 1);
    CHECK(table_argmax({1.0, 5.0, 5.0}) == 1);  // earliest tie
    CHECK_THROWS_AS(table_argmax({}), std::invalid_argument);

    CHECK(table_local_maxima({1, 3, 2}) == std::vector<int>{1});
    CHECK(table_local_maxima({1, 3, 3, 2}) == std::vector<int>{1});   // plateau start
    CHECK(table_local_maxima({1, 2, 3}) == std::vector<int>{2});      // boundary ramp
    CHECK(table_local_maxima({3, 2, 1}) == std::vector<int>{0});
    CHECK(table_local_maxima({1, 4, 2, 5, 3}) == std::vector<int>{1, 3});
    CHECK(table_local_maxima({7.0}) == std::vector<int>{0});
}

TEST_CASE("a-priori bound constants on endpoint-sampled rate tables") {
    const Grid grid = make_grid(201, GridLayout::Vertex);
    const Preset pr = build_preset("cal1-single", grid);
    const BoundEstimates b = bound_estimates(pr.params, pr.initial);

    CHECK(b.sup_self_renewal[0] == doctest::Approx(0.8865).epsilon(1e-15));
    CHECK(b.sup_proliferation[0] == doctest::Approx(0.30000000000000004).epsilon(1e-15));
    CHECK(b.inf_proliferation[0] == 0.1);
    CHECK(b.growth_sup[0] == doctest::Approx(0.5319).epsilon(1e-12));
    CHECK(b.outflux_inf[0] == doctest::Approx(0.022700000000000012).epsilon(1e-12));
    CHECK(b.growth_sup[1] == doctest::Approx(1.5282).epsilon(1e-12));
    CHECK(b.outflux_inf[1] == doctest::Approx(0.12080000000000002).epsilon(1e-12));

    CHECK(b.ratio_bound[0] == doctest::Approx(63.079295154185).epsilon(1e-12));
    CHECK(b.ratio_bound[1] == doctest::Approx(342.51471103072015).epsilon(1e-12));
    CHECK(b.chain_bound[0] == doctest::Approx(21605.58655175718).epsilon(1e-12));
    CHECK(b.chain_bound[1] == b.ratio_bound[1]);

    CHECK(b.density_bound[0] == doctest::Approx(9543496231147.6).epsilon(1e-12));
    CHECK(b.density_bound[1] == doctest::Approx(14643198010852.86).epsilon(1e-12));
    CHECK(b.density_bound[2] == doctest::Approx(13178878209767.574).epsilon(1e-12));
    REQUIRE(b.constructed.size() == 3);
    CHECK_FALSE(b.constructed[0]);
    CHECK(b.constructed[1]);
    CHECK(b.constructed[2]);

    SUBCASE("cell-centered sampling misses the optimum and shrinks the constants") {
        const Grid mid = make_grid(200, GridLayout::Midpoint);
        const Preset pm = build_preset("cal1-single", mid);
        const BoundEstimates bm = bound_estimates(pm.params, pm.initial);
        CHECK(bm.ratio_bound[0] == doctest::Approx(62.671443657651608).epsilon(1e-12));
        CHECK(bm.ratio_bound[1] == doctest::Approx(338.89274210050138).epsilon(1e-12));
        CHECK(bm.ratio_bound[0] < b.ratio_bound[0]);
    }

    SUBCASE("degenerate inputs") {
        State zero = pr.initial;
        zero.densities[1].assign(zero.densities[1].size(), 0.0);
        CHECK_THROWS_AS(bound_estimates(pr.params, zero), std::domain_error);

        ModelParams saturated = pr.params;
        saturated.self_renewal[0].values[5] = 1.0;  // differentiation floor vanishes
        CHECK_THROWS_AS(bound_estimates(saturated, pr.initial), std::domain_error);

        ModelParams lop = pr.params;
        lop.proliferation.pop_back();
        CHECK_THROWS_AS(bound_estimates(lop, pr.initial), std::invalid_argument);
    }
}

TEST_CASE("bound certificates: clean run passes, shrunken constants flag every row") {
    const Grid grid = make_grid(80, GridLayout::Midpoint);
    const Preset pr = build_preset("cal1-single", grid);
    SolverConfig cfg;
    cfg.dt = 1e-2;
    cfg.horizon = 50.0;
    cfg.record_every = 500;
    const Trajectory traj = simulate(pr.initial, pr.params, grid, cfg);

    const BoundEstimates honest = bound_estimates(pr.params, pr.initial);
    CHECK(check_bounds(traj, honest).empty());

    BoundEstimates tight = honest;
    tight.ratio_bound.assign(2, 0.0);  // nothing satisfies rho_i <= 0 * rho_{i+1}
    const auto flags = check_bounds(traj, tight);
    CHECK(flags.size() == 2 * traj.totals.size());
    CHECK(flags.front().kind == "ratio");
    CHECK(flags.front().time == 0.0);

    tight = honest;
    tight.density_bound[2] = 1.0;
    const auto caps = check_bounds(traj, tight);
    CHECK(caps.size() == traj.totals.size());
    CHECK(caps.front().kind == "absolute");
    CHECK(caps.front().stage == 3);

    BoundEstimates wrong = honest;
    wrong.density_bound.pop_back();
    CHECK_THROWS_AS(check_bounds(traj, wrong), std::invalid_argument);
}

TEST_CASE("positive equilibrium of the three-stage closed form") {
    const Grid grid = make_grid(201, GridLayout::Vertex);
    const Preset pr = build_preset("cal1-single", grid);
    const SteadyStatePrediction pred = steady_state_predictor(pr.params, 120);  // x = 0.6

    CHECK(pred.signal == doctest::Approx(0.5640157924421884).epsilon(1e-15));
    CHECK(pred.totals[2] == doctest::Approx(441714285.7142857).epsilon(1e-14));
    CHECK(pred.totals[1] == doctest::Approx(1207864138.5835657).epsilon(1e-13));
    CHECK(pred.totals[0] == doctest::Approx(172380338.27307016).epsilon(1e-13));

    SUBCASE("no selection pressure: flat stem self-renewal at 0.88") {
        const SteadyStatePrediction flat =
            steady_state_predictor(0.88, 0.849, 0.2, 0.7, 1.75e-9, 2.0);
        CHECK(flat.totals[2] == doctest::Approx(434285714.2857143).epsilon(1e-14));
        CHECK(flat.signal == doctest::Approx(1.0 / 1.76).epsilon(1e-15));
    }

    SUBCASE("prediction zeroes the dynamics of the matching one-clone system") {
        const Grid g1 = make_grid(1, GridLayout::Midpoint);
        ModelParams mp;
        mp.num_stages = 3;
        mp.self_renewal = {RateTable{{pr.params.self_renewal[0].values[120]}},
                           RateTable{{pr.params.self_renewal[1].values[120]}}};
        mp.proliferation = {RateTable{{pr.params.proliferation[0].values[120]}},
                            RateTable{{pr.params.proliferation[1].values[120]}}};
        mp.feedback_strength = pr.params.feedback_strength;
        mp.clearance = pr.params.clearance;
        State st;
        st.densities = {{pred.totals[0]}, {pred.totals[1]}, {pred.totals[2]}};
        const State d = rhs(st, mp, g1);
        for (int i = 0; i < 3; ++i)
            CHECK(std::fabs(d.densities[i][0]) <= 1e-9 * st.densities[i][0]);
    }

    SUBCASE("domain") {
        CHECK_THROWS_AS(steady_state_predictor(0.5, 0.8, 0.2, 0.7, 1.75e-9, 2.0),
                        std::domain_error);
        CHECK_THROWS_AS(steady_state_predictor(0.9, 0.8, 0.0, 0.7, 1.75e-9, 2.0),
                        std::domain_error);
        CHECK_THROWS_AS(steady_state_predictor(0.9, 0.8, 0.2, 0.7, 0.0, 2.0),
                        std::domain_error);
        ModelParams two = pr.params;
        two.num_stages = 2;
        two.self_renewal.pop_back();
        two.proliferation.pop_back();
        CHECK_THROWS_AS(steady_state_predictor(two, 0), std::invalid_argument);
        CHECK_THROWS_AS(steady_state_predictor(pr.params, 500), std::invalid_argument);
    }
}

TEST_CASE("oscillation detection on synthetic stage totals") {
    SUBCASE("constant series converges") {
        const std::vector<double> flat(300, 5.0);
        const OscillationReport rep = detect_oscillations(flat, 0.5, 100.0);
        CHECK(rep.classification == OscillationKind::Converged);
        CHECK(rep.num_peaks == 0);
        CHECK(rep.relative_amplitude == 0.0);
    }

    SUBCASE("steady sine wave is sustained with the right period") {
        std::vector<double> wave(1000);
        for (int i = 0; i < 1000; ++i) {
            const double t = 0.5 * i;
            wave[i] = 1.0 + 0.2 * std::sin(2.0 * M_PI * t / 50.0);
        }
        const OscillationReport rep = detect_oscillations(wave, 0.5, 0.0);
        CHECK(rep.classification == OscillationKind::Sustained);
        CHECK(rep.num_peaks >= 9);
        CHECK(rep.mean_period == doctest::Approx(50.0).epsilon(0.02));
        CHECK(rep.period_cv < 0.05);
        CHECK(rep.relative_amplitude == doctest::Approx(0.4).epsilon(0.01));
        CHECK(rep.peak_times.front() == doctest::Approx(12.5).epsilon(0.05));
    }

    SUBCASE("decaying ringing is damped, not sustained") {
        std::vector<double> ring(2000);
        for (int i = 0; i < 2000; ++i) {
            const double t = 0.25 * i;
            ring[i] = 1.0 + 0.3 * std::exp(-t / 50.0) * std::sin(2.0 * M_PI * t / 25.0);
        }
        const OscillationReport rep = detect_oscillations(ring, 0.25, 0.0);
        CHECK(rep.classification == OscillationKind::Damped);
        CHECK(rep.num_peaks >= 5);
    }

    SUBCASE("prominence floor drops cosmetic ripples") {
        // one tall triangle, then a bump worth 0.5% of the range
        std::vector<double> series(400, 0.0);
        for (int i = 0; i <= 100; ++i) series[i] = 0.1 * i;             // up to 10
        for (int i = 101; i <= 200; ++i) series[i] = 10.0 - 0.1 * (i - 100);
        for (int i = 290; i <= 300; ++i)
            series[i] = 0.05 * (1.0 - std::fabs(i - 295) / 5.0);
        for (auto& v : series) v += 1.0;  // keep the mean positive
        const OscillationReport rep = detect_oscillations(series, 1.0, 0.0);
        CHECK(rep.num_peaks == 1);
        CHECK(rep.peak_times[0] == 100.0);
    }

    SUBCASE("input validation") {
        const std::vector<double> tiny(199, 1.0);
        CHECK_THROWS_AS(detect_oscillations(tiny, 1.0, 0.0), std::invalid_argument);
        const std::vector<double> ok(300, 1.0);
        CHECK_THROWS_AS(detect_oscillations(ok, 0.0, 0.0), std::invalid_argument);
        std::vector<double> bad(300, 1.0);
        bad[7] = std::nan("");
        CHECK_THROWS_AS(detect_oscillations(bad, 1.0, 0.0), std::invalid_argument);
        const std::vector<double> negative(300, -1.0);
        CHECK_THROWS_AS(detect_oscillations(negative, 1.0, 0.0), std::domain_error);
    }
}
