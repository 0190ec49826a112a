#include "clonesim/calibration.hpp"

#include <cmath>
#include <stdexcept>

namespace clonesim {

double evaluate(const RateSpec& spec, double x) {
    if (const auto* lin = std::get_if<LinearSpec>(&spec)) return lin->alpha + lin->beta * x;
    const auto& g = std::get<GaussSumSpec>(spec);
    double acc = g.base;
    for (const auto& t : g.terms) {
        const double u = x - t.center;
        acc += t.amp * std::exp(-(u * u) / t.width);
    }
    return g.scale * acc;
}

RateTable sample(const RateSpec& spec, const Grid& grid) {
    RateTable tab;
    tab.values.resize(grid.num_points);
    for (int k = 0; k < grid.num_points; ++k) tab.values[k] = evaluate(spec, grid.points[k]);
    return tab;
}

State sample_initial(const InitialSpec& spec, const Grid& grid) {
    if (spec.amplitude.empty())
        throw std::invalid_argument("sample_initial: no stage amplitudes");
    if (!(spec.width > 0.0))
        throw std::invalid_argument("sample_initial: width must be > 0");
    State s;
    s.time = 0.0;
    s.densities.reserve(spec.amplitude.size());
    for (double amp : spec.amplitude) {
        if (!(amp >= 0.0)) throw std::invalid_argument("sample_initial: amplitude must be >= 0");
        std::vector<double> n(grid.num_points);
        for (int k = 0; k < grid.num_points; ++k) {
            const double x = grid.points[k];
            n[k] = amp * std::exp(-(x * x) / spec.width);
        }
        s.densities.push_back(std::move(n));
    }
    return s;
}

namespace {

void check_alignment(const std::string& name, const Grid& grid) {
    const bool ok = grid.layout == GridLayout::Midpoint ? grid.num_points % 20 == 0
                                                        : (grid.num_points - 1) % 20 == 0;
    if (!ok)
        throw std::invalid_argument(
            "build_preset(" + name + "): grid cannot align the rate optima (multiples of 1/20); "
            "midpoint layout needs num_points % 20 == 0, vertex (num_points - 1) % 20 == 0, got " +
            std::to_string(grid.num_points));
}

SolverConfig desk_defaults() {
    SolverConfig c;
    c.dt = 1e-2;
    c.horizon = 1e4;
    const long steps = 1000000;  // horizon/dt
    c.record_every = steps / 2000;
    c.integrator = Integrator::ForwardEuler;
    return c;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"cal1-single", "cal1-multi", "cal1-flat", "cal2-hopf"};
}

Preset build_preset(const std::string& name, const Grid& grid) {
    bool known = false;
    for (const auto& n : preset_names()) known = known || n == name;
    if (!known) {
        std::string names;
        for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
        throw std::invalid_argument("build_preset: unknown preset '" + name + "' (known: " +
                                    names + ")");
    }
    check_alignment(name, grid);

    Preset pr;
    pr.name = name;
    pr.solver = desk_defaults();
    pr.params.num_stages = 3;
    pr.params.epsilon = 1.0;
    pr.params.feedback_strength = 1.75e-9;

    const GaussSumSpec stem_single{1.0, -0.1135, {{1.0, 0.6, 9.68}}};
    const GaussSumSpec progenitor{1.0, 0.349, {{0.5, 0.4, 8.82}}};

    if (name == "cal1-single" || name == "cal1-multi" || name == "cal1-flat") {
        pr.params.clearance = 2.0;
        pr.proliferation_specs = {RateSpec{LinearSpec{0.1, 0.2}}, RateSpec{LinearSpec{0.4, 0.5}}};
        pr.initial_spec = {{2.5e7, 3.8e9, 1e8}, 0.2};
        pr.expected.progenitor_center = 0.4;
        if (name == "cal1-single") {
            pr.self_renewal_specs = {RateSpec{stem_single}, RateSpec{progenitor}};
            pr.expected.stem_centers = {0.6};
            pr.expected.regime = Regime::Equilibrium;
        } else if (name == "cal1-multi") {
            // four equal-height bumps; the constant offset is chosen so the
            // bump tops all sit at 0.85 + 0.1 (up to cross-bump leakage)
            const std::vector<double> centers = {0.35, 0.55, 0.7, 0.85};
            GaussSumSpec multi;
            multi.base = 0.85;
            for (double c : centers) {
                multi.base -= 0.1 * std::exp(-(c * c) / 0.0025);
                multi.terms.push_back({0.1, c, 0.0025});
            }
            pr.self_renewal_specs = {RateSpec{multi}, RateSpec{progenitor}};
            pr.expected.stem_centers = centers;
            pr.expected.regime = Regime::Equilibrium;
        } else {
            pr.self_renewal_specs = {RateSpec{GaussSumSpec{1.0, 0.88, {}}}, RateSpec{progenitor}};
            pr.expected.stem_centers = {};
            pr.expected.regime = Regime::NoSelection;
        }
    } else if (name == "cal2-hopf") {
        pr.params.clearance = 0.15;
        // maxima rescaled onto the known oscillatory operating point
        GaussSumSpec stem = stem_single;
        stem.scale = 0.7 / 0.8865;
        GaussSumSpec prog = progenitor;
        prog.scale = 0.6 / 0.8467;
        pr.self_renewal_specs = {RateSpec{stem}, RateSpec{prog}};
        pr.proliferation_specs = {RateSpec{LinearSpec{0.975, 0.025}},
                                  RateSpec{LinearSpec{0.04, 0.0333}}};
        pr.initial_spec = {{4.37e6, 5e8, 4.28e8}, 0.2};
        pr.expected.stem_centers = {0.6};
        pr.expected.progenitor_center = 0.4;
        pr.expected.regime = Regime::Oscillatory;
    }

    for (const auto& spec : pr.self_renewal_specs)
        pr.params.self_renewal.push_back(sample(spec, grid));
    for (const auto& spec : pr.proliferation_specs)
        pr.params.proliferation.push_back(sample(spec, grid));
    pr.initial = sample_initial(pr.initial_spec, grid);
    return pr;
}

}  // namespace clonesim
