#pragma once

#include <string>
#include <variant>
#include <vector>

#include "clonesim/model.hpp"
#include "clonesim/solver.hpp"

namespace clonesim {

// Functional forms for trait-dependent rates. Presets and inline config files
// share these so a table sampled from a preset and one sampled from the
// equivalent config text agree bitwise.

struct LinearSpec {
    double alpha = 0.0;  // value at x = 0
    double beta = 0.0;   // slope

    bool operator==(const LinearSpec&) const = default;
};

struct GaussTerm {
    double amp = 1.0;
    double center = 0.0;
    double width = 1.0;  // amp * exp(-(x-center)^2 / width); width is squared scale

    bool operator==(const GaussTerm&) const = default;
};

struct GaussSumSpec {
    double scale = 1.0;  // scale * (base + sum of terms)
    double base = 0.0;
    std::vector<GaussTerm> terms;

    bool operator==(const GaussSumSpec&) const = default;
};

using RateSpec = std::variant<LinearSpec, GaussSumSpec>;

double evaluate(const RateSpec& spec, double x);
RateTable sample(const RateSpec& spec, const Grid& grid);

// Shared initial profile n_i(0, x) = amplitude_i * exp(-x^2 / width).
struct InitialSpec {
    std::vector<double> amplitude;  // one per stage [cells]
    double width = 0.2;

    bool operator==(const InitialSpec&) const = default;
};

State sample_initial(const InitialSpec& spec, const Grid& grid);

enum class Regime { Equilibrium, Oscillatory, NoSelection };

// What the parameterization is expected to do, for reports and verification.
struct PresetExpected {
    std::vector<double> stem_centers;  // trait values where a_1 peaks (selection targets)
    double progenitor_center = -1.0;   // trait value where a_2 peaks; < 0 when untracked
    Regime regime = Regime::Equilibrium;
};

struct Preset {
    std::string name;
    ModelParams params;  // tables sampled on the build grid
    InitialSpec initial_spec;
    State initial;
    SolverConfig solver;  // desk-scale defaults: dt 1e-2, horizon 1e4
    PresetExpected expected;
    std::vector<RateSpec> self_renewal_specs;   // the analytic forms behind params
    std::vector<RateSpec> proliferation_specs;
};

// Built-in three-stage parameterizations:
//   cal1-single  one self-renewal optimum at x = 0.6; converges to equilibrium
//   cal1-multi   four near-equal optima at x = 0.35, 0.55, 0.7, 0.85
//   cal1-flat    constant a_1 = 0.88; no selection pressure at all
//   cal2-hopf    slow clearance variant; sustained oscillations, optimum x = 0.6
// The grid must align the optima with cell boundaries so they sit symmetric
// between samples: midpoint layout needs num_points % 20 == 0, vertex layout
// (num_points - 1) % 20 == 0. Unknown names and misaligned grids throw
// std::invalid_argument.
Preset build_preset(const std::string& name, const Grid& grid);

std::vector<std::string> preset_names();

}  // namespace clonesim
