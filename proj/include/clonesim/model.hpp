#pragma once

#include <string>
#include <vector>

#include "clonesim/grid.hpp"

namespace clonesim {

// Tabulated trait-dependent rate, one value per grid point.
struct RateTable {
    std::vector<double> values;
};

// Hierarchical model with M maturation stages over a structured trait x in [0,1].
// Stages 1..M-1 divide at rate p_i(x) and self-renew with fraction a_i(x)*s;
// stage M is post-mitotic and cleared at rate d. The feedback signal
// s = 1/(1 + K*rho_M) couples everything through the mature-cell mass.
struct ModelParams {
    int num_stages = 0;                    // M >= 2
    std::vector<RateTable> self_renewal;   // a_1..a_{M-1}, values in (1/2, 1)
    std::vector<RateTable> proliferation;  // p_1..p_{M-1}, values in (0, 1) [1/day]
    double feedback_strength = 0.0;        // K > 0 [1/cells]
    double clearance = 0.0;                // d > 0 [1/day]
    double epsilon = 1.0;                  // time-scale factor; dynamics are scaled by 1/epsilon
};

// Densities n_i(x) for all stages at one instant. densities[i-1][k] is stage i
// at grid point k; units cells per unit trait.
struct State {
    std::vector<std::vector<double>> densities;
    double time = 0.0;
};

// Per-stage integrated masses rho_i and the feedback signal they induce.
struct DensityTotals {
    std::vector<double> totals;  // rho_1..rho_M [cells]
    double signal = 0.0;         // s = 1/(1 + K*rho_M)
};

// One broken model assumption. `hard` distinguishes violations that make the
// analysis invalid (rates outside their open ranges, nonpositive K/d) from
// advisory ones (the p_i <= p_{i+1} ordering used by the a-priori bounds).
struct AssumptionIssue {
    std::string what;
    int stage = 0;       // 1-based; 0 when not stage-specific
    int grid_index = -1; // -1 when not pointwise
    double value = 0.0;
    bool hard = true;
};

struct ValidationReport {
    std::vector<AssumptionIssue> violations;  // hard
    std::vector<AssumptionIssue> warnings;    // advisory
    bool ok() const { return violations.empty(); }
};

// Checks every pointwise assumption the analysis relies on:
//   1/2 < a_i(x) < 1,  0 < p_i(x) < 1,  K > 0,  d > 0,  epsilon > 0,
// and (advisory) p_i(x) <= p_{i+1}(x). Structural problems (wrong table
// count, table length != grid size, M < 2) throw std::invalid_argument
// instead of being reported, since no pointwise check is meaningful then.
ValidationReport validate_assumptions(const ModelParams& params, const Grid& grid);

// s = 1/(1 + K*rho_M). Throws std::domain_error for rho_M < 0.
double feedback_signal(double rho_M, double feedback_strength);

// Net self-renewal growth rate of stage i at grid point k:
//   P_i = (2*a_i(x)*s - 1) * p_i(x),  i in 1..M-1.
// Throws std::invalid_argument for i = M (the mature stage does not divide)
// or out-of-range i/k.
double net_growth(const ModelParams& params, int stage, int k, double signal);

// Differentiation outflux rate of stage i feeding stage i+1:
//   Q_i = 2*(1 - a_i(x)*s) * p_i(x),  i in 1..M-1. Same errors as net_growth.
double differentiation_outflux(const ModelParams& params, int stage, int k, double signal);

// rho_i = integral of n_i over [0,1] with the grid's quadrature; stage 1-based.
double total_density(const State& state, int stage, const Grid& grid);

// All stage totals plus the signal, each total summed pairwise.
DensityTotals compute_totals(const State& state, const ModelParams& params, const Grid& grid);

// Time derivative of the density system at `state` (the signal is computed
// once from rho_M and shared by every stage):
//   dn_1/dt     = P_1 n_1
//   dn_i/dt     = Q_{i-1} n_{i-1} + P_i n_i          (1 < i < M)
//   dn_M/dt     = Q_{M-1} n_{M-1} - d n_M
// all scaled by 1/epsilon. The returned State carries the input time.
State rhs(const State& state, const ModelParams& params, const Grid& grid);

}  // namespace clonesim
