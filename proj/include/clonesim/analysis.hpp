#pragma once

#include <string>
#include <vector>

#include "clonesim/growth.hpp"
#include "clonesim/model.hpp"
#include "clonesim/solver.hpp"

namespace clonesim {

// ---------------------------------------------------------------------------
// Long-run selection diagnostics on the accumulated growth integrals.
//
// The selection statements are about late-time averages of dR_i/dt: for the
// winning clone the stage-1 rate tends to 0, while every dividing stage i >= 2
// has a strictly negative rate everywhere. Absolute R values retain a frozen
// transient offset (e.g. with flat self-renewal the signal pins at 1/(2a) and
// R_1 stops moving at its transient value), so rates over a trailing window
// are the meaningful quantity.
// ---------------------------------------------------------------------------

struct StageSignSummary {
    int stage = 0;              // dividing stage, 1-based
    double max_avg_rate = 0.0;  // max over x of (R(t1)-R(t0))/(t1-t0) [1/day]
    int argmax_index = -1;      // grid index attaining the max
};

struct SignReport {
    double t_start = 0.0;  // snapshot times actually used (nearest recorded)
    double t_end = 0.0;
    std::vector<std::vector<double>> avg_rates;  // [stage-1][grid index]
    std::vector<StageSignSummary> stages;
};

// Averages the growth-integral increments between the recorded entries nearest
// to t_start and t_end. Throws std::invalid_argument when the series has no
// two distinct entries spanning the window or t_end <= t_start.
SignReport check_theorem_signs(const std::vector<GrowthIntegrals>& series, double t_start,
                               double t_end);

// ---------------------------------------------------------------------------
// Spatial concentration of the density profiles.
// ---------------------------------------------------------------------------

struct WindowMass {
    double center = 0.0;
    double half_width = 0.0;
    double fraction = 0.0;  // stage mass inside |x - center| <= half_width over stage mass
    int cells = 0;          // grid points inside the window
};

struct StageConcentration {
    int stage = 0;
    std::vector<WindowMass> windows;
    int argmax_index = -1;  // grid index of the density maximum (earliest tie)
    double max_density = 0.0;
    bool full_support = false;  // min density >= support_threshold * max density
};

struct ConcentrationReport {
    double half_width = 0.0;
    std::vector<StageConcentration> stages;
};

// Window masses use the grid's own quadrature restricted to the window.
// half_width must be >= cell_width (a window narrower than one cell is
// meaningless); violations throw std::invalid_argument.
ConcentrationReport concentration_report(const State& state, const Grid& grid, double half_width,
                                         const std::vector<double>& centers,
                                         double support_threshold = 1e-12);

// Largest mass fraction any |x - c| <= half_width window achieves for the
// stage, scanning every grid point as a center. Near 1 under selection,
// about 2*half_width under a flat profile.
double max_window_fraction(const State& state, const Grid& grid, int stage, double half_width);

// Earliest index of the table maximum / all plateau-aware local maxima
// (value strictly above the previous entry and >= the next). Used to locate
// selected clones from a rate table or a density profile.
int table_argmax(const std::vector<double>& table);
std::vector<int> table_local_maxima(const std::vector<double>& table);

// ---------------------------------------------------------------------------
// A-priori bounds: constants from the rate-table extrema and the initial
// condition such that rho_i(t) <= ratio_bound_i * rho_{i+1}(t) and
// rho_i(t) <= density_bound_i hold along every trajectory.
// ---------------------------------------------------------------------------

struct BoundEstimates {
    // per dividing stage i = 1..M-1
    std::vector<double> sup_self_renewal;
    std::vector<double> sup_proliferation;
    std::vector<double> inf_proliferation;
    std::vector<double> growth_sup;     // 2*sup a_i*sup p_i, ceiling for self-renewal influx
    std::vector<double> outflux_inf;    // 2*(1-sup a_i)*inf p_i, floor for differentiation
    std::vector<double> ratio_bound;    // B_i with rho_i <= B_i rho_{i+1}
    std::vector<double> chain_bound;    // A_i = prod_{k=i}^{M-1} B_k, so rho_i <= A_i rho_M
    // per stage i = 1..M
    std::vector<double> density_bound;  // rho_bar_i
    // density_bound entries that rest on the constructive influx barrier
    // (stages 2..M-1, and anything downstream of them) rather than the
    // closed-form first/last-stage formulas alone
    std::vector<bool> constructed;
};

// Throws std::domain_error when any initial stage has zero sup-norm (the
// ratio constants divide by them) and std::invalid_argument on structural
// mismatch. Table extrema are taken over the tables as given, so the
// constants certify the discretized system in use.
BoundEstimates bound_estimates(const ModelParams& params, const State& initial);

struct BoundViolation {
    double time = 0.0;
    std::string kind;  // "ratio" or "absolute"
    int stage = 0;
    double value = 0.0;
    double bound = 0.0;
};

// Evaluates every recorded totals row of the trajectory against the bounds.
// An empty result certifies the run; violations are data, not errors.
std::vector<BoundViolation> check_bounds(const Trajectory& traj, const BoundEstimates& bounds);

// ---------------------------------------------------------------------------
// Positive equilibrium of the three-stage system at a fixed trait value.
// ---------------------------------------------------------------------------

struct SteadyStatePrediction {
    std::vector<double> totals;  // rho_1*, rho_2*, rho_3*
    double signal = 0.0;         // s* = 1/(2 a_1)
};

// Closed form for M = 3 evaluated at scalar rates (a_1, a_2, p_1, p_2):
//   s* = 1/(2 a_1), rho_3* = (2 a_1 - 1)/K,
//   rho_2* = d rho_3* / ((2 - a_2/a_1) p_2), rho_1* = (1 - a_2/a_1) p_2 rho_2* / p_1.
// Throws std::domain_error when a_1 <= 1/2 (no positive equilibrium).
SteadyStatePrediction steady_state_predictor(double a1, double a2, double p1, double p2,
                                             double feedback_strength, double clearance);

// Same, at grid point k of a three-stage parameter set (throws for M != 3).
SteadyStatePrediction steady_state_predictor(const ModelParams& params, int k);

// ---------------------------------------------------------------------------
// Oscillation detection on a stage-total time series.
// ---------------------------------------------------------------------------

enum class OscillationKind { Converged, Damped, Sustained };

struct OscillationReport {
    OscillationKind classification = OscillationKind::Converged;
    int num_peaks = 0;
    std::vector<double> peak_times;
    double mean_period = 0.0;  // days; 0 with fewer than 2 peaks
    double period_cv = 0.0;    // std/mean of inter-peak gaps
    double relative_amplitude = 0.0;  // (max - min)/mean over the window
};

// `series` is a uniformly sampled window (spacing dt, first sample at t0) of
// one stage total. Peaks are plateau-aware local maxima (earliest sample of a
// tie) kept when their prominence exceeds prominence_floor times the window's
// peak-to-peak range. Classification: relative amplitude below amplitude_floor
// means Converged; otherwise Sustained needs >= 5 peaks and a trailing-half
// amplitude at least half the leading-half amplitude, else Damped.
// Windows shorter than 200 samples throw std::invalid_argument.
OscillationReport detect_oscillations(const std::vector<double>& series, double dt, double t0,
                                      double prominence_floor = 0.01,
                                      double amplitude_floor = 0.05);

}  // namespace clonesim
