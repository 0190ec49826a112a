#pragma once

#include <utility>
#include <vector>

#include "clonesim/model.hpp"
#include "clonesim/solver.hpp"

namespace clonesim {

// Finitely many competing clones, no trait continuum: the reference system the
// structured model discretizes onto. counts[i-1][j] is stage i of clone j in
// cells (not density), and the feedback uses Z_M = sum_j counts[M-1][j].
struct OdeParams {
    int num_stages = 0;
    int num_clones = 0;
    std::vector<std::vector<double>> self_renewal;   // [stage i-1][clone j], i = 1..M-1
    std::vector<std::vector<double>> proliferation;  // [stage i-1][clone j]
    double feedback_strength = 0.0;
    double clearance = 0.0;
    double epsilon = 1.0;
};

struct OdeState {
    std::vector<std::vector<double>> counts;  // [stage i-1][clone j]
    double time = 0.0;
};

struct OdeTrajectory {
    std::vector<double> times;        // recorded (decimated) times
    std::vector<OdeState> snapshots;  // at `times`
    TotalsSeries totals;              // per-stage totals Z_i and signal, every step
    TrajectoryMeta meta;
};

// Stage totals Z_i (pairwise sum over clones, ascending index) and the signal.
DensityTotals ode_totals(const OdeState& state, const OdeParams& params);

// dN_1j = P_1j N_1j ; dN_ij = Q_{i-1,j} N_{i-1,j} + P_ij N_ij ; dN_Mj = Q - d N_Mj,
// signal computed once from Z_M, everything scaled by 1/epsilon.
OdeState ode_rhs(const OdeState& state, const OdeParams& params);

// Forward Euler integration with the same stepping, recording and negativity
// policy as the density solver. Only Integrator::ForwardEuler is supported
// here (the reference exists to pin the Euler bridge); RK4 requests throw.
OdeTrajectory ode_simulate(const OdeState& initial, const OdeParams& params,
                           const SolverConfig& config);

// Reinterprets each midpoint cell as one discrete clone: N_ij = n_i(x_j) * dx,
// rates copied from the tables, K and d unchanged. Vertex grids are rejected
// (their end cells carry half weight, so no single cell mass is faithful).
std::pair<OdeState, OdeParams> ide_to_ode(const State& state, const ModelParams& params,
                                          const Grid& grid);

}  // namespace clonesim
