#pragma once

#include <vector>

#include "clonesim/model.hpp"

namespace clonesim {

// Running time integrals R_i(t, x_k) of the net self-renewal rates P_i along a
// trajectory, one row per dividing stage (i = 1..M-1), accumulated with the
// same left-endpoint rule the explicit Euler update uses. They satisfy the
// exact discrete identity n_1(t, x) = n_1(0, x) * prod_steps(1 + dt*P_1), and
// log-slope checks on R are how the long-run selection statements are tested.
struct GrowthIntegrals {
    int num_stages = 0;    // M (rows cover stages 1..M-1)
    int num_points = 0;    // grid size N
    double time = 0.0;     // trajectory time the integrals have reached
    std::vector<double> R; // (M-1) x N, row-major

    double& at(int stage, int k) { return R[(stage - 1) * num_points + k]; }
    double at(int stage, int k) const { return R[(stage - 1) * num_points + k]; }
};

GrowthIntegrals make_growth_integrals(int num_stages, int num_points);

// R_i(t+dt, x_k) = R_i(t, x_k) + dt * P_i(s, x_k)/epsilon for every dividing
// stage and grid point; advances the stored time by dt. The signal is the
// caller's, evaluated at the step's start (left endpoint).
void accumulate_growth(GrowthIntegrals& g, double signal, const ModelParams& params, double dt);

}  // namespace clonesim
