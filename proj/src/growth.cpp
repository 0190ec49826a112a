#include "clonesim/growth.hpp"

#include <stdexcept>
#include <string>

namespace clonesim {

GrowthIntegrals make_growth_integrals(int num_stages, int num_points) {
    if (num_stages < 2 || num_points < 1)
        throw std::invalid_argument("growth integrals: need num_stages >= 2 and num_points >= 1");
    GrowthIntegrals g;
    g.num_stages = num_stages;
    g.num_points = num_points;
    g.R.assign(static_cast<std::size_t>(num_stages - 1) * num_points, 0.0);
    return g;
}

void accumulate_growth(GrowthIntegrals& g, double signal, const ModelParams& params, double dt) {
    if (params.num_stages != g.num_stages)
        throw std::invalid_argument("accumulate_growth: stage count mismatch");
    const double inv_eps = 1.0 / params.epsilon;
    for (int i = 1; i < g.num_stages; ++i) {
        const auto& a = params.self_renewal[i - 1].values;
        const auto& p = params.proliferation[i - 1].values;
        if (static_cast<int>(a.size()) != g.num_points)
            throw std::invalid_argument("accumulate_growth: table length mismatch");
        double* row = g.R.data() + static_cast<std::size_t>(i - 1) * g.num_points;
        for (int k = 0; k < g.num_points; ++k)
            row[k] += dt * ((2.0 * a[k] * signal - 1.0) * p[k] * inv_eps);
    }
    g.time += dt;
}

}  // namespace clonesim
