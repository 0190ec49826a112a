#include "clonesim/grid.hpp"

#include <stdexcept>
#include <string>

#include "clonesim/numerics.hpp"

namespace clonesim {

Grid make_grid(int num_points, GridLayout layout) {
    Grid g;
    g.num_points = num_points;
    g.layout = layout;
    if (layout == GridLayout::Midpoint) {
        if (num_points < 1)
            throw std::invalid_argument("grid: midpoint layout needs num_points >= 1, got " +
                                        std::to_string(num_points));
        g.cell_width = 1.0 / num_points;
        g.points.resize(num_points);
        // one division per point: hits exact decimals like 120.5/200 dead on
        for (int k = 0; k < num_points; ++k) g.points[k] = (k + 0.5) / num_points;
    } else {
        if (num_points < 2)
            throw std::invalid_argument("grid: vertex layout needs num_points >= 2, got " +
                                        std::to_string(num_points));
        g.cell_width = 1.0 / (num_points - 1);
        g.points.resize(num_points);
        for (int k = 0; k < num_points; ++k) g.points[k] = k / (num_points - 1.0);
    }
    return g;
}

double integrate(const Grid& grid, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != grid.num_points)
        throw std::invalid_argument("integrate: table length " + std::to_string(values.size()) +
                                    " does not match grid size " + std::to_string(grid.num_points));
    double s = pairwise_sum(values);
    if (grid.layout == GridLayout::Vertex)
        s -= 0.5 * (values.front() + values.back());
    return grid.cell_width * s;
}

}  // namespace clonesim
