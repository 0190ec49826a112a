#pragma once

#include <vector>

namespace clonesim {

// Discretization of the trait space [0,1].
//
// Midpoint: x_k = (k + 1/2)/N, cell_width = 1/N, quadrature = midpoint rule.
//   Allows N >= 1 (one cell collapses the model to a single-clone ODE).
// Vertex:   x_k = k/(N-1), cell_width = 1/(N-1), quadrature = trapezoid rule.
//   Requires N >= 2. Includes the endpoints 0 and 1 (and x = 0.6 when
//   (N-1) % 20 == 0), which the midpoint layout never samples.
enum class GridLayout { Midpoint, Vertex };

struct Grid {
    int num_points = 0;
    GridLayout layout = GridLayout::Midpoint;
    std::vector<double> points;  // trait coordinates x_k, ascending in [0,1]
    double cell_width = 0.0;
};

// Throws std::invalid_argument if num_points is below the layout's minimum.
Grid make_grid(int num_points, GridLayout layout = GridLayout::Midpoint);

// Integral of a tabulated function over [0,1] with the grid's native rule.
// Computed as cell_width * pairwise_sum(values) (sum first, scale once) so a
// constant table integrates to exactly that constant on midpoint grids.
// Throws std::invalid_argument on a length mismatch.
double integrate(const Grid& grid, const std::vector<double>& values);

}  // namespace clonesim
