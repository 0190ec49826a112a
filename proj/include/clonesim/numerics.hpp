#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace clonesim {

// Pairwise (cascade) summation with a fixed recursion order.
// Error grows like O(log n) ulp instead of O(n), and the result is
// bit-identical for identical input, which the determinism tests rely on.
double pairwise_sum(const double* v, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

// Shortest decimal string that round-trips to the same double (%.17g).
std::string fmt17(double x);

}  // namespace clonesim
