#pragma once

#include <cstddef>
#include <vector>

namespace radial {

/// Minimum-cost perfect matching on an n x n cost matrix (row-major) via the
/// Hungarian algorithm with potentials, O(n^3). Returns the optimal total
/// cost; when `assignment` is non-null it receives the matched column for
/// each row.
double solve_assignment(const std::vector<double>& cost, std::size_t n,
                        std::vector<std::size_t>* assignment = nullptr);

}  // namespace radial
