#include "radial/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace radial {

// Shortest-augmenting-path Hungarian method with dual potentials. Columns
// are scanned with 1-based indices; slot 0 is the virtual unmatched column.
double solve_assignment(const std::vector<double>& cost, std::size_t n,
                        std::vector<std::size_t>* assignment) {
  if (n == 0) throw std::invalid_argument("solve_assignment: empty instance");
  if (cost.size() != n * n) {
    throw std::invalid_argument("solve_assignment: cost matrix shape");
  }
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    minv.assign(n + 1, kInf);
    used.assign(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  double total = 0.0;
  if (assignment != nullptr) assignment->assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    total += cost[(match[j] - 1) * n + (j - 1)];
    if (assignment != nullptr) (*assignment)[match[j] - 1] = j - 1;
  }
  return total;
}

}  // namespace radial
