#pragma once

#include <cstddef>
#include <vector>

namespace radial {

struct SymmetricEigen {
  std::size_t dim{0};
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column k is the eigenvector of values[k]
};

/// Cyclic Jacobi eigendecomposition of a symmetric d x d matrix (row-major).
SymmetricEigen symmetric_eigen(const std::vector<double>& matrix,
                               std::size_t d);

/// Unique symmetric inverse square root of an SPD matrix. Throws when the
/// smallest eigenvalue is below min_eigenvalue.
std::vector<double> inverse_sqrt_spd(const std::vector<double>& matrix,
                                     std::size_t d, double min_eigenvalue);

}  // namespace radial
