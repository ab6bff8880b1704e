#include "radial/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace radial {

SymmetricEigen symmetric_eigen(const std::vector<double>& matrix,
                               std::size_t d) {
  if (matrix.size() != d * d) {
    throw std::invalid_argument("symmetric_eigen: matrix shape");
  }
  std::vector<double> a = matrix;
  std::vector<double> v(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;

  // Cyclic sweeps over the upper triangle until off-diagonal mass vanishes.
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) off += std::abs(a[p * d + q]);
    }
    if (off < 1e-14) break;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a[p * d + q];
        if (std::abs(apq) < 1e-300) continue;
        const double app = a[p * d + p];
        const double aqq = a[q * d + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = a[k * d + p];
          const double akq = a[k * d + q];
          a[k * d + p] = c * akp - s * akq;
          a[k * d + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = a[p * d + k];
          const double aqk = a[q * d + k];
          a[p * d + k] = c * apk - s * aqk;
          a[q * d + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double vkp = v[k * d + p];
          const double vkq = v[k * d + q];
          v[k * d + p] = c * vkp - s * vkq;
          v[k * d + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  SymmetricEigen out;
  out.dim = d;
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return a[x * d + x] < a[y * d + y];
  });
  out.values.resize(d);
  out.vectors.resize(d * d);
  for (std::size_t k = 0; k < d; ++k) {
    out.values[k] = a[idx[k] * d + idx[k]];
    for (std::size_t r = 0; r < d; ++r) {
      out.vectors[r * d + k] = v[r * d + idx[k]];
    }
  }
  return out;
}

std::vector<double> inverse_sqrt_spd(const std::vector<double>& matrix,
                                     std::size_t d, double min_eigenvalue) {
  const SymmetricEigen eig = symmetric_eigen(matrix, d);
  for (double lambda : eig.values) {
    if (!(lambda > min_eigenvalue)) {
      throw std::runtime_error(
          "inverse_sqrt_spd: matrix is singular or indefinite (eigenvalue " +
          std::to_string(lambda) + ")");
    }
  }
  // V diag(1/sqrt(lambda)) V^T
  std::vector<double> out(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        acc += eig.vectors[i * d + k] * eig.vectors[j * d + k] /
               std::sqrt(eig.values[k]);
      }
      out[i * d + j] = acc;
      out[j * d + i] = acc;
    }
  }
  return out;
}

}  // namespace radial
