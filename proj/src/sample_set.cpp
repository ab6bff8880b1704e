#include "radial/common.hpp"

#include <cmath>

#include "radial/parallel.hpp"

namespace radial {

double SampleSet::radius(std::size_t i) const {
  double sq = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double v = (*this)(i, j);
    sq += v * v;
  }
  return std::sqrt(sq);
}

std::vector<double> SampleSet::radii() const {
  std::vector<double> r(count);
  par::for_each(count, [&](std::size_t i) { r[i] = radius(i); });
  return r;
}

bool SampleSet::all_finite() const {
  for (double v : points) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace radial
