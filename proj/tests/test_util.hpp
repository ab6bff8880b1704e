#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "radial/common.hpp"
#include "radial/rng.hpp"

namespace radial::test {

/// Central finite differences of a scalar function of a sample set,
/// relative step per coordinate.
inline SampleSet fd_gradient(const std::function<double(const SampleSet&)>& f,
                             const SampleSet& z, double rel_step = 1e-5) {
  SampleSet grad(z.count, z.dim);
  SampleSet probe = z;
  for (std::size_t k = 0; k < z.points.size(); ++k) {
    const double x = z.points[k];
    const double h = rel_step * std::max(1.0, std::abs(x));
    probe.points[k] = x + h;
    const double up = f(probe);
    probe.points[k] = x - h;
    const double down = f(probe);
    probe.points[k] = x;
    grad.points[k] = (up - down) / (2.0 * h);
  }
  return grad;
}

/// Max elementwise relative error, floored against the gradient scale so
/// near-zero entries compare absolutely.
inline double max_rel_err(const SampleSet& a, const SampleSet& b) {
  double scale = 0.0;
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    scale = std::max({scale, std::abs(a.points[k]), std::abs(b.points[k])});
  }
  const double floor = std::max(1e-12, 1e-7 * scale);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    const double diff = std::abs(a.points[k] - b.points[k]);
    const double denom =
        std::max({std::abs(a.points[k]), std::abs(b.points[k]), floor});
    worst = std::max(worst, diff / denom);
  }
  return worst;
}

/// Random points with every radius in [r_lo, r_hi] and pairwise radius gaps
/// at least `min_gap` (keeps FD probes away from sort kinks).
inline SampleSet spaced_radius_set(std::size_t n, std::size_t d,
                                   std::uint64_t seed, double r_lo,
                                   double r_hi, double min_gap) {
  Xoshiro256pp rng(seed);
  std::vector<double> radii;
  while (radii.size() < n) {
    const double r = rng.uniform(r_lo, r_hi);
    bool ok = true;
    for (double other : radii) {
      if (std::abs(other - r) < min_gap) {
        ok = false;
        break;
      }
    }
    if (ok) radii.push_back(r);
  }
  SampleSet z(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    std::vector<double> dir(d);
    for (std::size_t j = 0; j < d; ++j) {
      dir[j] = rng.normal();
      sq += dir[j] * dir[j];
    }
    const double scale = radii[i] / std::sqrt(sq);
    for (std::size_t j = 0; j < d; ++j) z(i, j) = dir[j] * scale;
  }
  return z;
}

inline double pearson(const std::vector<double>& a,
                      const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

/// Exhaustive minimum-cost matching for tiny instances; oracle for the
/// Hungarian solver.
inline double brute_force_assignment(const std::vector<double>& cost,
                                     std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost[i * n + perm[i]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline std::vector<double> column(const SampleSet& z, std::size_t j) {
  std::vector<double> out(z.count);
  for (std::size_t i = 0; i < z.count; ++i) out[i] = z(i, j);
  return out;
}

inline double column_mean(const SampleSet& z, std::size_t j) {
  double acc = 0.0;
  for (std::size_t i = 0; i < z.count; ++i) acc += z(i, j);
  return acc / static_cast<double>(z.count);
}

inline double column_var(const SampleSet& z, std::size_t j) {
  const double mu = column_mean(z, j);
  double acc = 0.0;
  for (std::size_t i = 0; i < z.count; ++i) {
    acc += (z(i, j) - mu) * (z(i, j) - mu);
  }
  return acc / static_cast<double>(z.count - 1);
}

inline double cov_entry(const SampleSet& z, std::size_t a, std::size_t b) {
  const double ma = column_mean(z, a);
  const double mb = column_mean(z, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < z.count; ++i) {
    acc += (z(i, a) - ma) * (z(i, b) - mb);
  }
  return acc / static_cast<double>(z.count - 1);
}

}  // namespace radial::test
