#pragma once

#include <cstdint>
#include <vector>

#include "radial/common.hpp"

namespace radial {

struct MetricReport {
  double w1_radii_to_chi{0.0};
  double w1_radii_to_chi_se{0.0};
  double w1_2d_to_gaussian{0.0};
  double w1_2d_to_gaussian_se{0.0};
  double ks_angles_uniform{0.0};
  double ks_radii_chi{0.0};
  double cov_offdiag_max{0.0};
  double mean_norm{0.0};
};

/// Sorted-pair estimate of the 1D Wasserstein-1 distance between equal-size
/// samples: mean |a_(i) - b_(i)|.
double w1_1d(const std::vector<double>& a, const std::vector<double>& b);

/// Mean over `reps` fresh chi(d) reference draws of w1_1d against the row
/// norms; standard error in *se when requested.
double w1_radii_to_chi(const SampleSet& z, std::size_t reps,
                       std::uint64_t seed, double* se = nullptr);

/// Exact 2D W1: optimal-assignment mean of matched Euclidean distances.
/// Capped at 2000 points per side (O(n^3) solve); larger sets use the
/// sliced variant.
double w1_2d_exact(const SampleSet& a, const SampleSet& b);

/// Sliced W1 on a deterministic angular grid theta_k = k pi / projections,
/// scaled by pi/2 so a pure translation reproduces the exact distance (the
/// 2D direction-average of |cos| is 2/pi). The unscaled angular mean
/// lower-bounds the exact distance.
double w1_2d_sliced(const SampleSet& a, const SampleSet& b,
                    std::size_t projections = 128);

/// KS statistic of the atan2 angles (mapped to [0,1)) against uniform.
/// 2D only.
double ks_uniform_angles(const SampleSet& z);

/// KS statistic of the row norms against the chi(d) cdf.
double ks_radii_chi(const SampleSet& z);

/// W1 to N(0,I) following the figure protocol: mean over `reps` fresh
/// equal-size standard-normal draws, exact assignment when count <= 2000,
/// sliced otherwise.
double w1_to_gaussian(const SampleSet& z, std::size_t reps, std::uint64_t seed,
                      double* se = nullptr);

/// Full diagnostic row (reps = 5 for both W1 measurements).
MetricReport compute_metrics(const SampleSet& z, std::uint64_t seed);

}  // namespace radial
