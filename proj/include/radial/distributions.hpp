#pragma once

#include <cstdint>
#include <string>

#include "radial/common.hpp"

namespace radial {

enum class DistributionTag {
  kGaussian,
  kX,
  kSunshine,
  kStudentT,
  kUniformSphere,
  kMixture,
};

DistributionTag parse_distribution_tag(const std::string& name);
std::string to_string(DistributionTag tag);

/// alpha X + (1 - alpha) N(0, I): each row comes from the contaminant with
/// probability alpha, otherwise from the base.
struct MixtureSpec {
  double alpha{0.0};
  DistributionTag base{DistributionTag::kGaussian};
  DistributionTag contaminant{DistributionTag::kX};
};

/// i.i.d. standard normal rows.
SampleSet sample_gaussian(std::size_t n, std::size_t d, std::uint64_t seed);

/// 2D cross: each point lies on one of the two diagonals (1,1)/sqrt(2) and
/// (1,-1)/sqrt(2), picked with probability 1/2, with variance along_var along
/// it and perp_var across it. along_var + perp_var = 2 forces an identity
/// population covariance while keeping the shape far from elliptical.
///
/// The default cross is degenerate (no perpendicular spread): with four
/// evenly spaced angular clumps, the uniform-angle KS statistic tops out at
/// 1/8, and any perpendicular thickness smears the clumps through the heavy
/// tails of the component ratio; perp_var = 0 is the only setting that keeps
/// the statistic above 0.1.
SampleSet sample_x_distribution(std::size_t n, std::uint64_t seed,
                                double along_var = 2.0,
                                double perp_var = 0.0);

/// 2D pinwheel: standard normal points in polar form, with every
/// even-indexed pie slice rotated clockwise. Radii are untouched, so they
/// stay chi(2); with slices/2 >= 3 the rotational symmetry keeps the
/// population covariance at identity while angles clump.
SampleSet sample_sunshine(std::size_t n, std::uint64_t seed,
                          std::size_t slices = 12, double rotation = 0.0);

SampleSet sample_mixture(const MixtureSpec& spec, std::size_t n,
                         std::uint64_t seed);

/// Isotropic Student-t, rescaled so the population covariance is identity:
/// z = g sqrt((nu - 2) / w), g ~ N(0, I_d), w ~ chi^2(nu). Requires nu > 2.
SampleSet sample_student_t_isotropic(std::size_t n, std::size_t d, double nu,
                                     std::uint64_t seed);

/// Rows radius * g / ||g||, g ~ N(0, I_d).
SampleSet sample_uniform_sphere(std::size_t n, std::size_t d, double radius,
                                std::uint64_t seed);

}  // namespace radial
