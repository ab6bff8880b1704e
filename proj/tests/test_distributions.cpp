#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "radial/distributions.hpp"
#include "radial/metrics.hpp"
#include "test_util.hpp"

using namespace radial;
namespace rt = radial::test;

namespace {
constexpr std::size_t kBig = 100000;
}

TEST_CASE("gaussian sampler moments and radii law") {
  const SampleSet z = sample_gaussian(kBig, 2, 11);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(std::abs(rt::column_mean(z, j)) < 0.02);
    CHECK(std::abs(rt::column_var(z, j) - 1.0) < 0.02);
  }
  CHECK(ks_radii_chi(z) < 0.005);
  CHECK(sample_gaussian(100, 3, 4).points == sample_gaussian(100, 3, 4).points);
  CHECK_THROWS_AS(sample_gaussian(1, 2, 4), std::invalid_argument);
}

TEST_CASE("x-distribution has identity covariance but clumped angles") {
  const SampleSet z = sample_x_distribution(kBig, 21);
  CHECK(std::abs(rt::column_var(z, 0) - 1.0) < 0.02);
  CHECK(std::abs(rt::column_var(z, 1) - 1.0) < 0.02);
  CHECK(std::abs(rt::cov_entry(z, 0, 1)) < 0.02);
  CHECK(std::abs(rt::column_mean(z, 0)) < 0.02);
  CHECK(ks_uniform_angles(z) > 0.1);
}

TEST_CASE("x-distribution constraint and limits") {
  CHECK_THROWS_AS(sample_x_distribution(100, 1, 3.0, 0.1), ConfigError);
  // Isotropic limit: along = perp = 1 is N(0,I) in law
  const SampleSet z = sample_x_distribution(kBig, 3, 1.0, 1.0);
  CHECK(ks_radii_chi(z) < 0.01);
  CHECK(ks_uniform_angles(z) < 0.01);
  // A thickened cross keeps identity covariance too
  const SampleSet thick = sample_x_distribution(kBig, 5, 1.9, 0.1);
  CHECK(std::abs(rt::column_var(thick, 0) - 1.0) < 0.02);
  CHECK(std::abs(rt::cov_entry(thick, 0, 1)) < 0.02);
}

TEST_CASE("sunshine keeps chi radii while clumping angles") {
  const SampleSet z = sample_sunshine(kBig, 31);
  CHECK(ks_radii_chi(z) < 0.005);
  CHECK(std::abs(rt::column_var(z, 0) - 1.0) < 0.02);
  CHECK(std::abs(rt::column_var(z, 1) - 1.0) < 0.02);
  CHECK(std::abs(rt::cov_entry(z, 0, 1)) < 0.02);
  CHECK(ks_uniform_angles(z) > 0.05);
  CHECK_THROWS_AS(sample_sunshine(100, 1, 7), ConfigError);
  CHECK_THROWS_AS(sample_sunshine(100, 1, 2), ConfigError);
}

TEST_CASE("sunshine rotation preserves the radius multiset exactly") {
  const std::size_t n = 5000;
  const SampleSet rotated = sample_sunshine(n, 17);
  // A full-turn rotation is the identity on every slice, so the same seed
  // exposes the pre-rotation radii.
  const SampleSet plain = sample_sunshine(n, 17, 12, 2.0 * std::numbers::pi);
  auto ra = rotated.radii();
  auto rb = plain.radii();
  std::sort(ra.begin(), ra.end());
  std::sort(rb.begin(), rb.end());
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(ra[i] == doctest::Approx(rb[i]).epsilon(1e-12));
  }
}

TEST_CASE("mixture endpoints reduce to the components") {
  MixtureSpec pure_base{0.0, DistributionTag::kGaussian, DistributionTag::kX};
  const SampleSet z0 = sample_mixture(pure_base, kBig, 5);
  CHECK(ks_radii_chi(z0) < 0.01);
  CHECK(ks_uniform_angles(z0) < 0.01);

  MixtureSpec pure_x{1.0, DistributionTag::kGaussian, DistributionTag::kX};
  const SampleSet z1 = sample_mixture(pure_x, kBig, 5);
  CHECK(ks_uniform_angles(z1) > 0.1);
}

TEST_CASE("mixture draws the contaminant at the right rate") {
  MixtureSpec spec{0.5, DistributionTag::kGaussian, DistributionTag::kX};
  const SampleSet z = sample_mixture(spec, kBig, 9);
  // X rows lie exactly on a diagonal: |x| == |y|
  std::size_t on_diag = 0;
  for (std::size_t i = 0; i < z.count; ++i) {
    if (std::abs(std::abs(z(i, 0)) - std::abs(z(i, 1))) < 1e-9) ++on_diag;
  }
  const double fraction =
      static_cast<double>(on_diag) / static_cast<double>(z.count);
  CHECK(std::abs(fraction - 0.5) < 0.01);
  CHECK_THROWS_AS(
      sample_mixture({-0.1, DistributionTag::kGaussian, DistributionTag::kX},
                     100, 1),
      ConfigError);
}

TEST_CASE("student-t is isotropic with unit covariance") {
  const SampleSet z = sample_student_t_isotropic(kBig, 2, 5.0, 13);
  CHECK(std::abs(rt::column_var(z, 0) - 1.0) < 0.05);
  CHECK(std::abs(rt::column_var(z, 1) - 1.0) < 0.05);
  CHECK(std::abs(rt::cov_entry(z, 0, 1)) < 0.05);
  CHECK(ks_uniform_angles(z) < 0.01);
  // Heavier tail than Gaussian: radii law far from chi
  CHECK(ks_radii_chi(z) > 0.05);
  CHECK_THROWS_AS(sample_student_t_isotropic(100, 2, 2.0, 1), ConfigError);
}

TEST_CASE("student-t approaches the Gaussian radii law as nu grows") {
  const SampleSet z = sample_student_t_isotropic(kBig, 2, 400.0, 13);
  CHECK(ks_radii_chi(z) < 0.02);
}

TEST_CASE("uniform sphere") {
  const SampleSet z = sample_uniform_sphere(kBig, 2, 1.5, 23);
  for (std::size_t i = 0; i < 200; ++i) {
    CHECK(std::abs(z.radius(i) - 1.5) < 1e-12);
  }
  CHECK(ks_uniform_angles(z) < 0.01);
  // Per-coordinate sd on the circle is radius/sqrt(2)
  const double se = 1.5 / std::sqrt(2.0) / std::sqrt(static_cast<double>(kBig));
  CHECK(std::abs(rt::column_mean(z, 0)) < 3.0 * se);
  CHECK(std::abs(rt::column_mean(z, 1)) < 3.0 * se);
  CHECK_THROWS_AS(sample_uniform_sphere(100, 2, 0.0, 1), ConfigError);
}

TEST_CASE("samplers are deterministic per seed and differ across seeds") {
  CHECK(sample_x_distribution(500, 42).points ==
        sample_x_distribution(500, 42).points);
  CHECK(sample_sunshine(500, 42).points != sample_sunshine(500, 43).points);
  MixtureSpec spec{0.3, DistributionTag::kGaussian, DistributionTag::kX};
  CHECK(sample_mixture(spec, 500, 8).points ==
        sample_mixture(spec, 500, 8).points);
}
