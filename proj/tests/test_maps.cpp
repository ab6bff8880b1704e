#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "radial/distributions.hpp"
#include "radial/linalg.hpp"
#include "radial/losses.hpp"
#include "radial/maps.hpp"
#include "radial/metrics.hpp"
#include "test_util.hpp"

using namespace radial;
namespace rt = radial::test;

TEST_CASE("jacobi eigendecomposition on a known matrix") {
  const std::vector<double> m{2.0, 1.0, 1.0, 2.0};
  const SymmetricEigen eig = symmetric_eigen(m, 2);
  CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx(3.0).epsilon(1e-12));
  // Eigenvector of 3 is (1,1)/sqrt(2) up to sign
  const double v0 = eig.vectors[0 * 2 + 1];
  const double v1 = eig.vectors[1 * 2 + 1];
  CHECK(std::abs(v0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(v0 == doctest::Approx(v1).epsilon(1e-12));
}

TEST_CASE("inverse sqrt reconstructs the identity") {
  const std::vector<double> m{4.0, 1.2, 1.2, 2.0};
  const std::vector<double> w = inverse_sqrt_spd(m, 2, 1e-12);
  // w * m * w should be I
  double recon[4] = {0, 0, 0, 0};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          recon[i * 2 + j] += w[i * 2 + k] * m[k * 2 + l] * w[l * 2 + j];
        }
      }
    }
  }
  CHECK(recon[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(recon[3] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(recon[1]) < 1e-10);
  // Symmetry of the root itself
  CHECK(w[1] == doctest::Approx(w[2]).epsilon(1e-12));
  CHECK_THROWS(inverse_sqrt_spd({1.0, 0.0, 0.0, -1.0}, 2, 1e-12));
}

TEST_CASE("fit_map on standard normal gives a near-identity whitener") {
  const SampleSet z = sample_gaussian(100000, 2, 3);
  const PushforwardMap map = fit_map(z, MapKind::kVcreg);
  CHECK(std::abs(map.whitener()[0] - 1.0) < 0.05);
  CHECK(std::abs(map.whitener()[3] - 1.0) < 0.05);
  CHECK(std::abs(map.whitener()[1]) < 0.05);
}

TEST_CASE("fit_map recovers a diagonal whitener") {
  SampleSet z = sample_gaussian(100000, 2, 4);
  for (std::size_t i = 0; i < z.count; ++i) {
    z(i, 0) = 3.0 + 2.0 * z(i, 0);   // variance 4
    z(i, 1) = -1.0 + z(i, 1);        // variance 1
  }
  const PushforwardMap map = fit_map(z, MapKind::kVcreg);
  CHECK(std::abs(map.mean()[0] - 3.0) < 0.05);
  CHECK(std::abs(map.mean()[1] + 1.0) < 0.05);
  CHECK(std::abs(map.whitener()[0] - 0.5) < 0.05);
  CHECK(std::abs(map.whitener()[3] - 1.0) < 0.05);
  CHECK(std::abs(map.whitener()[1]) < 0.05);
}

TEST_CASE("radius cdf round-trips the fit radii to uniform ranks") {
  const SampleSet z = sample_gaussian(5000, 2, 8);
  const PushforwardMap map = fit_map(z, MapKind::kRadialVcreg);
  const std::size_t n = map.cdf_radii().size();
  for (std::size_t k = 0; k < n; k += 97) {
    const double expected = (static_cast<double>(k) + 0.5) /
                            static_cast<double>(n);
    const double got = map.radius_cdf(map.cdf_radii()[k]);
    CHECK(std::abs(got - expected) < 1.0 / static_cast<double>(n));
  }
}

TEST_CASE("vcreg map Gaussianizes an affine Gaussian") {
  SampleSet z = sample_gaussian(100000, 2, 12);
  for (std::size_t i = 0; i < z.count; ++i) {
    const double x = z(i, 0), y = z(i, 1);
    z(i, 0) = 1.0 + 2.0 * x + 0.5 * y;
    z(i, 1) = -2.0 + 0.5 * x + 1.0 * y;
  }
  const SampleSet pushed = apply_map(fit_map(z, MapKind::kVcreg), z);
  // Per-coordinate KS against the standard normal cdf
  for (std::size_t j = 0; j < 2; ++j) {
    std::vector<double> col = rt::column(pushed, j);
    std::sort(col.begin(), col.end());
    double ks = 0.0;
    const double n = static_cast<double>(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) {
      const double f = 0.5 * (1.0 + std::erf(col[i] / std::sqrt(2.0)));
      ks = std::max(ks, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    CHECK(ks < 0.005);
  }
  // Sample mean ~ 0, covariance ~ I when applied to the fitting sample
  const MetricReport rep = compute_metrics(pushed, 5);
  CHECK(rep.mean_norm < 3.0 / std::sqrt(100000.0) * 2);
  CHECK(rep.cov_offdiag_max < 0.05);
}

TEST_CASE("radial map Gaussianizes isotropic student-t") {
  const SampleSet t = sample_student_t_isotropic(100000, 2, 5.0, 21);
  const SampleSet pushed = apply_map(fit_map(t, MapKind::kRadialVcreg), t);
  CHECK(ks_radii_chi(pushed) < 0.01);
  CHECK(ks_uniform_angles(pushed) < 0.01);
  // The plain whitener cannot fix the heavy tail
  const SampleSet whitened = apply_map(fit_map(t, MapKind::kVcreg), t);
  CHECK(ks_radii_chi(whitened) > 0.05);
}

TEST_CASE("radial map preserves directions exactly") {
  const SampleSet z = sample_x_distribution(20000, 33);
  const PushforwardMap map = fit_map(z, MapKind::kRadialVcreg);
  const SampleSet pushed = apply_map(map, z);
  const std::size_t d = 2;
  for (std::size_t i = 0; i < z.count; i += 503) {
    // Whiten by hand
    double w[2] = {0.0, 0.0};
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        w[a] += map.whitener()[a * d + b] * (z(i, b) - map.mean()[b]);
      }
    }
    const double rw = std::hypot(w[0], w[1]);
    const double rp = pushed.radius(i);
    CHECK(std::abs(pushed(i, 0) / rp - w[0] / rw) < 1e-10);
    CHECK(std::abs(pushed(i, 1) / rp - w[1] / rw) < 1e-10);
  }
}

TEST_CASE("radial map on the x-distribution: chi radii, clumped angles") {
  const SampleSet x = sample_x_distribution(100000, 2);
  const SampleSet pushed = apply_map(fit_map(x, MapKind::kRadialVcreg), x);
  CHECK(ks_radii_chi(pushed) < 0.01);
  CHECK(ks_uniform_angles(pushed) > 0.1);
}

TEST_CASE("containment demo orders the three rows as claimed") {
  const ContainmentReport rep = containment_demo(77, 10000);
  CHECK(rep.student_t_vcreg.ks_radii_chi > 0.05);
  CHECK(rep.student_t_radial.ks_radii_chi < 0.01);
  CHECK(rep.student_t_vcreg.ks_radii_chi > rep.student_t_radial.ks_radii_chi);
  CHECK(rep.x_radial.ks_radii_chi < 0.01);
  CHECK(rep.x_radial.ks_angles_uniform > 0.1);
}

TEST_CASE("affine equivariance at the distribution level") {
  const SampleSet t = sample_student_t_isotropic(50000, 2, 5.0, 9);
  SampleSet moved(t.count, 2);
  for (std::size_t i = 0; i < t.count; ++i) {
    moved(i, 0) = 5.0 + 3.0 * t(i, 0) + 1.0 * t(i, 1);
    moved(i, 1) = -7.0 + 0.5 * t(i, 1);
  }
  const SampleSet a = apply_map(fit_map(t, MapKind::kRadialVcreg), t);
  const SampleSet b = apply_map(fit_map(moved, MapKind::kRadialVcreg), moved);
  CHECK(std::abs(ks_radii_chi(a) - ks_radii_chi(b)) < 0.02);
  CHECK(std::abs(ks_uniform_angles(a) - ks_uniform_angles(b)) < 0.02);
}

TEST_CASE("error paths") {
  // Rank-deficient: all points on a line
  SampleSet line(100, 2);
  for (std::size_t i = 0; i < 100; ++i) {
    line(i, 0) = static_cast<double>(i) * 0.1;
    line(i, 1) = 2.0 * line(i, 0);
  }
  CHECK_THROWS_AS(fit_map(line, MapKind::kVcreg), RankError);

  SampleSet tiny(2, 2);
  CHECK_THROWS_AS(fit_map(tiny, MapKind::kVcreg), std::invalid_argument);

  // A point exactly at the fitted mean has no direction under the radial map
  SampleSet z = sample_gaussian(1000, 2, 3);
  const PushforwardMap map = fit_map(z, MapKind::kRadialVcreg);
  SampleSet probe(2, 2);
  probe(0, 0) = map.mean()[0];
  probe(0, 1) = map.mean()[1];
  probe(1, 0) = 1.0;
  CHECK_THROWS_AS(apply_map(map, probe), NearOriginError);
}

TEST_CASE("map csv bundle round-trips") {
  const SampleSet z = sample_student_t_isotropic(5000, 2, 5.0, 31);
  const PushforwardMap map = fit_map(z, MapKind::kRadialVcreg);
  const std::string path =
      (std::filesystem::temp_directory_path() / "radial_map_bundle.csv")
          .string();
  write_map_csv(path, map, {"test bundle"});
  const PushforwardMap loaded = read_map_csv(path);
  CHECK(loaded.kind() == map.kind());
  CHECK(loaded.mean() == map.mean());
  CHECK(loaded.whitener() == map.whitener());
  CHECK(loaded.cdf_radii() == map.cdf_radii());
  const SampleSet a = apply_map(map, z);
  const SampleSet b = apply_map(loaded, z);
  CHECK(a.points == b.points);
  std::filesystem::remove(path);
}
