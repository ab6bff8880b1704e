#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radial/common.hpp"
#include "radial/special_math.hpp"

namespace radial {

class RankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MapKind { kVcreg, kRadialVcreg };

MapKind parse_map_kind(const std::string& name);
std::string to_string(MapKind kind);

/// Fitted pushforward transform. The plain kind whitens; the radial kind
/// whitens, then remaps each radius through the chi quantile of its
/// empirical-cdf rank while preserving the direction exactly.
class PushforwardMap {
 public:
  PushforwardMap(MapKind kind, std::vector<double> mean,
                 std::vector<double> whitener, std::vector<double> cdf_radii);

  MapKind kind() const { return kind_; }
  std::size_t dim() const { return mean_.size(); }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& whitener() const { return whitener_; }
  const std::vector<double>& cdf_radii() const { return cdf_radii_; }
  const ChiModel& chi() const { return chi_; }

  /// Interpolated empirical cdf of the whitened fit radii (Hazen plotting
  /// positions), clamped to [1/(2N), 1 - 1/(2N)].
  double radius_cdf(double r) const;

 private:
  MapKind kind_;
  std::vector<double> mean_;
  std::vector<double> whitener_;
  std::vector<double> cdf_radii_;  // sorted; empty for the plain kind
  ChiModel chi_;
};

/// mean + symmetric-eigendecomposition whitener from the sample; the radial
/// kind additionally fits the empirical radius cdf of the whitened points.
/// Requires N >= d+1 and a covariance with min eigenvalue > 1e-8.
PushforwardMap fit_map(const SampleSet& z, MapKind kind);

SampleSet apply_map(const PushforwardMap& map, const SampleSet& x);

struct ContainmentRow {
  std::string label;
  double ks_radii_chi{0.0};
  double ks_angles_uniform{0.0};
};

struct ContainmentReport {
  ContainmentRow student_t_vcreg;   // stays heavy-tailed
  ContainmentRow student_t_radial;  // Gaussianized
  ContainmentRow x_radial;          // chi radii, clumped angles
};

/// Numerical version of the strict-containment argument: the radial map
/// Gaussianizes an elliptically symmetric law the plain map cannot, yet
/// leaves the X-distribution's angles non-uniform.
ContainmentReport containment_demo(std::uint64_t seed, std::size_t n);

/// CSV bundle (mean vector, whitener matrix, radius-cdf knots) so a fitted
/// map can be reused across CLI invocations.
void write_map_csv(const std::string& path, const PushforwardMap& map,
                   const std::vector<std::string>& comment_lines);
PushforwardMap read_map_csv(const std::string& path);

}  // namespace radial
