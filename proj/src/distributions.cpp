#include "radial/distributions.hpp"

#include <cmath>
#include <numbers>

#include "radial/parallel.hpp"
#include "radial/rng.hpp"

namespace radial {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

void check_count(std::size_t n) {
  if (n < 2) {
    throw std::invalid_argument("sampler: need at least 2 samples");
  }
}

// Distinct substream salts so a mixture row never replays the draws of the
// plain samplers at the same (seed, row).
constexpr std::uint64_t kMixtureSalt = 0x6d69787475726531ULL;

void fill_x_row(Xoshiro256pp& rng, double along_sd, double perp_sd,
                std::span<double> row) {
  const bool main_diag = rng.uniform01() < 0.5;
  const double a = along_sd * rng.normal();
  const double b = perp_sd * rng.normal();
  // u = (1,1)/sqrt(2), v = (1,-1)/sqrt(2)
  const double ux = kInvSqrt2, uy = kInvSqrt2;
  const double vx = kInvSqrt2, vy = -kInvSqrt2;
  if (main_diag) {
    row[0] = a * ux + b * vx;
    row[1] = a * uy + b * vy;
  } else {
    row[0] = a * vx + b * ux;
    row[1] = a * vy + b * uy;
  }
}

void fill_sunshine_row(Xoshiro256pp& rng, std::size_t slices, double rotation,
                       std::span<double> row) {
  const double gx = rng.normal();
  const double gy = rng.normal();
  const double r = std::hypot(gx, gy);
  double theta = std::atan2(gy, gx);  // (-pi, pi]
  const double width = 2.0 * std::numbers::pi / static_cast<double>(slices);
  double shifted = theta + std::numbers::pi;  // [0, 2pi)
  if (shifted >= 2.0 * std::numbers::pi) shifted = 0.0;
  const auto slice = static_cast<std::size_t>(shifted / width);
  if (slice % 2 == 0) theta -= rotation;  // clockwise
  row[0] = r * std::cos(theta);
  row[1] = r * std::sin(theta);
}

}  // namespace

DistributionTag parse_distribution_tag(const std::string& name) {
  if (name == "gaussian") return DistributionTag::kGaussian;
  if (name == "x") return DistributionTag::kX;
  if (name == "sunshine") return DistributionTag::kSunshine;
  if (name == "student_t") return DistributionTag::kStudentT;
  if (name == "sphere") return DistributionTag::kUniformSphere;
  if (name == "mixture") return DistributionTag::kMixture;
  throw ConfigError("unknown distribution tag: " + name);
}

std::string to_string(DistributionTag tag) {
  switch (tag) {
    case DistributionTag::kGaussian: return "gaussian";
    case DistributionTag::kX: return "x";
    case DistributionTag::kSunshine: return "sunshine";
    case DistributionTag::kStudentT: return "student_t";
    case DistributionTag::kUniformSphere: return "sphere";
    case DistributionTag::kMixture: return "mixture";
  }
  return "unknown";
}

SampleSet sample_gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
  check_count(n);
  SampleSet z(n, d);
  par::for_each(n, [&](std::size_t i) {
    Xoshiro256pp rng = stream_rng(seed, i);
    auto row = z.row(i);
    for (std::size_t j = 0; j < d; ++j) row[j] = rng.normal();
  });
  return z;
}

SampleSet sample_x_distribution(std::size_t n, std::uint64_t seed,
                                double along_var, double perp_var) {
  check_count(n);
  if (std::abs(along_var + perp_var - 2.0) > 1e-9) {
    throw ConfigError(
        "x-distribution: along_var + perp_var must equal 2 "
        "(identity covariance constraint)");
  }
  if (along_var < 0.0 || perp_var < 0.0) {
    throw ConfigError("x-distribution: variances must be nonnegative");
  }
  const double along_sd = std::sqrt(along_var);
  const double perp_sd = std::sqrt(perp_var);
  SampleSet z(n, 2);
  par::for_each(n, [&](std::size_t i) {
    Xoshiro256pp rng = stream_rng(seed, i);
    fill_x_row(rng, along_sd, perp_sd, z.row(i));
  });
  return z;
}

SampleSet sample_sunshine(std::size_t n, std::uint64_t seed,
                          std::size_t slices, double rotation) {
  check_count(n);
  if (slices < 4 || slices % 2 != 0) {
    throw ConfigError("sunshine: slices must be even and >= 4");
  }
  if (rotation == 0.0) {
    rotation = 2.0 * std::numbers::pi / static_cast<double>(slices);
  }
  SampleSet z(n, 2);
  par::for_each(n, [&](std::size_t i) {
    Xoshiro256pp rng = stream_rng(seed, i);
    fill_sunshine_row(rng, slices, rotation, z.row(i));
  });
  return z;
}

SampleSet sample_mixture(const MixtureSpec& spec, std::size_t n,
                         std::uint64_t seed) {
  check_count(n);
  if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) {
    throw ConfigError("mixture: alpha must lie in [0,1]");
  }
  const auto row_filler = [](DistributionTag tag) {
    switch (tag) {
      case DistributionTag::kGaussian:
        return +[](Xoshiro256pp& rng, std::span<double> row) {
          row[0] = rng.normal();
          row[1] = rng.normal();
        };
      case DistributionTag::kX:
        return +[](Xoshiro256pp& rng, std::span<double> row) {
          fill_x_row(rng, std::sqrt(2.0), 0.0, row);
        };
      case DistributionTag::kSunshine:
        return +[](Xoshiro256pp& rng, std::span<double> row) {
          fill_sunshine_row(rng, 12, 2.0 * std::numbers::pi / 12.0, row);
        };
      default:
        throw ConfigError("mixture: component must be gaussian, x or sunshine");
    }
  };
  const auto fill_base = row_filler(spec.base);
  const auto fill_contaminant = row_filler(spec.contaminant);
  SampleSet z(n, 2);
  par::for_each(n, [&](std::size_t i) {
    Xoshiro256pp rng = stream_rng(seed ^ kMixtureSalt, i);
    const bool pick_contaminant = rng.uniform01() < spec.alpha;
    if (pick_contaminant) {
      fill_contaminant(rng, z.row(i));
    } else {
      fill_base(rng, z.row(i));
    }
  });
  return z;
}

SampleSet sample_student_t_isotropic(std::size_t n, std::size_t d, double nu,
                                     std::uint64_t seed) {
  check_count(n);
  if (!(nu > 2.0)) {
    throw ConfigError("student_t: nu must exceed 2 for finite covariance");
  }
  SampleSet z(n, d);
  par::for_each(n, [&](std::size_t i) {
    Xoshiro256pp rng = stream_rng(seed, i);
    auto row = z.row(i);
    for (std::size_t j = 0; j < d; ++j) row[j] = rng.normal();
    const double w = 2.0 * rng.gamma(0.5 * nu);  // chi^2(nu)
    const double scale = std::sqrt((nu - 2.0) / w);
    for (std::size_t j = 0; j < d; ++j) row[j] *= scale;
  });
  return z;
}

SampleSet sample_uniform_sphere(std::size_t n, std::size_t d, double radius,
                                std::uint64_t seed) {
  check_count(n);
  if (!(radius > 0.0)) throw ConfigError("sphere: radius must be positive");
  SampleSet z(n, d);
  par::for_each(n, [&](std::size_t i) {
    Xoshiro256pp rng = stream_rng(seed, i);
    auto row = z.row(i);
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = rng.normal();
      sq += row[j] * row[j];
    }
    const double scale = radius / std::sqrt(sq);
    for (std::size_t j = 0; j < d; ++j) row[j] *= scale;
  });
  return z;
}

}  // namespace radial
