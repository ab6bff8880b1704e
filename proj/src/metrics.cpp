#include "radial/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "radial/assignment.hpp"
#include "radial/distributions.hpp"
#include "radial/parallel.hpp"
#include "radial/rng.hpp"
#include "radial/special_math.hpp"

namespace radial {

namespace {

constexpr std::size_t kExactAssignmentCap = 2000;

double ks_sorted_vs_cdf(const std::vector<double>& sorted,
                        const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sorted.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double below = f - static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n - f;
    stat = std::max(stat, std::max(below, above));
  }
  return stat;
}

double mean_and_se(const std::vector<double>& values, double* se) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (se != nullptr) {
    if (values.size() < 2) {
      *se = 0.0;
    } else {
      double var = 0.0;
      for (double v : values) var += (v - mean) * (v - mean);
      var /= static_cast<double>(values.size() - 1);
      *se = std::sqrt(var / static_cast<double>(values.size()));
    }
  }
  return mean;
}

}  // namespace

double w1_1d(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("w1_1d: samples must have equal size");
  }
  if (a.empty()) throw std::invalid_argument("w1_1d: empty samples");
  std::vector<double> sa = a;
  std::vector<double> sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double total = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) total += std::abs(sa[i] - sb[i]);
  return total / static_cast<double>(sa.size());
}

double w1_radii_to_chi(const SampleSet& z, std::size_t reps,
                       std::uint64_t seed, double* se) {
  if (reps == 0) throw std::invalid_argument("w1_radii_to_chi: reps >= 1");
  const ChiModel chi(z.dim);
  const std::vector<double> radii = z.radii();
  std::vector<double> per_rep(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    per_rep[r] = w1_1d(radii, chi.sample(z.count, mix_seed(seed, r)));
  }
  return mean_and_se(per_rep, se);
}

double w1_2d_exact(const SampleSet& a, const SampleSet& b) {
  if (a.count != b.count || a.dim != b.dim) {
    throw std::invalid_argument("w1_2d_exact: shape mismatch");
  }
  const std::size_t n = a.count;
  if (n > kExactAssignmentCap) {
    throw std::invalid_argument(
        "w1_2d_exact: too many points for exact assignment; use the sliced "
        "variant");
  }
  std::vector<double> cost(n * n);
  par::for_each(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      double sq = 0.0;
      for (std::size_t k = 0; k < a.dim; ++k) {
        const double diff = a(i, k) - b(j, k);
        sq += diff * diff;
      }
      cost[i * n + j] = std::sqrt(sq);
    }
  });
  return solve_assignment(cost, n) / static_cast<double>(n);
}

double w1_2d_sliced(const SampleSet& a, const SampleSet& b,
                    std::size_t projections) {
  if (a.count != b.count) {
    throw std::invalid_argument("w1_2d_sliced: equal counts required");
  }
  if (a.dim != 2 || b.dim != 2) {
    throw std::invalid_argument("w1_2d_sliced: 2D only");
  }
  if (projections == 0) {
    throw std::invalid_argument("w1_2d_sliced: projections >= 1");
  }
  std::vector<double> per_angle(projections, 0.0);
  par::for_each(projections, [&](std::size_t k) {
    const double theta = std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(projections);
    const double cx = std::cos(theta);
    const double cy = std::sin(theta);
    std::vector<double> pa(a.count), pb(b.count);
    for (std::size_t i = 0; i < a.count; ++i) {
      pa[i] = cx * a(i, 0) + cy * a(i, 1);
      pb[i] = cx * b(i, 0) + cy * b(i, 1);
    }
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    double total = 0.0;
    for (std::size_t i = 0; i < a.count; ++i) total += std::abs(pa[i] - pb[i]);
    per_angle[k] = total / static_cast<double>(a.count);
  });
  double mean = 0.0;
  for (double v : per_angle) mean += v;
  mean /= static_cast<double>(projections);
  return 0.5 * std::numbers::pi * mean;
}

double ks_uniform_angles(const SampleSet& z) {
  if (z.dim != 2) {
    throw std::invalid_argument("ks_uniform_angles: 2D sample sets only");
  }
  std::vector<double> u(z.count);
  par::for_each(z.count, [&](std::size_t i) {
    const double theta = std::atan2(z(i, 1), z(i, 0));
    u[i] = (theta + std::numbers::pi) / (2.0 * std::numbers::pi);
  });
  std::sort(u.begin(), u.end());
  return ks_sorted_vs_cdf(u, [](double x) { return x; });
}

double ks_radii_chi(const SampleSet& z) {
  const ChiModel chi(z.dim);
  std::vector<double> radii = z.radii();
  std::sort(radii.begin(), radii.end());
  return ks_sorted_vs_cdf(radii, [&](double r) { return chi.cdf(r); });
}

double w1_to_gaussian(const SampleSet& z, std::size_t reps, std::uint64_t seed,
                      double* se) {
  if (reps == 0) throw std::invalid_argument("w1_to_gaussian: reps >= 1");
  std::vector<double> per_rep(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const SampleSet ref = sample_gaussian(z.count, z.dim, mix_seed(seed, r));
    per_rep[r] = z.count <= kExactAssignmentCap ? w1_2d_exact(z, ref)
                                                : w1_2d_sliced(z, ref);
  }
  return mean_and_se(per_rep, se);
}

MetricReport compute_metrics(const SampleSet& z, std::uint64_t seed) {
  MetricReport rep;
  rep.w1_radii_to_chi =
      w1_radii_to_chi(z, 5, mix_seed(seed, 1), &rep.w1_radii_to_chi_se);
  rep.w1_2d_to_gaussian =
      w1_to_gaussian(z, 5, mix_seed(seed, 2), &rep.w1_2d_to_gaussian_se);
  rep.ks_angles_uniform = z.dim == 2
                              ? ks_uniform_angles(z)
                              : std::numeric_limits<double>::quiet_NaN();
  rep.ks_radii_chi = ks_radii_chi(z);

  std::vector<double> mean(z.dim, 0.0);
  for (std::size_t i = 0; i < z.count; ++i) {
    for (std::size_t j = 0; j < z.dim; ++j) mean[j] += z(i, j);
  }
  for (double& m : mean) m /= static_cast<double>(z.count);
  double mean_sq = 0.0;
  for (double m : mean) mean_sq += m * m;
  rep.mean_norm = std::sqrt(mean_sq);

  double max_offdiag = 0.0;
  for (std::size_t a = 0; a < z.dim; ++a) {
    for (std::size_t b = a + 1; b < z.dim; ++b) {
      double c = 0.0;
      for (std::size_t i = 0; i < z.count; ++i) {
        c += (z(i, a) - mean[a]) * (z(i, b) - mean[b]);
      }
      c /= static_cast<double>(z.count - 1);
      max_offdiag = std::max(max_offdiag, std::abs(c));
    }
  }
  rep.cov_offdiag_max = max_offdiag;
  return rep;
}

}  // namespace radial
