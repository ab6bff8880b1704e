#include "radial/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace radial::ref {

namespace {

std::vector<double> column_means(const SampleSet& z) {
  std::vector<double> mean(z.dim, 0.0);
  for (std::size_t i = 0; i < z.count; ++i) {
    for (std::size_t j = 0; j < z.dim; ++j) mean[j] += z(i, j);
  }
  for (double& m : mean) m /= static_cast<double>(z.count);
  return mean;
}

}  // namespace

ValueGrad variance_loss(const SampleSet& z, const LossConfig& cfg) {
  const std::size_t n = z.count;
  const std::size_t d = z.dim;
  ValueGrad out;
  out.grad = SampleSet(n, d);
  const std::vector<double> mean = column_means(z);
  for (std::size_t j = 0; j < d; ++j) {
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = z(i, j) - mean[j];
      var += c * c;
    }
    var /= static_cast<double>(n - 1);
    const double sd = std::sqrt(var + cfg.var_eps);
    if (sd < cfg.var_target) {
      out.value += (cfg.var_target - sd) / static_cast<double>(d);
      for (std::size_t i = 0; i < n; ++i) {
        out.grad(i, j) = -(z(i, j) - mean[j]) /
                         (static_cast<double>(d) *
                          static_cast<double>(n - 1) * sd);
      }
    }
  }
  return out;
}

PairValueGrad invariance_loss(const SampleSet& z, const SampleSet& zp) {
  const std::size_t n = z.count;
  const std::size_t d = z.dim;
  PairValueGrad out;
  out.grad_a = SampleSet(n, d);
  out.grad_b = SampleSet(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = z(i, j) - zp(i, j);
      out.value += diff * diff;
      out.grad_a(i, j) = 2.0 * diff / static_cast<double>(n);
      out.grad_b(i, j) = -2.0 * diff / static_cast<double>(n);
    }
  }
  out.value /= static_cast<double>(n);
  return out;
}

ValueGrad covariance_loss(const SampleSet& z, const LossConfig& cfg) {
  (void)cfg;
  const std::size_t n = z.count;
  const std::size_t d = z.dim;
  ValueGrad out;
  out.grad = SampleSet(n, d);
  const std::vector<double> mean = column_means(z);
  std::vector<double> cov(d * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        cov[a * d + b] += (z(i, a) - mean[a]) * (z(i, b) - mean[b]);
      }
    }
  }
  for (double& c : cov) c /= static_cast<double>(n - 1);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      if (a != b) out.value += cov[a * d + b] * cov[a * d + b];
    }
  }
  out.value /= static_cast<double>(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) {
      double acc = 0.0;
      for (std::size_t b = 0; b < d; ++b) {
        if (b != c) acc += cov[c * d + b] * (z(i, b) - mean[b]);
      }
      out.grad(i, c) = 4.0 * acc /
                       (static_cast<double>(d) * static_cast<double>(n - 1));
    }
  }
  return out;
}

ValueGrad radial_ce_loss(const SampleSet& z, const LossConfig& cfg) {
  const std::size_t n = z.count;
  const std::size_t d = z.dim;
  ValueGrad out;
  out.grad = SampleSet(n, d);
  const double dm1 = static_cast<double>(d) - 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = z.radius(i);
    if (!(r > cfg.tie_eps)) {
      throw NearOriginError("ref radial_ce_loss: sample at the origin");
    }
    out.value += 0.5 * r * r - dm1 * std::log(r);
    for (std::size_t j = 0; j < d; ++j) {
      out.grad(i, j) =
          cfg.beta1 / static_cast<double>(n) * z(i, j) * (1.0 - dm1 / (r * r));
    }
  }
  out.value *= cfg.beta1 / static_cast<double>(n);
  return out;
}

ValueGradVec m_spacing_entropy(const std::vector<double>& values,
                               std::size_t m, double beta2, double tie_eps) {
  const std::size_t n = values.size();
  if (m < 1 || m >= n) {
    throw std::invalid_argument("ref m_spacing_entropy: requires 1 <= m < N");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return values[a] < values[b];
  });
  ValueGradVec out;
  out.grad.assign(n, 0.0);
  const double denom = static_cast<double>(n - m);
  const double rate = static_cast<double>(n + 1) / static_cast<double>(m);
  for (std::size_t i = 0; i + m < n; ++i) {
    const double gap = values[order[i + m]] - values[order[i]];
    out.value += std::log(rate * std::max(gap, tie_eps));
    if (gap > tie_eps) {
      out.grad[order[i + m]] += beta2 / (denom * gap);
      out.grad[order[i]] -= beta2 / (denom * gap);
    }
  }
  out.value *= beta2 / denom;
  return out;
}

ValueGrad w1_radial_loss_with_reference(const SampleSet& z,
                                        const LossConfig& cfg,
                                        const std::vector<double>& reference) {
  const std::size_t n = z.count;
  ValueGrad out;
  out.grad = SampleSet(n, z.dim);
  std::vector<double> radii(n);
  for (std::size_t i = 0; i < n; ++i) radii[i] = z.radius(i);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return radii[a] < radii[b];
  });
  std::vector<double> sorted_ref = reference;
  std::sort(sorted_ref.begin(), sorted_ref.end());
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = radii[order[i]] - sorted_ref[i];
    out.value += std::abs(diff);
    if (diff != 0.0) {
      const double g =
          cfg.w1_weight * (diff > 0.0 ? 1.0 : -1.0) / static_cast<double>(n);
      const std::size_t row = order[i];
      for (std::size_t j = 0; j < z.dim; ++j) {
        out.grad(row, j) += g * z(row, j) / radii[row];
      }
    }
  }
  out.value *= cfg.w1_weight / static_cast<double>(n);
  return out;
}

}  // namespace radial::ref
