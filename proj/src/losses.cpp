#include "radial/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "radial/parallel.hpp"
#include "radial/rng.hpp"

namespace radial {

namespace {

constexpr std::uint64_t kSecondViewSalt = 0x7669657732ULL;

void check_min_count(const SampleSet& z, const char* op) {
  if (z.count < 2) {
    throw std::invalid_argument(std::string(op) +
                                ": need at least 2 samples");
  }
}

void zero_grad(SampleSet& grad, std::size_t n, std::size_t d) {
  grad.count = n;
  grad.dim = d;
  grad.points.assign(n * d, 0.0);
}

// Unbiased column statistics feed both kernels below; the mean term drops
// out of the derivatives because the centered column sums to zero.

double k_variance(const SampleSet& z, const LossConfig& cfg, double w,
                  SampleSet* grad, std::vector<double>& mean,
                  std::vector<double>& coef) {
  const std::size_t n = z.count;
  const std::size_t d = z.dim;
  mean.assign(d, 0.0);
  coef.assign(d, 0.0);
  double value = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double mu = par::sum(n, [&](std::size_t i) { return z(i, j); }) /
                      static_cast<double>(n);
    mean[j] = mu;
    const double var = par::sum(n, [&](std::size_t i) {
                         const double c = z(i, j) - mu;
                         return c * c;
                       }) /
                       static_cast<double>(n - 1);
    const double sd = std::sqrt(var + cfg.var_eps);
    if (sd < cfg.var_target) {
      value += (cfg.var_target - sd) / static_cast<double>(d);
      coef[j] = -w / (static_cast<double>(d) *
                      static_cast<double>(n - 1) * sd);
    }
  }
  if (grad != nullptr) {
    par::for_each(n, [&](std::size_t i) {
      for (std::size_t j = 0; j < d; ++j) {
        if (coef[j] != 0.0) {
          (*grad)(i, j) += coef[j] * (z(i, j) - mean[j]);
        }
      }
    });
  }
  return value;
}

double k_covariance(const SampleSet& z, double w, SampleSet* grad,
                    std::vector<double>& mean, std::vector<double>& cov) {
  const std::size_t n = z.count;
  const std::size_t d = z.dim;
  mean.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    mean[j] = par::sum(n, [&](std::size_t i) { return z(i, j); }) /
              static_cast<double>(n);
  }
  cov.assign(d * d, 0.0);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b) {
      const double c = par::sum(n, [&](std::size_t i) {
                         return (z(i, a) - mean[a]) * (z(i, b) - mean[b]);
                       }) /
                       static_cast<double>(n - 1);
      cov[a * d + b] = c;
      cov[b * d + a] = c;
    }
  }
  double value = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      if (a != b) value += cov[a * d + b] * cov[a * d + b];
    }
  }
  value /= static_cast<double>(d);
  if (grad != nullptr) {
    const double scale =
        4.0 * w / (static_cast<double>(d) * static_cast<double>(n - 1));
    par::for_each(n, [&](std::size_t i) {
      for (std::size_t c = 0; c < d; ++c) {
        double acc = 0.0;
        for (std::size_t b = 0; b < d; ++b) {
          if (b != c) acc += cov[c * d + b] * (z(i, b) - mean[b]);
        }
        (*grad)(i, c) += scale * acc;
      }
    });
  }
  return value;
}

double k_invariance(const SampleSet& z, const SampleSet& zp, double w,
                    SampleSet* grad_a, SampleSet* grad_b) {
  const std::size_t n = z.count;
  const std::size_t d = z.dim;
  const double value = par::sum(n, [&](std::size_t i) {
                         double sq = 0.0;
                         for (std::size_t j = 0; j < d; ++j) {
                           const double diff = z(i, j) - zp(i, j);
                           sq += diff * diff;
                         }
                         return sq;
                       }) /
                       static_cast<double>(n);
  if (grad_a != nullptr && grad_b != nullptr) {
    const double scale = 2.0 * w / static_cast<double>(n);
    par::for_each(n, [&](std::size_t i) {
      for (std::size_t j = 0; j < d; ++j) {
        const double g = scale * (z(i, j) - zp(i, j));
        (*grad_a)(i, j) += g;
        (*grad_b)(i, j) -= g;
      }
    });
  }
  return value;
}

void check_radii_positive(const std::vector<double>& radii, double tie_eps) {
  for (double r : radii) {
    if (!(r > tie_eps)) {
      throw NearOriginError(
          "radial loss: a sample sits at the origin (norm <= tie_eps); "
          "the set has collapsed");
    }
  }
}

// (1/N) sum_i (r_i^2/2 - (d-1) log r_i); derivative r - (d-1)/r goes into
// grad_r and is chained through z/||z|| later.
double k_radial_ce(const std::vector<double>& radii, std::size_t dim,
                   double w, std::vector<double>* grad_r) {
  const std::size_t n = radii.size();
  const double dm1 = static_cast<double>(dim) - 1.0;
  const double value = par::sum(n, [&](std::size_t i) {
                         return 0.5 * radii[i] * radii[i] -
                                dm1 * std::log(radii[i]);
                       }) /
                       static_cast<double>(n);
  if (grad_r != nullptr) {
    const double scale = w / static_cast<double>(n);
    par::for_each(n, [&](std::size_t i) {
      (*grad_r)[i] += scale * (radii[i] - dm1 / radii[i]);
    });
  }
  return value;
}

void sort_with_order(const std::vector<double>& values,
                     std::vector<std::uint32_t>& order,
                     std::vector<double>& sorted) {
  const std::size_t n = values.size();
  order.resize(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              if (values[a] != values[b]) return values[a] < values[b];
              return a < b;  // deterministic under ties
            });
  sorted.resize(n);
  for (std::size_t k = 0; k < n; ++k) sorted[k] = values[order[k]];
}

double k_m_spacing(const std::vector<double>& sorted,
                   const std::vector<std::uint32_t>& order, std::size_t m,
                   double tie_eps, double w, std::vector<double>* grad_r) {
  const std::size_t n = sorted.size();
  if (m < 1 || m >= n) {
    throw std::invalid_argument("m_spacing_entropy: requires 1 <= m < N");
  }
  const double denom = static_cast<double>(n - m);
  const double rate = static_cast<double>(n + 1) / static_cast<double>(m);
  double value = 0.0;
  for (std::size_t i = 0; i + m < n; ++i) {
    const double gap = sorted[i + m] - sorted[i];
    value += std::log(rate * std::max(gap, tie_eps));
    if (grad_r != nullptr && gap > tie_eps) {
      const double g = w / (denom * gap);
      (*grad_r)[order[i + m]] += g;
      (*grad_r)[order[i]] -= g;
    }
  }
  return value / denom;
}

double k_w1_sorted(const std::vector<double>& sorted,
                   const std::vector<std::uint32_t>& order,
                   const std::vector<double>& sorted_ref, double w,
                   std::vector<double>* grad_r) {
  const std::size_t n = sorted.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = sorted[i] - sorted_ref[i];
    value += std::abs(diff);
    if (grad_r != nullptr && diff != 0.0) {
      (*grad_r)[order[i]] += w * (diff > 0.0 ? inv_n : -inv_n);
    }
  }
  return value * inv_n;
}

// grad += grad_r (x) z / ||z||. Rows sitting at the origin have no
// direction; they get the zero subgradient (the sort-based losses are only
// differentiable almost everywhere anyway).
void chain_through_radius(const SampleSet& z, const std::vector<double>& radii,
                          const std::vector<double>& grad_r, double tie_eps,
                          SampleSet& grad) {
  par::for_each(z.count, [&](std::size_t i) {
    const double gr = grad_r[i];
    if (gr == 0.0 || !(radii[i] > tie_eps)) return;
    const double inv_r = 1.0 / radii[i];
    for (std::size_t j = 0; j < z.dim; ++j) {
      grad(i, j) += gr * z(i, j) * inv_r;
    }
  });
}

}  // namespace

std::size_t LossConfig::resolved_m(std::size_t n) const {
  std::size_t m = m_spacing;
  if (m == 0) {
    m = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    if (m < 1) m = 1;
  }
  if (m >= n) {
    throw std::invalid_argument(
        "m_spacing_entropy: requires N > m (got m >= N)");
  }
  return m;
}

double LossReport::weighted_sum(const LossConfig& cfg) const {
  return cfg.lambda1 * invariance + cfg.lambda2 * variance +
         cfg.lambda3 * covariance + cfg.beta1 * radial_ce -
         cfg.beta2 * radial_entropy + cfg.w1_weight * radial_w1;
}

ValueGrad variance_loss(const SampleSet& z, const LossConfig& cfg) {
  check_min_count(z, "variance_loss");
  ValueGrad out;
  zero_grad(out.grad, z.count, z.dim);
  std::vector<double> mean, coef;
  out.value = k_variance(z, cfg, 1.0, &out.grad, mean, coef);
  return out;
}

PairValueGrad invariance_loss(const SampleSet& z, const SampleSet& zp,
                              const LossConfig& cfg) {
  (void)cfg;
  if (!z.same_shape(zp)) {
    throw std::invalid_argument("invariance_loss: shape mismatch");
  }
  PairValueGrad out;
  zero_grad(out.grad_a, z.count, z.dim);
  zero_grad(out.grad_b, z.count, z.dim);
  out.value = k_invariance(z, zp, 1.0, &out.grad_a, &out.grad_b);
  return out;
}

ValueGrad covariance_loss(const SampleSet& z, const LossConfig& cfg) {
  (void)cfg;
  check_min_count(z, "covariance_loss");
  ValueGrad out;
  zero_grad(out.grad, z.count, z.dim);
  std::vector<double> mean, cov;
  out.value = k_covariance(z, 1.0, &out.grad, mean, cov);
  return out;
}

ValueGrad radial_ce_loss(const SampleSet& z, const LossConfig& cfg) {
  ValueGrad out;
  zero_grad(out.grad, z.count, z.dim);
  const std::vector<double> radii = z.radii();
  check_radii_positive(radii, cfg.tie_eps);
  std::vector<double> grad_r(z.count, 0.0);
  out.value = cfg.beta1 * k_radial_ce(radii, z.dim, cfg.beta1, &grad_r);
  chain_through_radius(z, radii, grad_r, cfg.tie_eps, out.grad);
  return out;
}

ValueGradVec m_spacing_entropy(const std::vector<double>& values,
                               std::size_t m, double beta2, double tie_eps) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("m_spacing_entropy: non-finite value");
    }
  }
  ValueGradVec out;
  out.grad.assign(values.size(), 0.0);
  std::vector<std::uint32_t> order;
  std::vector<double> sorted;
  sort_with_order(values, order, sorted);
  out.value = beta2 * k_m_spacing(sorted, order, m, tie_eps, beta2, &out.grad);
  return out;
}

ValueGrad radial_gaussianization_loss(const SampleSet& z,
                                      const LossConfig& cfg) {
  ValueGrad out;
  zero_grad(out.grad, z.count, z.dim);
  if (cfg.beta1 == 0.0 && cfg.beta2 == 0.0) return out;
  const std::vector<double> radii = z.radii();
  if (cfg.beta1 != 0.0) check_radii_positive(radii, cfg.tie_eps);
  std::vector<double> grad_r(z.count, 0.0);
  double value = 0.0;
  if (cfg.beta1 != 0.0) {
    value += cfg.beta1 * k_radial_ce(radii, z.dim, cfg.beta1, &grad_r);
  }
  if (cfg.beta2 != 0.0) {
    std::vector<std::uint32_t> order;
    std::vector<double> sorted;
    sort_with_order(radii, order, sorted);
    value -= cfg.beta2 * k_m_spacing(sorted, order,
                                     cfg.resolved_m(z.count), cfg.tie_eps,
                                     -cfg.beta2, &grad_r);
  }
  chain_through_radius(z, radii, grad_r, cfg.tie_eps, out.grad);
  out.value = value;
  return out;
}

double kl_to_chi(const SampleSet& z, std::size_t m) {
  const ChiModel chi(z.dim);
  const std::vector<double> radii = z.radii();
  check_radii_positive(radii, 1e-300);
  const double ce = k_radial_ce(radii, z.dim, 0.0, nullptr);
  std::vector<std::uint32_t> order;
  std::vector<double> sorted;
  sort_with_order(radii, order, sorted);
  const double ent = k_m_spacing(sorted, order, m, 1e-12, 0.0, nullptr);
  return ce + chi.log_norm() - ent;
}

ValueGrad w1_radial_loss(const SampleSet& z, const LossConfig& cfg,
                         std::uint64_t seed) {
  const ChiModel chi(z.dim);
  return w1_radial_loss_with_reference(z, cfg, chi.sample(z.count, seed));
}

ValueGrad w1_radial_loss_with_reference(const SampleSet& z,
                                        const LossConfig& cfg,
                                        const std::vector<double>& reference) {
  if (z.count == 0) {
    throw std::invalid_argument("w1_radial_loss: empty sample set");
  }
  if (reference.size() != z.count) {
    throw std::invalid_argument("w1_radial_loss: reference size mismatch");
  }
  ValueGrad out;
  zero_grad(out.grad, z.count, z.dim);
  const std::vector<double> radii = z.radii();
  std::vector<std::uint32_t> order;
  std::vector<double> sorted;
  sort_with_order(radii, order, sorted);
  std::vector<double> sorted_ref = reference;
  std::sort(sorted_ref.begin(), sorted_ref.end());
  std::vector<double> grad_r(z.count, 0.0);
  out.value = cfg.w1_weight *
              k_w1_sorted(sorted, order, sorted_ref, cfg.w1_weight, &grad_r);
  chain_through_radius(z, radii, grad_r, cfg.tie_eps, out.grad);
  return out;
}

double e2mc_metric(const SampleSet& z, std::size_t m) {
  check_min_count(z, "e2mc_metric");
  const std::size_t d = z.dim;
  double entropy_sum = 0.0;
  std::vector<double> column(z.count);
  std::vector<std::uint32_t> order;
  std::vector<double> sorted;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < z.count; ++i) column[i] = z(i, j);
    sort_with_order(column, order, sorted);
    entropy_sum += k_m_spacing(sorted, order, m, 1e-12, 0.0, nullptr);
  }
  LossConfig cfg;  // defaults: var_target 1, var_eps 1e-4
  std::vector<double> mean, coef, cov;
  const double var = k_variance(z, cfg, 0.0, nullptr, mean, coef);
  const double covv = k_covariance(z, 0.0, nullptr, mean, cov);
  return -entropy_sum / static_cast<double>(d) + covv + var;
}

LossEvaluator::LossEvaluator(LossConfig cfg, std::size_t dim)
    : cfg_(cfg), chi_(dim) {}

LossReport LossEvaluator::evaluate(const SampleSet& z, std::uint64_t seed,
                                   SampleSet* grad) const {
  if (z.dim != chi_.dof()) {
    throw std::invalid_argument("LossEvaluator: dimension mismatch");
  }
  const std::size_t n = z.count;
  if (grad != nullptr) zero_grad(*grad, n, z.dim);

  LossReport rep;
  Scratch& s = scratch_;

  if (cfg_.lambda2 != 0.0) {
    check_min_count(z, "variance_loss");
    rep.variance =
        k_variance(z, cfg_, cfg_.lambda2, grad, s.col_mean, s.col_coef);
  }
  if (cfg_.lambda3 != 0.0) {
    check_min_count(z, "covariance_loss");
    rep.covariance = k_covariance(z, cfg_.lambda3, grad, s.col_mean, s.cov);
  }

  const bool radial_active =
      cfg_.beta1 != 0.0 || cfg_.beta2 != 0.0 || cfg_.w1_weight != 0.0;
  if (radial_active) {
    s.radii.resize(n);
    par::for_each(n, [&](std::size_t i) { s.radii[i] = z.radius(i); });
    if (cfg_.beta1 != 0.0) {
      check_radii_positive(s.radii, cfg_.tie_eps);
    }
    s.grad_r.assign(n, 0.0);
    std::vector<double>* grad_r = grad != nullptr ? &s.grad_r : nullptr;

    if (cfg_.beta1 != 0.0) {
      rep.radial_ce = k_radial_ce(s.radii, z.dim, cfg_.beta1, grad_r);
    }
    const bool need_sorted = cfg_.beta2 != 0.0 || cfg_.w1_weight != 0.0;
    if (need_sorted) {
      sort_with_order(s.radii, s.order, s.sorted);
    }
    if (cfg_.beta2 != 0.0) {
      rep.radial_entropy =
          k_m_spacing(s.sorted, s.order, cfg_.resolved_m(n), cfg_.tie_eps,
                      -cfg_.beta2, grad_r);
    }
    if (cfg_.w1_weight != 0.0) {
      chi_.sample_into(s.reference, n, seed);
      std::sort(s.reference.begin(), s.reference.end());
      rep.radial_w1 =
          k_w1_sorted(s.sorted, s.order, s.reference, cfg_.w1_weight, grad_r);
    }
    if (grad != nullptr) {
      chain_through_radius(z, s.radii, s.grad_r, cfg_.tie_eps, *grad);
    }
  }

  rep.total = rep.weighted_sum(cfg_);
  return rep;
}

LossReport total_loss(const SampleSet& z, const SampleSet* zp,
                      const LossConfig& cfg, std::uint64_t seed,
                      bool want_gradient) {
  if (cfg.lambda1 > 0.0 && zp == nullptr) {
    throw ConfigError("total_loss: lambda1 > 0 requires a second view");
  }
  if (zp != nullptr && !z.same_shape(*zp)) {
    throw std::invalid_argument("total_loss: view shapes differ");
  }

  LossEvaluator evaluator(cfg, z.dim);
  SampleSet grad_a, grad_b;
  LossReport rep =
      evaluator.evaluate(z, seed, want_gradient ? &grad_a : nullptr);

  if (zp != nullptr) {
    LossReport rep2 = evaluator.evaluate(*zp, mix_seed(seed, kSecondViewSalt),
                                         want_gradient ? &grad_b : nullptr);
    rep.variance += rep2.variance;
    rep.covariance += rep2.covariance;
    rep.radial_ce += rep2.radial_ce;
    rep.radial_entropy += rep2.radial_entropy;
    rep.radial_w1 += rep2.radial_w1;
    if (cfg.lambda1 != 0.0) {
      if (want_gradient) {
        rep.invariance =
            k_invariance(z, *zp, cfg.lambda1, &grad_a, &grad_b);
      } else {
        rep.invariance = k_invariance(z, *zp, 0.0, nullptr, nullptr);
      }
    }
    if (want_gradient) rep.grad_view2 = std::move(grad_b);
  }
  if (want_gradient) rep.grad = std::move(grad_a);
  rep.total = rep.weighted_sum(cfg);
  return rep;
}

}  // namespace radial
