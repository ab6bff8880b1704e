#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "radial/common.hpp"
#include "radial/special_math.hpp"

namespace radial {

/// A sample set collapsed far enough that radial terms are undefined.
class NearOriginError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LossConfig {
  double lambda1{0.0};  // invariance weight
  double lambda2{0.0};  // variance weight
  double lambda3{0.0};  // covariance weight
  double beta1{0.0};    // radial cross-entropy weight
  double beta2{0.0};    // radial entropy weight
  double w1_weight{0.0};
  double var_target{1.0};
  double var_eps{1e-4};
  std::size_t m_spacing{0};  // 0 = auto: floor(sqrt(N))
  double tie_eps{1e-12};

  std::size_t resolved_m(std::size_t n) const;
};

/// Per-evaluation breakdown. Component fields are unweighted and summed over
/// the views that were supplied; `total` is the weighted combination
///   lambda1*invariance + lambda2*variance + lambda3*covariance
///   + beta1*radial_ce - beta2*radial_entropy + w1_weight*radial_w1.
struct LossReport {
  double total{0.0};
  double invariance{0.0};
  double variance{0.0};
  double covariance{0.0};
  double radial_ce{0.0};
  double radial_entropy{0.0};
  double radial_w1{0.0};
  std::optional<SampleSet> grad;
  std::optional<SampleSet> grad_view2;

  double weighted_sum(const LossConfig& cfg) const;
};

struct ValueGrad {
  double value{0.0};
  SampleSet grad;
};

struct PairValueGrad {
  double value{0.0};
  SampleSet grad_a;
  SampleSet grad_b;
};

struct ValueGradVec {
  double value{0.0};
  std::vector<double> grad;
};

/// (1/d) sum_j max(0, target - sqrt(Var(col_j) + eps)), unbiased variance.
ValueGrad variance_loss(const SampleSet& z, const LossConfig& cfg);

/// (1/N) sum_i ||z_i - z'_i||^2.
PairValueGrad invariance_loss(const SampleSet& z, const SampleSet& zp,
                              const LossConfig& cfg);

/// (1/d) sum_{a != b} C(Z)_{ab}^2 with C the unbiased covariance.
ValueGrad covariance_loss(const SampleSet& z, const LossConfig& cfg);

/// (beta1/N) sum_i (||z_i||^2/2 - (d-1) log ||z_i||). The chi normalization
/// constant is deliberately excluded; kl_to_chi restores it.
ValueGrad radial_ce_loss(const SampleSet& z, const LossConfig& cfg);

/// m-spacing differential entropy estimate of `values`, scaled by beta2:
///   (beta2/(N-m)) sum_i log((N+1)/m * (v_(i+m) - v_(i)))
/// Spacings are clamped below by tie_eps; clamped spacings contribute zero
/// gradient.
ValueGradVec m_spacing_entropy(const std::vector<double>& values,
                               std::size_t m, double beta2,
                               double tie_eps = 1e-12);

/// radial_ce_loss - m_spacing_entropy over the row norms.
ValueGrad radial_gaussianization_loss(const SampleSet& z,
                                      const LossConfig& cfg);

/// Consistent KL(radii(Z) || chi(d)) estimate: cross-entropy term with the
/// normalization constant restored, minus the m-spacing entropy. Diagnostic
/// only.
double kl_to_chi(const SampleSet& z, std::size_t m);

/// w1_weight times the sorted-pair W1 distance between the row norms and a
/// fresh chi(d) sample of the same size drawn from `seed`.
ValueGrad w1_radial_loss(const SampleSet& z, const LossConfig& cfg,
                         std::uint64_t seed);

/// Same estimator against a caller-supplied reference sample.
ValueGrad w1_radial_loss_with_reference(const SampleSet& z,
                                        const LossConfig& cfg,
                                        const std::vector<double>& reference);

/// Per-dimension entropy diagnostic: -(1/d) sum_j H_m(col_j) plus the
/// variance and covariance losses. No gradient contract.
double e2mc_metric(const SampleSet& z, std::size_t m);

/// Weighted combination of every term. `zp` is required when lambda1 > 0;
/// when present, per-view terms are applied to both views. W1 references for
/// the second view come from an independent substream of `seed`.
LossReport total_loss(const SampleSet& z, const SampleSet* zp,
                      const LossConfig& cfg, std::uint64_t seed,
                      bool want_gradient = true);

/// Reusable evaluator for optimizer loops: owns scratch buffers and the chi
/// model so per-step evaluations stay allocation-free.
class LossEvaluator {
 public:
  LossEvaluator(LossConfig cfg, std::size_t dim);

  const LossConfig& config() const { return cfg_; }
  const ChiModel& chi() const { return chi_; }

  /// Single-view evaluation; accumulates the weighted gradient into `grad`
  /// (zeroed first) when non-null.
  LossReport evaluate(const SampleSet& z, std::uint64_t seed,
                      SampleSet* grad) const;

 private:
  LossConfig cfg_;
  ChiModel chi_;

  struct Scratch {
    std::vector<double> radii;
    std::vector<double> grad_r;
    std::vector<std::uint32_t> order;
    std::vector<double> sorted;
    std::vector<double> reference;
    std::vector<double> col_mean;
    std::vector<double> col_coef;
    std::vector<double> cov;
  };
  mutable Scratch scratch_;

  friend LossReport total_loss(const SampleSet&, const SampleSet*,
                               const LossConfig&, std::uint64_t, bool);
};

}  // namespace radial
