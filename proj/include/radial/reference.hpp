#pragma once

#include <vector>

#include "radial/common.hpp"
#include "radial/losses.hpp"

namespace radial::ref {

// Plain-loop implementations of the loss kernels. They share no code with
// the OpenMP kernels in losses.cpp and exist as an independent route for
// tests and for the bench_losses comparison target.

ValueGrad variance_loss(const SampleSet& z, const LossConfig& cfg);
PairValueGrad invariance_loss(const SampleSet& z, const SampleSet& zp);
ValueGrad covariance_loss(const SampleSet& z, const LossConfig& cfg);
ValueGrad radial_ce_loss(const SampleSet& z, const LossConfig& cfg);
ValueGradVec m_spacing_entropy(const std::vector<double>& values,
                               std::size_t m, double beta2,
                               double tie_eps = 1e-12);
ValueGrad w1_radial_loss_with_reference(const SampleSet& z,
                                        const LossConfig& cfg,
                                        const std::vector<double>& reference);

}  // namespace radial::ref
