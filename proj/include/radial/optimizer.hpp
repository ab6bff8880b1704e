#pragma once

#include <cstdint>
#include <vector>

#include "radial/common.hpp"
#include "radial/losses.hpp"

namespace radial {

/// Linear warmup to base_lr, then cosine decay to
/// final_lr_fraction * base_lr.
struct ScheduleConfig {
  double base_lr{1e-2};
  std::size_t warmup_steps{0};
  std::size_t total_steps{1};
  double final_lr_fraction{0.0};
};

/// Learning rate at `step` in [0, total_steps].
double lr_at(const ScheduleConfig& schedule, std::size_t step);

struct TrajectoryRecord {
  std::size_t step{0};
  double lr{0.0};
  LossReport report;
  double kl_to_chi{0.0};
  double e2mc{0.0};
};

struct OptimizeResult {
  SampleSet samples;
  std::vector<TrajectoryRecord> trajectory;
};

/// Full-batch gradient descent over the sample points themselves. Each step
/// applies z <- z - lr * N * dL/dz, i.e. the learning rate acts on the
/// per-sample gradient of the mean-normalized loss; per-sample gradient rows
/// are norm-capped at 100 (the sort-based terms have unbounded 1/gap kicks
/// at near-ties). `seed` only drives the W1 reference draws; runs are
/// bit-reproducible per (init, cfg, schedule, seed).
///
/// States are recorded at step 0, at every multiple of record_every below
/// total_steps, and at the final step.
///
/// Throws DivergenceError when the loss or gradient turns non-finite or any
/// coordinate leaves [-1e6, 1e6].
OptimizeResult optimize_samples(const SampleSet& init, const LossConfig& cfg,
                                const ScheduleConfig& schedule,
                                std::uint64_t seed, std::size_t record_every);

}  // namespace radial
