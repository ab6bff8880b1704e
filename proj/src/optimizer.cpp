#include "radial/optimizer.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "radial/parallel.hpp"
#include "radial/rng.hpp"

namespace radial {

namespace {

constexpr double kCoordinateGuard = 1e6;

// Cap on the per-sample gradient row norm (in per-sample units, i.e. after
// the batch scaling). The m-spacing term's 1/gap kicks and the
// cross-entropy's 1/r wall are unbounded; capping the row keeps a rare
// near-tie from catapulting a point through the origin while leaving every
// in-range force (|row| ~ O(10) at most in normal states) untouched.
constexpr double kMaxRowGradNorm = 100.0;

bool finite_and_bounded(const SampleSet& z) {
  for (double v : z.points) {
    if (!std::isfinite(v) || std::abs(v) > kCoordinateGuard) return false;
  }
  return true;
}

TrajectoryRecord make_record(std::size_t step, double lr,
                             const LossReport& rep, const SampleSet& z,
                             const LossConfig& cfg) {
  TrajectoryRecord rec;
  rec.step = step;
  rec.lr = lr;
  rec.report = rep;
  // Diagnostics are best-effort: degenerate states (collapsed radii) make
  // them undefined without making the run itself invalid.
  try {
    const std::size_t m = cfg.resolved_m(z.count);
    rec.kl_to_chi = kl_to_chi(z, m);
    rec.e2mc = e2mc_metric(z, m);
  } catch (const std::exception&) {
    rec.kl_to_chi = std::numeric_limits<double>::quiet_NaN();
    rec.e2mc = std::numeric_limits<double>::quiet_NaN();
  }
  return rec;
}

}  // namespace

double lr_at(const ScheduleConfig& schedule, std::size_t step) {
  if (step > schedule.total_steps) {
    throw std::invalid_argument("lr_at: step beyond total_steps");
  }
  if (schedule.warmup_steps > schedule.total_steps) {
    throw ConfigError("schedule: warmup_steps exceeds total_steps");
  }
  if (!(schedule.base_lr > 0.0)) {
    throw ConfigError("schedule: base_lr must be positive");
  }
  if (step < schedule.warmup_steps) {
    return schedule.base_lr * static_cast<double>(step) /
           static_cast<double>(schedule.warmup_steps);
  }
  const std::size_t span = schedule.total_steps - schedule.warmup_steps;
  const double progress =
      span == 0 ? 1.0
                : static_cast<double>(step - schedule.warmup_steps) /
                      static_cast<double>(span);
  const double f = schedule.final_lr_fraction;
  return schedule.base_lr *
         (f + (1.0 - f) * 0.5 * (1.0 + std::cos(std::numbers::pi * progress)));
}

OptimizeResult optimize_samples(const SampleSet& init, const LossConfig& cfg,
                                const ScheduleConfig& schedule,
                                std::uint64_t seed,
                                std::size_t record_every) {
  if (init.count < 2 || init.dim < 1 || !init.all_finite()) {
    throw std::invalid_argument("optimize_samples: invalid initial set");
  }
  if (schedule.total_steps < 1) {
    throw ConfigError("optimize_samples: total_steps must be >= 1");
  }
  if (record_every < 1) {
    throw ConfigError("optimize_samples: record_every must be >= 1");
  }

  OptimizeResult result;
  result.samples = init;
  SampleSet& z = result.samples;
  const std::size_t n = z.count;
  const double batch_scale = static_cast<double>(n);

  LossEvaluator evaluator(cfg, z.dim);
  SampleSet grad;

  for (std::size_t step = 0; step < schedule.total_steps; ++step) {
    const LossReport rep = evaluator.evaluate(z, mix_seed(seed, step), &grad);
    if (!std::isfinite(rep.total) || !grad.all_finite()) {
      throw DivergenceError("optimize_samples: non-finite loss or gradient",
                            step);
    }
    if (step % record_every == 0) {
      result.trajectory.push_back(
          make_record(step, lr_at(schedule, step), rep, z, cfg));
    }
    const double lr = lr_at(schedule, step + 1) * batch_scale;
    par::for_each(n, [&](std::size_t i) {
      double sq = 0.0;
      for (std::size_t j = 0; j < z.dim; ++j) {
        const double g = grad(i, j) * batch_scale;
        sq += g * g;
      }
      const double norm = std::sqrt(sq);
      const double clip =
          norm > kMaxRowGradNorm ? kMaxRowGradNorm / norm : 1.0;
      const double scale = lr * clip;
      for (std::size_t j = 0; j < z.dim; ++j) {
        z(i, j) -= scale * grad(i, j);
      }
    });
    if (!finite_and_bounded(z)) {
      throw DivergenceError("optimize_samples: samples left the trust region",
                            step + 1);
    }
  }

  const LossReport final_rep =
      evaluator.evaluate(z, mix_seed(seed, schedule.total_steps), nullptr);
  if (!std::isfinite(final_rep.total)) {
    throw DivergenceError("optimize_samples: non-finite final loss",
                          schedule.total_steps);
  }
  result.trajectory.push_back(make_record(schedule.total_steps,
                                          lr_at(schedule, schedule.total_steps),
                                          final_rep, z, cfg));
  return result;
}

}  // namespace radial
