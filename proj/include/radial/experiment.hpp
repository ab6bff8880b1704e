#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radial/common.hpp"
#include "radial/distributions.hpp"
#include "radial/io.hpp"
#include "radial/losses.hpp"
#include "radial/metrics.hpp"
#include "radial/optimizer.hpp"

namespace radial {

/// Distribution choice plus every generator parameter. Unused parameters
/// keep their defaults so a resolved spec always round-trips.
struct DistributionSpec {
  DistributionTag tag{DistributionTag::kX};
  std::size_t dim{2};
  double alpha{0.5};
  DistributionTag base{DistributionTag::kGaussian};
  DistributionTag contaminant{DistributionTag::kX};
  double along_var{2.0};
  double perp_var{0.0};
  std::size_t slices{12};
  double rotation{0.0};  // 0 = one slice width
  double nu{5.0};
  double radius{1.0};

  SampleSet sample(std::size_t n, std::uint64_t seed) const;

  static DistributionSpec from_kv(const KvConfig& kv);
  void to_kv(KvConfig& kv) const;
};

struct ExperimentSpec {
  DistributionSpec distribution;
  std::size_t n_samples{10000};
  LossConfig loss;
  ScheduleConfig schedule;
  std::uint64_t seed{1};
  std::string outputs;  // empty = $RADIAL_OUT_ROOT or "."
  std::size_t record_every{200};

  static ExperimentSpec from_kv(const KvConfig& kv);
  void to_kv(KvConfig& kv) const;
  /// Fully resolved `key = value` lines embedded in every output file.
  std::vector<std::string> header_lines() const;
  std::string output_dir() const;
};

struct ExperimentResult {
  SampleSet init;
  OptimizeResult opt;
};

/// Samples the initial set from the spec's distribution (with the spec seed,
/// matching what `sample` would emit) and runs the optimizer.
ExperimentResult run_experiment(const ExperimentSpec& spec);

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectoryRecord>& trajectory,
                          const std::vector<std::string>& comment_lines);

void write_metric_report_csv(const std::string& path, const MetricReport& rep,
                             const std::vector<std::string>& comment_lines);

struct SweepSpec {
  ExperimentSpec base;
  std::vector<double> alpha;
  std::vector<double> lr;
  std::vector<double> beta1;
  std::vector<double> beta2;
  std::vector<double> lambda2;
  std::vector<double> lambda3;
  std::vector<std::uint64_t> seeds;
  std::size_t jobs{1};

  static SweepSpec from_kv(const KvConfig& kv);
  std::size_t config_count() const;
  std::size_t row_count() const;
};

struct SweepRow {
  std::size_t row_index{0};
  std::size_t config_index{0};
  std::size_t alpha_index{0};
  double alpha{0.0};
  double lr{0.0};
  double beta1{0.0};
  double beta2{0.0};
  double lambda2{0.0};
  double lambda3{0.0};
  std::uint64_t seed{0};
  bool ok{false};
  std::string status;
  double w1_gauss_init{0.0};
  double w1_gauss_final{0.0};
  double w1_radii_chi_final{0.0};
  double ks_angles_final{0.0};
  double ks_radii_final{0.0};
  double best_total{0.0};
  double final_total{0.0};
  std::string trajectory_path;

  /// VCReg rows have every radial weight at zero.
  bool is_radial() const {
    return beta1 != 0.0 || beta2 != 0.0;
  }
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string results_csv;
  std::string summary_csv;
  std::string figure_svg;
};

/// Runs the Cartesian product of the axes times the seed list. Jobs execute
/// in parallel up to spec.jobs; per-row results and files are identical to a
/// sequential run. Rows that fail are recorded with their error and the
/// sweep continues.
SweepResult run_sweep(const SweepSpec& spec);

}  // namespace radial
