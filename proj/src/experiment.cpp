#include "radial/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <thread>

#include "radial/parallel.hpp"
#include "radial/rng.hpp"
#include "radial/svg.hpp"

namespace radial {

namespace {

constexpr std::uint64_t kInitSalt = 0xA11CEULL;
constexpr std::uint64_t kMetricSalt = 0xBEEFULL;
constexpr std::uint64_t kRunSalt = 0xC0FFEEULL;

std::string sanitize_cell(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

SampleSet DistributionSpec::sample(std::size_t n, std::uint64_t seed) const {
  switch (tag) {
    case DistributionTag::kGaussian:
      return sample_gaussian(n, dim, seed);
    case DistributionTag::kX:
      return sample_x_distribution(n, seed, along_var, perp_var);
    case DistributionTag::kSunshine:
      return sample_sunshine(n, seed, slices, rotation);
    case DistributionTag::kStudentT:
      return sample_student_t_isotropic(n, dim, nu, seed);
    case DistributionTag::kUniformSphere:
      return sample_uniform_sphere(n, dim, radius, seed);
    case DistributionTag::kMixture:
      return sample_mixture({alpha, base, contaminant}, n, seed);
  }
  throw ConfigError("unknown distribution tag");
}

DistributionSpec DistributionSpec::from_kv(const KvConfig& kv) {
  DistributionSpec spec;
  spec.tag = parse_distribution_tag(kv.get_string("distribution", "x"));
  spec.dim = kv.get_u64("dist.dim", 2);
  spec.alpha = kv.get_double("dist.alpha", 0.5);
  spec.base = parse_distribution_tag(kv.get_string("dist.base", "gaussian"));
  spec.contaminant =
      parse_distribution_tag(kv.get_string("dist.contaminant", "x"));
  spec.along_var = kv.get_double("dist.along_var", 2.0);
  spec.perp_var = kv.get_double("dist.perp_var", 0.0);
  spec.slices = kv.get_u64("dist.slices", 12);
  spec.rotation = kv.get_double("dist.rotation", 0.0);
  spec.nu = kv.get_double("dist.nu", 5.0);
  spec.radius = kv.get_double("dist.radius", 1.0);
  return spec;
}

void DistributionSpec::to_kv(KvConfig& kv) const {
  kv.set("distribution", to_string(tag));
  kv.set_u64("dist.dim", dim);
  kv.set_double("dist.alpha", alpha);
  kv.set("dist.base", to_string(base));
  kv.set("dist.contaminant", to_string(contaminant));
  kv.set_double("dist.along_var", along_var);
  kv.set_double("dist.perp_var", perp_var);
  kv.set_u64("dist.slices", slices);
  kv.set_double("dist.rotation", rotation);
  kv.set_double("dist.nu", nu);
  kv.set_double("dist.radius", radius);
}

ExperimentSpec ExperimentSpec::from_kv(const KvConfig& kv) {
  ExperimentSpec spec;
  spec.distribution = DistributionSpec::from_kv(kv);
  spec.n_samples = kv.get_u64("n_samples", 10000);
  spec.seed = kv.get_u64("seed", 1);
  spec.outputs = kv.get_string("outputs", "");
  spec.record_every = kv.get_u64("record_every", 200);

  spec.loss.lambda1 = kv.get_double("loss.lambda1", 0.0);
  spec.loss.lambda2 = kv.get_double("loss.lambda2", 0.0);
  spec.loss.lambda3 = kv.get_double("loss.lambda3", 0.0);
  spec.loss.beta1 = kv.get_double("loss.beta1", 0.0);
  spec.loss.beta2 = kv.get_double("loss.beta2", 0.0);
  spec.loss.w1_weight = kv.get_double("loss.w1_weight", 0.0);
  spec.loss.var_target = kv.get_double("loss.var_target", 1.0);
  spec.loss.var_eps = kv.get_double("loss.var_eps", 1e-4);
  spec.loss.m_spacing = kv.get_u64("loss.m_spacing", 0);
  spec.loss.tie_eps = kv.get_double("loss.tie_eps", 1e-12);

  spec.schedule.total_steps = kv.get_u64("schedule.total_steps", 20000);
  spec.schedule.base_lr = kv.get_double("schedule.base_lr", 5e-3);
  spec.schedule.warmup_steps =
      kv.get_u64("schedule.warmup_steps", spec.schedule.total_steps / 100);
  spec.schedule.final_lr_fraction =
      kv.get_double("schedule.final_lr_fraction", 0.0);
  return spec;
}

void ExperimentSpec::to_kv(KvConfig& kv) const {
  distribution.to_kv(kv);
  kv.set_u64("n_samples", n_samples);
  kv.set_u64("seed", seed);
  kv.set("outputs", outputs.empty() ? output_dir() : outputs);
  kv.set_u64("record_every", record_every);
  kv.set_double("loss.lambda1", loss.lambda1);
  kv.set_double("loss.lambda2", loss.lambda2);
  kv.set_double("loss.lambda3", loss.lambda3);
  kv.set_double("loss.beta1", loss.beta1);
  kv.set_double("loss.beta2", loss.beta2);
  kv.set_double("loss.w1_weight", loss.w1_weight);
  kv.set_double("loss.var_target", loss.var_target);
  kv.set_double("loss.var_eps", loss.var_eps);
  kv.set_u64("loss.m_spacing", loss.m_spacing);
  kv.set_double("loss.tie_eps", loss.tie_eps);
  kv.set_u64("schedule.total_steps", schedule.total_steps);
  kv.set_double("schedule.base_lr", schedule.base_lr);
  kv.set_u64("schedule.warmup_steps", schedule.warmup_steps);
  kv.set_double("schedule.final_lr_fraction", schedule.final_lr_fraction);
}

std::vector<std::string> ExperimentSpec::header_lines() const {
  KvConfig kv;
  to_kv(kv);
  return kv.lines();
}

std::string ExperimentSpec::output_dir() const {
  if (!outputs.empty()) return outputs;
  const char* root = std::getenv("RADIAL_OUT_ROOT");
  return root != nullptr && root[0] != '\0' ? root : ".";
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.init = spec.distribution.sample(spec.n_samples, spec.seed);
  result.opt = optimize_samples(result.init, spec.loss, spec.schedule,
                                spec.seed, spec.record_every);
  return result;
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectoryRecord>& trajectory,
                          const std::vector<std::string>& comment_lines) {
  std::vector<std::vector<double>> rows;
  rows.reserve(trajectory.size());
  for (const TrajectoryRecord& rec : trajectory) {
    rows.push_back({static_cast<double>(rec.step), rec.lr, rec.report.total,
                    rec.report.invariance, rec.report.variance,
                    rec.report.covariance, rec.report.radial_ce,
                    rec.report.radial_entropy, rec.report.radial_w1,
                    rec.kl_to_chi, rec.e2mc});
  }
  write_table_csv(path, comment_lines,
                  {"step", "lr", "total", "invariance", "variance",
                   "covariance", "radial_ce", "radial_entropy", "radial_w1",
                   "kl_to_chi", "e2mc"},
                  rows);
}

void write_metric_report_csv(const std::string& path, const MetricReport& rep,
                             const std::vector<std::string>& comment_lines) {
  write_table_csv(
      path, comment_lines,
      {"w1_radii_to_chi", "w1_radii_to_chi_se", "w1_2d_to_gaussian",
       "w1_2d_to_gaussian_se", "ks_angles_uniform", "ks_radii_chi",
       "cov_offdiag_max", "mean_norm"},
      {{rep.w1_radii_to_chi, rep.w1_radii_to_chi_se, rep.w1_2d_to_gaussian,
        rep.w1_2d_to_gaussian_se, rep.ks_angles_uniform, rep.ks_radii_chi,
        rep.cov_offdiag_max, rep.mean_norm}});
}

SweepSpec SweepSpec::from_kv(const KvConfig& kv) {
  SweepSpec spec;
  spec.base = ExperimentSpec::from_kv(kv);
  spec.alpha = kv.get_double_list("sweep.alpha");
  spec.lr = kv.get_double_list("sweep.lr");
  spec.beta1 = kv.get_double_list("sweep.beta1");
  spec.beta2 = kv.get_double_list("sweep.beta2");
  spec.lambda2 = kv.get_double_list("sweep.lambda2");
  spec.lambda3 = kv.get_double_list("sweep.lambda3");
  spec.seeds = kv.get_u64_list("sweep.seeds");
  spec.jobs = kv.get_u64("sweep.jobs", 1);

  if (spec.alpha.empty()) spec.alpha = {spec.base.distribution.alpha};
  if (spec.lr.empty()) spec.lr = {spec.base.schedule.base_lr};
  if (spec.beta1.empty()) spec.beta1 = {spec.base.loss.beta1};
  if (spec.beta2.empty()) spec.beta2 = {spec.base.loss.beta2};
  if (spec.lambda2.empty()) spec.lambda2 = {spec.base.loss.lambda2};
  if (spec.lambda3.empty()) spec.lambda3 = {spec.base.loss.lambda3};
  if (spec.seeds.empty()) spec.seeds = {spec.base.seed};
  return spec;
}

std::size_t SweepSpec::config_count() const {
  return alpha.size() * lr.size() * beta1.size() * beta2.size() *
         lambda2.size() * lambda3.size();
}

std::size_t SweepSpec::row_count() const {
  return config_count() * seeds.size();
}

namespace {

SweepRow build_row(const SweepSpec& spec, std::size_t row_index) {
  const std::size_t n_seeds = spec.seeds.size();
  const std::size_t config_index = row_index / n_seeds;
  std::size_t rest = config_index;
  const std::size_t i_l3 = rest % spec.lambda3.size();
  rest /= spec.lambda3.size();
  const std::size_t i_l2 = rest % spec.lambda2.size();
  rest /= spec.lambda2.size();
  const std::size_t i_b2 = rest % spec.beta2.size();
  rest /= spec.beta2.size();
  const std::size_t i_b1 = rest % spec.beta1.size();
  rest /= spec.beta1.size();
  const std::size_t i_lr = rest % spec.lr.size();
  rest /= spec.lr.size();
  const std::size_t i_alpha = rest;

  SweepRow row;
  row.row_index = row_index;
  row.config_index = config_index;
  row.alpha_index = i_alpha;
  row.alpha = spec.alpha[i_alpha];
  row.lr = spec.lr[i_lr];
  row.beta1 = spec.beta1[i_b1];
  row.beta2 = spec.beta2[i_b2];
  row.lambda2 = spec.lambda2[i_l2];
  row.lambda3 = spec.lambda3[i_l3];
  row.seed = spec.seeds[row_index % n_seeds];
  return row;
}

void run_row(const SweepSpec& spec, SweepRow& row,
             const std::string& out_dir) {
  ExperimentSpec exp = spec.base;
  exp.distribution.alpha = row.alpha;
  exp.schedule.base_lr = row.lr;
  exp.loss.beta1 = row.beta1;
  exp.loss.beta2 = row.beta2;
  exp.loss.lambda2 = row.lambda2;
  exp.loss.lambda3 = row.lambda3;
  exp.seed = row.seed;
  exp.outputs = out_dir;

  // Configs sharing (alpha, seed) start from the same initial sample and are
  // measured against the same reference draws, so method comparisons pair up.
  const std::uint64_t init_seed =
      mix_seed(row.seed, kInitSalt + row.alpha_index);
  const std::uint64_t metric_seed =
      mix_seed(row.seed, kMetricSalt + row.alpha_index);
  const std::uint64_t run_seed =
      mix_seed(row.seed, kRunSalt + row.config_index);

  row.trajectory_path = out_dir + "/sweep_row_" +
                        std::to_string(row.row_index) + "_trajectory.csv";
  try {
    const SampleSet init =
        exp.distribution.sample(exp.n_samples, init_seed);
    row.w1_gauss_init = w1_to_gaussian(init, 5, metric_seed);
    OptimizeResult opt = optimize_samples(init, exp.loss, exp.schedule,
                                          run_seed, exp.record_every);
    const SampleSet& final_set = opt.samples;
    row.w1_gauss_final = w1_to_gaussian(final_set, 5, metric_seed);
    row.w1_radii_chi_final =
        w1_radii_to_chi(final_set, 5, mix_seed(metric_seed, 9));
    row.ks_angles_final =
        final_set.dim == 2 ? ks_uniform_angles(final_set) : nan_value();
    row.ks_radii_final = ks_radii_chi(final_set);
    row.best_total = std::numeric_limits<double>::infinity();
    for (const TrajectoryRecord& rec : opt.trajectory) {
      row.best_total = std::min(row.best_total, rec.report.total);
    }
    row.final_total = opt.trajectory.back().report.total;
    write_trajectory_csv(row.trajectory_path, opt.trajectory,
                         exp.header_lines());
    row.ok = true;
    row.status = "ok";
  } catch (const std::exception& e) {
    row.ok = false;
    row.status = sanitize_cell(e.what());
    row.w1_gauss_init = row.w1_gauss_final = nan_value();
    row.w1_radii_chi_final = row.ks_angles_final = row.ks_radii_final =
        nan_value();
    row.best_total = row.final_total = nan_value();
  }
}

void write_sweep_results(const SweepSpec& spec,
                         const std::vector<SweepRow>& rows,
                         const std::string& path) {
  KvConfig kv;
  spec.base.to_kv(kv);
  std::vector<std::string> header = kv.lines();
  header.push_back("rows = " + std::to_string(rows.size()));

  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const SweepRow& row : rows) {
    cells.push_back({std::to_string(row.row_index),
                     std::to_string(row.config_index),
                     format_double(row.alpha), format_double(row.lr),
                     format_double(row.beta1), format_double(row.beta2),
                     format_double(row.lambda2), format_double(row.lambda3),
                     std::to_string(row.seed),
                     row.is_radial() ? "radial_vcreg" : "vcreg", row.status,
                     format_double(row.w1_gauss_init),
                     format_double(row.w1_gauss_final),
                     format_double(row.w1_radii_chi_final),
                     format_double(row.ks_angles_final),
                     format_double(row.ks_radii_final),
                     format_double(row.best_total),
                     format_double(row.final_total), row.trajectory_path});
  }
  write_string_table_csv(
      path, header,
      {"row", "config", "alpha", "lr", "beta1", "beta2", "lambda2", "lambda3",
       "seed", "method", "status", "w1_gauss_init", "w1_gauss_final",
       "w1_radii_chi_final", "ks_angles_final", "ks_radii_final",
       "best_total", "final_total", "trajectory"},
      cells);
}

struct MethodAlphaSummary {
  double best = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t configs = 0;
};

void write_sweep_summary(const std::vector<SweepRow>& rows,
                         const std::string& summary_path,
                         const std::string& figure_path) {
  // Per (method, alpha, config): mean over seeds of the final W1; the
  // figure plots the best config per method per alpha, matching the
  // best-of-grid reading of the mixture experiment.
  std::map<std::pair<std::string, double>, std::map<std::size_t,
                                                    std::pair<double, bool>>>
      per_config;  // (method, alpha) -> config -> (sum, any_seed_failed)
  for (const SweepRow& row : rows) {
    const std::string method = row.is_radial() ? "radial_vcreg" : "vcreg";
    auto& slot = per_config[{method, row.alpha}][row.config_index];
    if (!row.ok) {
      slot.second = true;
    } else {
      slot.first += row.w1_gauss_final;
    }
  }
  std::map<std::size_t, std::size_t> config_rows;
  for (const SweepRow& row : rows) config_rows[row.config_index]++;

  std::map<std::pair<std::string, double>, MethodAlphaSummary> summary;
  for (const auto& [key, configs] : per_config) {
    for (const auto& [config, acc] : configs) {
      if (acc.second) continue;  // a seed failed
      const double mean =
          acc.first / static_cast<double>(config_rows[config]);
      auto& s = summary[key];
      s.best = std::min(s.best, mean);
      s.sum += mean;
      s.configs += 1;
    }
  }

  std::vector<std::vector<std::string>> cells;
  std::map<std::string, std::vector<std::pair<double, double>>> best_series;
  for (const auto& [key, s] : summary) {
    if (s.configs == 0) continue;
    const double mean = s.sum / static_cast<double>(s.configs);
    cells.push_back({key.first, format_double(key.second), "best",
                     format_double(s.best)});
    cells.push_back(
        {key.first, format_double(key.second), "mean", format_double(mean)});
    best_series[key.first].emplace_back(key.second, s.best);
  }
  write_string_table_csv(summary_path, {},
                         {"method", "alpha", "aggregation", "w1_to_gaussian"},
                         cells);

  std::vector<LineSeries> series;
  for (auto& [method, points] : best_series) {
    std::sort(points.begin(), points.end());
    series.push_back({method, points});
  }
  if (!series.empty()) {
    write_lines_svg(figure_path, series, "W1 to N(0,I) vs mixture weight",
                    "alpha", "W1 to N(0,I)");
  }
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  const std::size_t n_rows = spec.row_count();
  if (n_rows == 0) throw ConfigError("run_sweep: empty sweep");
  const std::string out_dir = spec.base.output_dir();
  std::filesystem::create_directories(out_dir);

  std::vector<SweepRow> rows(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) rows[i] = build_row(spec, i);

  const std::size_t jobs = std::max<std::size_t>(1, spec.jobs);
  if (jobs == 1) {
    for (SweepRow& row : rows) run_row(spec, row, out_dir);
  } else {
    const int threads_per_job = std::max(
        1, par::max_threads() / static_cast<int>(jobs));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) {
      pool.emplace_back([&, threads_per_job]() {
        par::set_threads(threads_per_job);
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= rows.size()) break;
          run_row(spec, rows[i], out_dir);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  SweepResult result;
  result.rows = std::move(rows);
  result.results_csv = out_dir + "/sweep_results.csv";
  result.summary_csv = out_dir + "/sweep_summary.csv";
  result.figure_svg = out_dir + "/sweep_w1_vs_alpha.svg";
  write_sweep_results(spec, result.rows, result.results_csv);
  write_sweep_summary(result.rows, result.summary_csv, result.figure_svg);
  return result;
}

}  // namespace radial
