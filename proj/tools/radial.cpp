// Batch CLI for the radial Gaussianization lab: sample synthetic
// distributions, optimize sample sets by gradient descent on the loss,
// evaluate distribution diagnostics, apply pushforward maps, and run sweeps.
//
// Exit codes: 0 ok, 2 usage/config, 3 numerical failure, 4 I/O.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "radial/experiment.hpp"
#include "radial/maps.hpp"
#include "radial/svg.hpp"

namespace {

using namespace radial;

struct Overrides {
  std::string spec_path;
  std::vector<std::string> sets;

  void attach(CLI::App* cmd) {
    cmd->add_option("--spec", spec_path, "key = value spec file");
    cmd->add_option("--set", sets,
                    "override a spec entry, e.g. --set loss.beta1=10");
  }

  KvConfig load() const {
    KvConfig kv = spec_path.empty() ? KvConfig()
                                    : KvConfig::from_file(spec_path);
    for (const std::string& entry : sets) {
      const auto eq = entry.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("--set expects key=value, got: " + entry);
      }
      kv.set(entry.substr(0, eq), entry.substr(eq + 1));
    }
    return kv;
  }
};

void fail_on_unread(const KvConfig& kv) {
  const std::vector<std::string> unread = kv.unread_keys();
  if (unread.empty()) return;
  std::string msg = "unknown spec keys:";
  for (const std::string& key : unread) msg += " " + key;
  throw ConfigError(msg);
}

std::string ensure_dir(const std::string& dir) {
  std::filesystem::create_directories(dir);
  return dir;
}

void print_sample_summary(const SampleSet& z) {
  const MetricReport rep = compute_metrics(z, 0);
  std::cout << "n=" << z.count << " d=" << z.dim
            << " mean_norm=" << rep.mean_norm
            << " cov_offdiag_max=" << rep.cov_offdiag_max
            << " ks_radii_chi=" << rep.ks_radii_chi;
  if (z.dim == 2) std::cout << " ks_angles_uniform=" << rep.ks_angles_uniform;
  std::cout << "\n";
}

int cmd_sample(const Overrides& ov, const std::string& out_path) {
  KvConfig kv = ov.load();
  const ExperimentSpec spec = ExperimentSpec::from_kv(kv);
  fail_on_unread(kv);
  const SampleSet z = spec.distribution.sample(spec.n_samples, spec.seed);
  const std::string dir = ensure_dir(spec.output_dir());
  const std::string path = out_path.empty() ? dir + "/samples.csv" : out_path;
  write_sample_set_csv(path, z, spec.header_lines());
  std::cout << "wrote " << path << "\n";
  print_sample_summary(z);
  return 0;
}

int cmd_optimize(const Overrides& ov, const std::string& input_path,
                 bool emit_svg) {
  KvConfig kv = ov.load();
  const ExperimentSpec spec = ExperimentSpec::from_kv(kv);
  fail_on_unread(kv);
  const std::string dir = ensure_dir(spec.output_dir());

  SampleSet init = input_path.empty()
                       ? spec.distribution.sample(spec.n_samples, spec.seed)
                       : read_sample_set_csv(input_path);
  const OptimizeResult result = optimize_samples(
      init, spec.loss, spec.schedule, spec.seed, spec.record_every);

  const std::string traj = dir + "/trajectory.csv";
  const std::string fin = dir + "/final_samples.csv";
  write_trajectory_csv(traj, result.trajectory, spec.header_lines());
  write_sample_set_csv(fin, result.samples, spec.header_lines());
  if (emit_svg && result.samples.dim >= 2) {
    write_scatter_svg(dir + "/final_scatter.svg", result.samples,
                      "optimized samples", spec.header_lines());
  }
  std::cout << "wrote " << traj << "\nwrote " << fin << "\n"
            << "final total=" << result.trajectory.back().report.total
            << " kl_to_chi=" << result.trajectory.back().kl_to_chi << "\n";
  return 0;
}

int cmd_evaluate(const Overrides& ov, const std::string& input_path,
                 const std::string& reference, std::uint64_t seed) {
  if (reference != "gaussian") {
    throw ConfigError("evaluate: unsupported reference tag: " + reference);
  }
  KvConfig kv = ov.load();
  const ExperimentSpec spec = ExperimentSpec::from_kv(kv);
  fail_on_unread(kv);
  const std::string dir = ensure_dir(spec.output_dir());

  const SampleSet z = read_sample_set_csv(input_path);
  const MetricReport rep = compute_metrics(z, seed);
  std::vector<std::string> header = spec.header_lines();
  header.push_back("input = " + input_path);
  write_metric_report_csv(dir + "/metrics.csv", rep, header);

  const std::vector<double> radii = z.radii();
  const ChiModel chi(z.dim);
  write_histogram_svg(dir + "/radius_hist.svg", radii, 60,
                      [&](double r) { return r > 0.0 ? chi.pdf(r) : 0.0; },
                      "radius distribution vs chi(d)", "radius", header);
  write_histogram_csv(dir + "/radius_hist.csv", radii, 60, header);
  if (z.dim == 2) {
    std::vector<double> angles(z.count);
    for (std::size_t i = 0; i < z.count; ++i) {
      angles[i] = std::atan2(z(i, 1), z(i, 0));
    }
    write_histogram_svg(dir + "/angle_hist.svg", angles, 60,
                        [](double) { return 1.0 / (2.0 * std::numbers::pi); },
                        "angle distribution", "angle", header);
  }
  std::cout << "wrote " << dir << "/metrics.csv\n"
            << "w1_radii_to_chi=" << rep.w1_radii_to_chi
            << " w1_2d_to_gaussian=" << rep.w1_2d_to_gaussian
            << " ks_radii_chi=" << rep.ks_radii_chi
            << " ks_angles_uniform=" << rep.ks_angles_uniform << "\n";
  return 0;
}

int cmd_map(const Overrides& ov, const std::string& input_path,
            const std::string& kind_name, const std::string& out_path,
            std::uint64_t seed) {
  KvConfig kv = ov.load();
  const ExperimentSpec spec = ExperimentSpec::from_kv(kv);
  fail_on_unread(kv);
  const std::string dir = ensure_dir(spec.output_dir());
  const MapKind kind = parse_map_kind(kind_name);

  const SampleSet z = read_sample_set_csv(input_path);
  const PushforwardMap map = fit_map(z, kind);
  const SampleSet mapped = apply_map(map, z);

  std::vector<std::string> header = spec.header_lines();
  header.push_back("input = " + input_path);
  header.push_back("map_kind = " + to_string(kind));
  const std::string mapped_path =
      out_path.empty() ? dir + "/mapped_samples.csv" : out_path;
  write_sample_set_csv(mapped_path, mapped, header);
  write_map_csv(dir + "/map_bundle.csv", map, header);
  write_metric_report_csv(dir + "/metrics_before.csv",
                          compute_metrics(z, seed), header);
  write_metric_report_csv(dir + "/metrics_after.csv",
                          compute_metrics(mapped, seed), header);
  std::cout << "wrote " << mapped_path << "\n"
            << "before: ks_radii_chi=" << ks_radii_chi(z)
            << " after: ks_radii_chi=" << ks_radii_chi(mapped) << "\n";
  return 0;
}

int cmd_sweep(const Overrides& ov, std::uint64_t jobs_override) {
  KvConfig kv = ov.load();
  SweepSpec spec = SweepSpec::from_kv(kv);
  fail_on_unread(kv);
  if (jobs_override > 0) spec.jobs = jobs_override;
  std::cout << "sweep: " << spec.config_count() << " configs x "
            << spec.seeds.size() << " seeds = " << spec.row_count()
            << " rows, jobs=" << spec.jobs << "\n";
  const SweepResult result = run_sweep(spec);
  std::size_t failed = 0;
  for (const SweepRow& row : result.rows) {
    if (!row.ok) ++failed;
  }
  std::cout << "wrote " << result.results_csv << "\nwrote "
            << result.summary_csv << "\n";
  if (failed > 0) {
    std::cerr << failed << "/" << result.rows.size() << " rows failed\n";
  }
  if (failed == result.rows.size()) {
    throw DivergenceError("sweep: all rows failed", 0);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial Gaussianization lab"};
  app.require_subcommand(1);

  Overrides ov_sample, ov_optimize, ov_evaluate, ov_map, ov_sweep;
  std::string sample_out, optimize_input, eval_input, map_input, map_out;
  std::string eval_reference = "gaussian";
  std::string map_kind = "radial";
  bool optimize_svg = false;
  std::uint64_t eval_seed = 1234;
  std::uint64_t map_seed = 1234;
  std::uint64_t sweep_jobs = 0;

  CLI::App* sample = app.add_subcommand("sample", "generate a sample set CSV");
  ov_sample.attach(sample);
  sample->add_option("--out", sample_out, "output CSV path");

  CLI::App* optimize =
      app.add_subcommand("optimize", "gradient descent over sample points");
  ov_optimize.attach(optimize);
  optimize->add_option("--input", optimize_input,
                       "start from this CSV instead of sampling");
  optimize->add_flag("--svg", optimize_svg, "emit a final scatter SVG");

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "metric report + histograms for a CSV");
  ov_evaluate.attach(evaluate);
  evaluate->add_option("--input", eval_input, "samples CSV")->required();
  evaluate->add_option("--reference", eval_reference,
                       "reference tag (gaussian)");
  evaluate->add_option("--metric-seed", eval_seed, "seed for W1 references");
  evaluate->add_option_function<std::string>(
      "--out-dir",
      [&ov_evaluate](const std::string& v) {
        ov_evaluate.sets.push_back("outputs=" + v);
      },
      "output directory");

  CLI::App* map_cmd =
      app.add_subcommand("map", "fit and apply a pushforward map");
  ov_map.attach(map_cmd);
  map_cmd->add_option("--input", map_input, "samples CSV")->required();
  map_cmd->add_option("--kind", map_kind, "vcreg | radial");
  map_cmd->add_option("--out", map_out, "mapped samples CSV path");
  map_cmd->add_option("--metric-seed", map_seed, "seed for W1 references");
  map_cmd->add_option_function<std::string>(
      "--out-dir",
      [&ov_map](const std::string& v) {
        ov_map.sets.push_back("outputs=" + v);
      },
      "output directory");

  CLI::App* sweep = app.add_subcommand("sweep", "run a hyperparameter sweep");
  ov_sweep.attach(sweep);
  sweep->add_option("--jobs", sweep_jobs, "parallel jobs (overrides spec)");

  // Shorthand overrides shared by spec-driven commands.
  for (auto& [cmd, ov] :
       std::vector<std::pair<CLI::App*, Overrides*>>{{sample, &ov_sample},
                                                     {optimize, &ov_optimize},
                                                     {sweep, &ov_sweep}}) {
    auto push = [ov](const std::string& key) {
      return [ov, key](const std::string& value) {
        ov->sets.push_back(key + "=" + value);
      };
    };
    cmd->add_option_function<std::string>("--dist", push("distribution"),
                                          "distribution tag");
    cmd->add_option_function<std::string>("--n", push("n_samples"),
                                          "sample count");
    cmd->add_option_function<std::string>("--seed", push("seed"), "RNG seed");
    cmd->add_option_function<std::string>("--alpha", push("dist.alpha"),
                                          "mixture weight");
    cmd->add_option_function<std::string>("--along-var",
                                          push("dist.along_var"),
                                          "x-distribution diagonal variance");
    cmd->add_option_function<std::string>("--perp-var", push("dist.perp_var"),
                                          "x-distribution cross variance");
    cmd->add_option_function<std::string>("--slices", push("dist.slices"),
                                          "sunshine slice count");
    cmd->add_option_function<std::string>("--nu", push("dist.nu"),
                                          "student-t dof");
    cmd->add_option_function<std::string>("--radius", push("dist.radius"),
                                          "sphere radius");
    cmd->add_option_function<std::string>("--dim", push("dist.dim"),
                                          "dimension");
    cmd->add_option_function<std::string>("--out-dir", push("outputs"),
                                          "output directory");
    cmd->add_option_function<std::string>("--steps",
                                          push("schedule.total_steps"),
                                          "optimizer steps");
    cmd->add_option_function<std::string>("--lr", push("schedule.base_lr"),
                                          "base learning rate");
    cmd->add_option_function<std::string>("--beta1", push("loss.beta1"),
                                          "radial CE weight");
    cmd->add_option_function<std::string>("--beta2", push("loss.beta2"),
                                          "radial entropy weight");
    cmd->add_option_function<std::string>("--lambda1", push("loss.lambda1"),
                                          "invariance weight");
    cmd->add_option_function<std::string>("--lambda2", push("loss.lambda2"),
                                          "variance weight");
    cmd->add_option_function<std::string>("--lambda3", push("loss.lambda3"),
                                          "covariance weight");
    cmd->add_option_function<std::string>("--w1-weight", push("loss.w1_weight"),
                                          "radial W1 weight");
    cmd->add_option_function<std::string>("--record-every",
                                          push("record_every"),
                                          "trajectory cadence");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed()) return cmd_sample(ov_sample, sample_out);
    if (optimize->parsed())
      return cmd_optimize(ov_optimize, optimize_input, optimize_svg);
    if (evaluate->parsed())
      return cmd_evaluate(ov_evaluate, eval_input, eval_reference, eval_seed);
    if (map_cmd->parsed())
      return cmd_map(ov_map, map_input, map_kind, map_out, map_seed);
    if (sweep->parsed()) return cmd_sweep(ov_sweep, sweep_jobs);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const NearOriginError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const RankError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 4;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
