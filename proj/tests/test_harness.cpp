#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "radial/experiment.hpp"
#include "radial/io.hpp"
#include "radial/svg.hpp"

using namespace radial;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("radial_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> data_lines(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::size_t line_count(const fs::path& path) {
  return data_lines(path).size();
}

// CLI binary under test, injected by ctest.
const char* cli_path() { return std::getenv("RADIAL_CLI"); }

int run_cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string(cli_path()) + " " + args + " >" +
                          (dir / "stdout.txt").string() + " 2>" +
                          (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("kv config parsing") {
  const KvConfig kv = KvConfig::from_string(
      "# comment\n"
      "distribution = x\n"
      "loss.beta1 = 1.5\n"
      "sweep.alpha = 0.1, 0.5, 0.9\n"
      "seed = 42   # trailing comment\n");
  CHECK(kv.get_string("distribution", "") == "x");
  CHECK(kv.get_double("loss.beta1", 0.0) == 1.5);
  CHECK(kv.get_u64("seed", 0) == 42);
  CHECK(kv.get_double_list("sweep.alpha") ==
        std::vector<double>{0.1, 0.5, 0.9});
  CHECK(kv.unread_keys().empty());

  CHECK_THROWS_AS(KvConfig::from_string("a = 1\na = 2\n"), ParseError);
  CHECK_THROWS_AS(KvConfig::from_string("nonsense line\n"), ParseError);
  const KvConfig bad = KvConfig::from_string("x = not_a_number\n");
  CHECK_THROWS_AS(bad.get_double("x", 0.0), ConfigError);
}

TEST_CASE("unread keys are detected") {
  const KvConfig kv = KvConfig::from_string("a = 1\nb = 2\n");
  (void)kv.get_double("a", 0.0);
  CHECK(kv.unread_keys() == std::vector<std::string>{"b"});
}

TEST_CASE("experiment spec round-trips through kv form") {
  KvConfig kv = KvConfig::from_string(
      "distribution = mixture\n"
      "dist.alpha = 0.75\n"
      "n_samples = 500\n"
      "seed = 9\n"
      "loss.beta1 = 10\n"
      "loss.lambda2 = 25\n"
      "schedule.total_steps = 1234\n"
      "schedule.base_lr = 0.05\n");
  const ExperimentSpec spec = ExperimentSpec::from_kv(kv);
  CHECK(spec.distribution.tag == DistributionTag::kMixture);
  CHECK(spec.distribution.alpha == 0.75);
  CHECK(spec.n_samples == 500);
  CHECK(spec.loss.beta1 == 10.0);
  CHECK(spec.schedule.total_steps == 1234);
  // Default warmup is 1% of total steps
  CHECK(spec.schedule.warmup_steps == 12);

  KvConfig out;
  spec.to_kv(out);
  const ExperimentSpec again = ExperimentSpec::from_kv(out);
  CHECK(again.distribution.alpha == spec.distribution.alpha);
  CHECK(again.loss.beta1 == spec.loss.beta1);
  CHECK(again.schedule.warmup_steps == spec.schedule.warmup_steps);
  CHECK(again.n_samples == spec.n_samples);
}

TEST_CASE("sample set csv round trip is byte-exact") {
  const auto dir = fresh_dir("csv_roundtrip");
  const SampleSet z = sample_gaussian(200, 3, 77);
  const std::string path = (dir / "z.csv").string();
  write_sample_set_csv(path, z, {"spec line 1", "spec line 2"});
  const SampleSet back = read_sample_set_csv(path);
  CHECK(back.count == z.count);
  CHECK(back.dim == z.dim);
  CHECK(back.points == z.points);

  const std::string path2 = (dir / "z2.csv").string();
  write_sample_set_csv(path2, back, {"spec line 1", "spec line 2"});
  CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("csv parse errors carry line numbers") {
  const auto dir = fresh_dir("csv_errors");
  {
    std::ofstream out(dir / "bad_header.csv");
    out << "a,b\n1,2\n";
  }
  CHECK_THROWS_AS(read_sample_set_csv((dir / "bad_header.csv").string()),
                  ParseError);
  {
    std::ofstream out(dir / "bad_field.csv");
    out << "x0,x1\n1,2\n3,oops\n";
  }
  try {
    read_sample_set_csv((dir / "bad_field.csv").string());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  {
    std::ofstream out(dir / "empty.csv");
  }
  CHECK_THROWS_AS(read_sample_set_csv((dir / "empty.csv").string()),
                  ParseError);
  CHECK_THROWS_AS(read_sample_set_csv((dir / "missing.csv").string()),
                  IoError);
}

TEST_CASE("trajectory csv line count matches the cadence contract") {
  const auto dir = fresh_dir("traj");
  ExperimentSpec spec;
  spec.distribution.tag = DistributionTag::kX;
  spec.n_samples = 64;
  spec.loss.beta1 = 1.0;
  spec.schedule.total_steps = 100;
  spec.schedule.base_lr = 1e-3;
  spec.schedule.warmup_steps = 1;
  spec.seed = 3;

  for (std::size_t record_every : {7u, 10u, 100u, 33u}) {
    spec.record_every = record_every;
    const ExperimentResult res = run_experiment(spec);
    const std::string path = (dir / "t.csv").string();
    write_trajectory_csv(path, res.opt.trajectory, spec.header_lines());
    const double expected =
        std::ceil(100.0 / static_cast<double>(record_every)) + 2.0;
    CHECK(static_cast<double>(line_count(path)) == expected);
  }
}

TEST_CASE("output files embed the resolved spec") {
  const auto dir = fresh_dir("embed");
  ExperimentSpec spec;
  spec.n_samples = 32;
  spec.outputs = dir.string();
  spec.loss.beta1 = 2.5;
  const SampleSet z = spec.distribution.sample(spec.n_samples, spec.seed);
  write_sample_set_csv((dir / "s.csv").string(), z, spec.header_lines());
  const std::string text = slurp(dir / "s.csv");
  CHECK(text.find("# loss.beta1 = 2.5") != std::string::npos);
  CHECK(text.find("# distribution = x") != std::string::npos);
  CHECK(text.find("# schedule.total_steps = ") != std::string::npos);
}

TEST_CASE("svg emitters produce well-formed files") {
  const auto dir = fresh_dir("svg");
  const SampleSet z = sample_gaussian(500, 2, 5);
  write_scatter_svg((dir / "scatter.svg").string(), z, "test scatter");
  write_histogram_svg((dir / "hist.svg").string(), z.radii(), 30,
                      [](double) { return 0.5; }, "radii", "r");
  write_lines_svg((dir / "lines.svg").string(),
                  {{"a", {{0.0, 1.0}, {1.0, 2.0}}},
                   {"b", {{0.0, 2.0}, {1.0, 1.0}}}},
                  "series", "x", "y");
  for (const char* name : {"scatter.svg", "hist.svg", "lines.svg"}) {
    const std::string text = slurp(dir / name);
    CHECK(text.rfind("<svg", 0) == 0);
    CHECK(text.find("</svg>") != std::string::npos);
  }
}

TEST_CASE("sweep rows are deterministic and parallel-equal") {
  const auto dir1 = fresh_dir("sweep_seq");
  const auto dir2 = fresh_dir("sweep_par");
  KvConfig kv = KvConfig::from_string(
      "distribution = mixture\n"
      "n_samples = 64\n"
      "record_every = 25\n"
      "schedule.total_steps = 50\n"
      "loss.lambda2 = 1\n"
      "loss.lambda3 = 1\n"
      "sweep.alpha = 0.5, 0.99\n"
      "sweep.lr = 0.005\n"
      "sweep.beta1 = 0, 1\n"
      "sweep.seeds = 1, 2\n");
  SweepSpec spec = SweepSpec::from_kv(kv);
  CHECK(spec.config_count() == 4);
  CHECK(spec.row_count() == 8);

  spec.base.outputs = dir1.string();
  spec.jobs = 1;
  const SweepResult seq = run_sweep(spec);
  spec.base.outputs = dir2.string();
  spec.jobs = 4;
  const SweepResult par = run_sweep(spec);

  REQUIRE(seq.rows.size() == par.rows.size());
  for (std::size_t i = 0; i < seq.rows.size(); ++i) {
    CHECK(seq.rows[i].ok);
    CHECK(seq.rows[i].w1_gauss_final == par.rows[i].w1_gauss_final);
    CHECK(seq.rows[i].final_total == par.rows[i].final_total);
    CHECK(seq.rows[i].seed == par.rows[i].seed);
  }
  // Same config, different seeds: identical config columns, different W1
  CHECK(seq.rows[0].config_index == seq.rows[1].config_index);
  CHECK(seq.rows[0].seed != seq.rows[1].seed);
  CHECK(seq.rows[0].w1_gauss_final != seq.rows[1].w1_gauss_final);

  // Row-for-row identical CSVs modulo the differing output directory
  auto strip_dir = [](std::string text, const std::string& dir) {
    for (std::size_t at = text.find(dir); at != std::string::npos;
         at = text.find(dir)) {
      text.erase(at, dir.size());
    }
    return text;
  };
  CHECK(strip_dir(slurp(seq.results_csv), dir1.string()) ==
        strip_dir(slurp(par.results_csv), dir2.string()));
  CHECK(fs::exists(seq.summary_csv));
  CHECK(fs::exists(seq.figure_svg));
}

TEST_CASE("sweep records failures per row and continues") {
  const auto dir = fresh_dir("sweep_fail");
  KvConfig kv = KvConfig::from_string(
      "distribution = x\n"
      "n_samples = 64\n"
      "record_every = 50\n"
      "schedule.total_steps = 200\n"
      "loss.lambda2 = 25\n"
      "loss.lambda3 = 25\n"
      "loss.m_spacing = 500\n"  // exceeds N: the beta2 rows must fail
      "sweep.lr = 0.0005\n"
      "sweep.beta1 = 1\n"
      "sweep.beta2 = 0.5, 0\n"
      "sweep.seeds = 1\n");
  SweepSpec spec = SweepSpec::from_kv(kv);
  spec.base.outputs = dir.string();
  const SweepResult res = run_sweep(spec);
  REQUIRE(res.rows.size() == 2);
  CHECK_FALSE(res.rows[0].ok);  // m >= N
  CHECK(res.rows[0].status.find("m_spacing") != std::string::npos);
  CHECK(res.rows[1].ok);  // beta2 = 0 never evaluates the spacing term
}

TEST_CASE("cli: sample command") {
  REQUIRE(cli_path() != nullptr);
  const auto dir = fresh_dir("cli_sample");
  const std::string out = (dir / "samples.csv").string();

  CHECK(run_cli("sample --dist x --n 10000 --seed 1 --out " + out, dir) == 0);
  CHECK(line_count(out) == 10001);  // header + rows
  const SampleSet z = read_sample_set_csv(out);
  CHECK(z.count == 10000);
  CHECK(z.dim == 2);

  // Identity-covariance constraint violated: usage error
  CHECK(run_cli("sample --dist x --along-var 3 --out " + out, dir) == 2);
  // Unknown distribution tag
  CHECK(run_cli("sample --dist banana --out " + out, dir) == 2);
  // Unknown subcommand/flag
  CHECK(run_cli("frobnicate", dir) == 2);
}

TEST_CASE("cli: mixture sample row count") {
  REQUIRE(cli_path() != nullptr);
  const auto dir = fresh_dir("cli_mixture");
  const std::string out = (dir / "mix.csv").string();
  CHECK(run_cli("sample --dist mixture --alpha 0.5 --n 2000 --seed 3 --out " +
                    out,
                dir) == 0);
  CHECK(read_sample_set_csv(out).count == 2000);
}

TEST_CASE("cli: optimize with zero weights copies the input") {
  REQUIRE(cli_path() != nullptr);
  const auto dir = fresh_dir("cli_opt_zero");
  const std::string input = (dir / "input.csv").string();
  CHECK(run_cli("sample --dist gaussian --n 500 --seed 5 --out " + input,
                dir) == 0);
  CHECK(run_cli("optimize --input " + input +
                    " --steps 20 --record-every 10 --lr 0.01 --out-dir " +
                    dir.string(),
                dir) == 0);
  // Data rows unchanged byte-for-byte (headers differ by resolved spec)
  CHECK(data_lines(dir / "final_samples.csv") == data_lines(input));
  CHECK(line_count(dir / "trajectory.csv") == 2.0 + 2.0);  // ceil(20/10)+2
}

TEST_CASE("cli: optimize emits byte-identical outputs on rerun") {
  REQUIRE(cli_path() != nullptr);
  const auto dir1 = fresh_dir("cli_opt_a");
  const auto dir2 = fresh_dir("cli_opt_b");
  const std::string args =
      "optimize --dist x --n 256 --seed 7 --steps 120 --lr 0.005 "
      "--beta1 1 --beta2 0.1 --lambda2 1 --lambda3 1 --record-every 40 "
      "--out-dir ";
  CHECK(run_cli(args + dir1.string(), dir1) == 0);
  CHECK(run_cli(args + dir2.string(), dir2) == 0);
  auto strip = [](std::string text, const std::string& dir) {
    for (std::size_t at = text.find(dir); at != std::string::npos;
         at = text.find(dir)) {
      text.erase(at, dir.size());
    }
    return text;
  };
  CHECK(strip(slurp(dir1 / "final_samples.csv"), dir1.string()) ==
        strip(slurp(dir2 / "final_samples.csv"), dir2.string()));
  CHECK(strip(slurp(dir1 / "trajectory.csv"), dir1.string()) ==
        strip(slurp(dir2 / "trajectory.csv"), dir2.string()));
}

TEST_CASE("cli: optimize reports divergence with exit code 3") {
  REQUIRE(cli_path() != nullptr);
  const auto dir = fresh_dir("cli_diverge");
  // Input with an overflowing coordinate: the loss turns non-finite.
  SampleSet bad = sample_gaussian(64, 2, 2);
  bad(5, 1) = 1e300;
  const std::string input = (dir / "huge.csv").string();
  write_sample_set_csv(input, bad, {});
  CHECK(run_cli("optimize --input " + input +
                    " --steps 50 --lr 0.001 --beta1 1 --out-dir " +
                    dir.string(),
                dir) == 3);
  const std::string err = slurp(dir / "stderr.txt");
  CHECK(err.find("step") != std::string::npos);
}

TEST_CASE("cli: evaluate and map") {
  REQUIRE(cli_path() != nullptr);
  const auto dir = fresh_dir("cli_eval");
  const std::string input = (dir / "t.csv").string();
  CHECK(run_cli("sample --dist student_t --nu 5 --n 5000 --seed 11 --out " +
                    input,
                dir) == 0);
  CHECK(run_cli("evaluate --input " + input + " --out-dir " + dir.string(),
                dir) == 0);
  CHECK(fs::exists(dir / "metrics.csv"));
  CHECK(fs::exists(dir / "radius_hist.svg"));
  CHECK(fs::exists(dir / "angle_hist.svg"));

  CHECK(run_cli("map --input " + input + " --kind radial --out-dir " +
                    dir.string(),
                dir) == 0);
  CHECK(fs::exists(dir / "mapped_samples.csv"));
  CHECK(fs::exists(dir / "map_bundle.csv"));
  CHECK(fs::exists(dir / "metrics_before.csv"));
  CHECK(fs::exists(dir / "metrics_after.csv"));

  // Malformed CSV: parse error, exit 4
  {
    std::ofstream bad(dir / "bad.csv");
    bad << "x0,x1\n1,2\n3,banana\n";
  }
  CHECK(run_cli("evaluate --input " + (dir / "bad.csv").string() +
                    " --out-dir " + dir.string(),
                dir) == 4);
  CHECK(run_cli("evaluate --input " + (dir / "nothere.csv").string() +
                    " --out-dir " + dir.string(),
                dir) == 4);
}

TEST_CASE("cli: sweep runs and reports the grid") {
  REQUIRE(cli_path() != nullptr);
  const auto dir = fresh_dir("cli_sweep");
  {
    std::ofstream spec(dir / "sweep.spec");
    spec << "distribution = mixture\n"
            "n_samples = 64\n"
            "record_every = 25\n"
            "schedule.total_steps = 50\n"
            "loss.lambda2 = 1\n"
            "loss.lambda3 = 1\n"
            "outputs = " << dir.string() << "\n"
            "sweep.alpha = 0.01, 0.99\n"
            "sweep.lr = 0.005\n"
            "sweep.beta1 = 0, 1\n"
            "sweep.seeds = 1, 2\n";
  }
  CHECK(run_cli("sweep --spec " + (dir / "sweep.spec").string() + " --jobs 2",
                dir) == 0);
  CHECK(fs::exists(dir / "sweep_results.csv"));
  CHECK(fs::exists(dir / "sweep_summary.csv"));
  CHECK(fs::exists(dir / "sweep_w1_vs_alpha.svg"));
  const CsvTable table = read_csv_table((dir / "sweep_results.csv").string());
  CHECK(table.rows.size() == 8);
  // Both methods present with two alpha abscissae each
  const CsvTable summary =
      read_csv_table((dir / "sweep_summary.csv").string());
  std::size_t best_rows = 0;
  for (const auto& row : summary.rows) {
    if (row[summary.column_index("aggregation")] == "best") ++best_rows;
  }
  CHECK(best_rows == 4);  // 2 methods x 2 alphas
}

TEST_CASE("cli: unknown spec keys are rejected") {
  REQUIRE(cli_path() != nullptr);
  const auto dir = fresh_dir("cli_unknown");
  {
    std::ofstream spec(dir / "bad.spec");
    spec << "distribution = x\nloss.beta_one = 1\n";
  }
  CHECK(run_cli("sample --spec " + (dir / "bad.spec").string() + " --out " +
                    (dir / "o.csv").string(),
                dir) == 2);
}
