// Times the OpenMP loss kernels against the serial reference implementations
// and reports throughput plus agreement. Run with OMP_NUM_THREADS to vary the
// team size.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "radial/distributions.hpp"
#include "radial/losses.hpp"
#include "radial/parallel.hpp"
#include "radial/reference.hpp"
#include "radial/special_math.hpp"

namespace {

using namespace radial;

double time_ms(const std::function<void()>& body, int reps) {
  body();  // warm up
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) body();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() /
         reps;
}

void report(const char* name, double ref_ms, double omp_ms, double ref_value,
            double omp_value) {
  const double rel = std::abs(ref_value - omp_value) /
                     std::max(1e-300, std::abs(ref_value));
  std::printf("%-22s ref %9.3f ms   omp %9.3f ms   speedup %5.2fx   "
              "value rel diff %.2e\n",
              name, ref_ms, omp_ms, ref_ms / omp_ms, rel);
}

void bench_case(std::size_t n, std::size_t d) {
  std::printf("-- N=%zu d=%zu (threads=%d)\n", n, d, par::max_threads());
  const SampleSet z = sample_gaussian(n, d, 42);
  LossConfig cfg;
  cfg.beta1 = 1.0;
  cfg.beta2 = 1.0;
  cfg.w1_weight = 1.0;
  const int reps = n >= 100000 ? 5 : 20;

  {
    double v_ref = 0.0, v_omp = 0.0;
    const double t_ref =
        time_ms([&] { v_ref = ref::variance_loss(z, cfg).value; }, reps);
    const double t_omp =
        time_ms([&] { v_omp = variance_loss(z, cfg).value; }, reps);
    report("variance", t_ref, t_omp, v_ref, v_omp);
  }
  {
    double v_ref = 0.0, v_omp = 0.0;
    const double t_ref =
        time_ms([&] { v_ref = ref::covariance_loss(z, cfg).value; }, reps);
    const double t_omp =
        time_ms([&] { v_omp = covariance_loss(z, cfg).value; }, reps);
    report("covariance", t_ref, t_omp, v_ref, v_omp);
  }
  {
    double v_ref = 0.0, v_omp = 0.0;
    const double t_ref =
        time_ms([&] { v_ref = ref::radial_ce_loss(z, cfg).value; }, reps);
    const double t_omp =
        time_ms([&] { v_omp = radial_ce_loss(z, cfg).value; }, reps);
    report("radial_ce", t_ref, t_omp, v_ref, v_omp);
  }
  {
    const std::vector<double> radii = z.radii();
    const std::size_t m = cfg.resolved_m(n);
    double v_ref = 0.0, v_omp = 0.0;
    const double t_ref = time_ms(
        [&] { v_ref = ref::m_spacing_entropy(radii, m, 1.0).value; }, reps);
    const double t_omp =
        time_ms([&] { v_omp = m_spacing_entropy(radii, m, 1.0).value; }, reps);
    report("m_spacing_entropy", t_ref, t_omp, v_ref, v_omp);
  }
  {
    const ChiModel chi(d);
    const std::vector<double> reference = chi.sample(n, 7);
    double v_ref = 0.0, v_omp = 0.0;
    const double t_ref = time_ms(
        [&] {
          v_ref = ref::w1_radial_loss_with_reference(z, cfg, reference).value;
        },
        reps);
    const double t_omp = time_ms(
        [&] {
          v_omp = w1_radial_loss_with_reference(z, cfg, reference).value;
        },
        reps);
    report("w1_radial", t_ref, t_omp, v_ref, v_omp);
  }
  {
    LossConfig full = cfg;
    full.lambda2 = 25.0;
    full.lambda3 = 25.0;
    const LossEvaluator evaluator(full, d);
    SampleSet grad;
    double v_omp = 0.0;
    const double t_omp = time_ms(
        [&] { v_omp = evaluator.evaluate(z, 5, &grad).total; }, reps);
    std::printf("%-22s                        omp %9.3f ms   (full step "
                "value %.6f)\n",
                "evaluate+gradient", t_omp, v_omp);
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 100000;
  if (argc > 1) n = std::stoul(argv[1]);
  bench_case(n, 2);
  bench_case(n / 10, 64);
  return 0;
}
