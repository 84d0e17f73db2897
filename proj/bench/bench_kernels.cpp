// Timing comparison between the serial reference kernels and the OpenMP
// parallel path. Both must produce identical output; the benchmark verifies
// that before reporting speedups.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ghzlab/experiment.hpp"
#include "ghzlab/ghz.hpp"

namespace {

double now_seconds() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
#endif
}

int threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

int main() {
  std::printf("threads: %d\n", threads());

  {
    const double delta_max = 0.25;
    const int steps = 48;
    const std::uint64_t seed = 17;
    ghzlab::ghz::SweepOptions serial_opts;
    serial_opts.samples = 4000;
    serial_opts.policy = ghzlab::ExecPolicy::Serial;
    ghzlab::ghz::SweepOptions parallel_opts = serial_opts;
    parallel_opts.policy = ghzlab::ExecPolicy::Parallel;

    double t0 = now_seconds();
    const auto serial =
        ghzlab::ghz::epsilon_sweep(delta_max, steps, seed, serial_opts);
    const double serial_time = now_seconds() - t0;

    t0 = now_seconds();
    const auto parallel =
        ghzlab::ghz::epsilon_sweep(delta_max, steps, seed, parallel_opts);
    const double parallel_time = now_seconds() - t0;

    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < serial.size(); ++i)
      identical = serial[i].delta == parallel[i].delta &&
                  serial[i].worst_eps == parallel[i].worst_eps;

    std::printf("epsilon_sweep   steps=%d samples=%d\n", steps,
                serial_opts.samples);
    std::printf("  serial   %8.3f ms\n", serial_time * 1e3);
    std::printf("  openmp   %8.3f ms  speedup %.2fx  identical: %s\n",
                parallel_time * 1e3, serial_time / parallel_time,
                identical ? "yes" : "NO");
  }

  {
    ghzlab::harness::ExperimentConfig config;
    config.model = ghzlab::harness::Model::CorrelatedHv;
    config.rounds = 2000000;
    config.delta = 0.05;
    config.seed = 17;

    double t0 = now_seconds();
    const auto serial = ghzlab::harness::run_experiment(
        config, ghzlab::ExecPolicy::Serial);
    const double serial_time = now_seconds() - t0;

    t0 = now_seconds();
    const auto parallel = ghzlab::harness::run_experiment(
        config, ghzlab::ExecPolicy::Parallel);
    const double parallel_time = now_seconds() - t0;

    bool identical = true;
    for (std::size_t a = 0; a < 4; ++a)
      identical = identical &&
                  serial.combos[a].rounds == parallel.combos[a].rounds &&
                  serial.combos[a].product_sum ==
                      parallel.combos[a].product_sum;

    std::printf("run_experiment  rounds=%lld model=%s\n",
                static_cast<long long>(config.rounds),
                ghzlab::harness::model_name(config.model));
    std::printf("  serial   %8.3f ms\n", serial_time * 1e3);
    std::printf("  openmp   %8.3f ms  speedup %.2fx  identical: %s\n",
                parallel_time * 1e3, serial_time / parallel_time,
                identical ? "yes" : "NO");
  }
  return 0;
}
