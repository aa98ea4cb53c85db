// Timing comparison of the propagation backends and the candidate-search
// parallelism: dense spectral reference vs sector-blocked kernel, and
// serial vs OpenMP candidate sweeps. Run: bench_kernels [n_candidates]
#include <cstdio>
#include <cstdlib>
#include <omp.h>

#include "mblborn/datasets.hpp"
#include "mblborn/diagnostics.hpp"
#include "mblborn/trainer.hpp"

using namespace mblborn;

namespace {

TrainConfig base_config(int n_visible, int n_hidden, Engine engine) {
  TrainConfig cfg;
  cfg.chain.n_sites = n_visible + n_hidden;
  cfg.partition = Partition::contiguous(n_visible, n_hidden);
  cfg.n_quenches = 3;
  cfg.n_candidates = 64;
  cfg.disorder = 8.0;
  cfg.quench_time = 10.0;
  cfg.seed = 42;
  cfg.variant = n_hidden > 0 ? Variant::hidden : Variant::basic;
  cfg.engine = engine;
  return cfg;
}

double time_train(const TrainConfig& cfg, const VisibleDistribution& target,
                  ExecPolicy policy) {
  const double t0 = omp_get_wtime();
  const TrainingTrace trace = train(cfg, target, policy);
  const double t1 = omp_get_wtime();
  std::printf("    terminal loss %.3e (%llu propagation steps)\n",
              trace.records.back().loss,
              static_cast<unsigned long long>(trace.propagation_steps));
  return t1 - t0;
}

}  // namespace

int main(int argc, char** argv) {
  const int n_candidates = argc > 1 ? std::atoi(argv[1]) : 64;

  for (const int n_hidden : {0, 2}) {
    const int n_visible = 6;
    std::printf("== chain %d+%d, N=%d candidates, M=3 quenches ==\n", n_visible,
                n_hidden, n_candidates);
    const VisibleDistribution target = parity_dataset(n_visible);

    for (const Engine engine : {Engine::dense, Engine::blocked}) {
      TrainConfig cfg = base_config(n_visible, n_hidden, engine);
      cfg.n_candidates = n_candidates;
      const char* name = engine == Engine::dense ? "dense  " : "blocked";
      std::printf("  %s serial:\n", name);
      const double ts = time_train(cfg, target, ExecPolicy::serial);
      std::printf("  %s openmp (%d threads):\n", name, omp_get_max_threads());
      const double tp = time_train(cfg, target, ExecPolicy::parallel);
      std::printf("  %s serial %.3f s | openmp %.3f s | speedup %.2fx\n", name,
                  ts, tp, ts / tp);
    }
  }

  std::printf("== gap-ratio sweep, L=10, 32 realizations ==\n");
  ChainSpec spec;
  spec.n_sites = 10;
  double t0 = omp_get_wtime();
  const auto serial =
      level_spacing_ratios(spec, 8.0, 32, 7, DiagExec::serial);
  double t1 = omp_get_wtime();
  const auto parallel =
      level_spacing_ratios(spec, 8.0, 32, 7, DiagExec::parallel);
  double t2 = omp_get_wtime();
  std::printf("  serial %.3f s | openmp %.3f s | speedup %.2fx (mean r %.4f / %.4f)\n",
              t1 - t0, t2 - t1, (t1 - t0) / (t2 - t1), serial.mean_r,
              parallel.mean_r);
  return 0;
}
