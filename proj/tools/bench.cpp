// Compares the serial reference ensemble against the OpenMP kernel: wall
// times, speedup, and a bit-equality check of the results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "hyperlab/ensemble.hpp"

using hyperlab::EnsembleConfig;
using hyperlab::ModelParams;
using hyperlab::RunSummary;

namespace {

double seconds(const std::chrono::steady_clock::time_point& a,
               const std::chrono::steady_clock::time_point& b) {
  return std::chrono::duration<double>(b - a).count();
}

bool same(const std::vector<RunSummary>& a, const std::vector<RunSummary>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].seed != b[i].seed || a[i].n_components != b[i].n_components ||
        a[i].top_sizes != b[i].top_sizes)
      return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int64_t n = 50000;
  int64_t runs = 100;
  if (argc > 1) n = std::atoll(argv[1]);
  if (argc > 2) runs = std::atoll(argv[2]);

  EnsembleConfig config;
  config.params = ModelParams::from_lambda(n, 3, 1.3);
  config.runs = runs;
  config.master_seed = 7;

  std::printf("ensemble benchmark: n=%lld k=3 lambda=1.3 runs=%lld\n",
              static_cast<long long>(n), static_cast<long long>(runs));

  const auto t0 = std::chrono::steady_clock::now();
  const auto reference = hyperlab::run_ensemble_serial(config);
  const auto t1 = std::chrono::steady_clock::now();
  const double serial_time = seconds(t0, t1);
  std::printf("%-18s %8.3f s\n", "serial reference", serial_time);

  const int max_workers = omp_get_max_threads();
  for (int w = 1; w <= max_workers; w *= 2) {
    config.workers = w;
    const auto a = std::chrono::steady_clock::now();
    const auto parallel = hyperlab::run_ensemble(config);
    const auto b = std::chrono::steady_clock::now();
    const double elapsed = seconds(a, b);
    const bool ok = same(reference, parallel);
    std::printf("openmp %2d workers  %8.3f s   speedup %.2fx   results %s\n", w,
                elapsed, serial_time / elapsed, ok ? "identical" : "DIFFER");
    if (!ok) return 1;
  }
  return 0;
}
