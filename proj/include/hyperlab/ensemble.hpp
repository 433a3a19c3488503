#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hyperlab/stats.hpp"
#include "hyperlab/theory.hpp"

namespace hyperlab {

// One batch of independent exploration runs. Run i always uses the stream
// seed stream_seed(master_seed, i), so the results are a pure function of
// the config, independent of scheduling and worker count.
struct EnsembleConfig {
  ModelParams params;
  int64_t runs = 1;
  uint64_t master_seed = 0;
  int workers = 1;  // OpenMP thread cap for the parallel kernel
  int top_r = 2;    // order statistics kept per run
};

// Serial reference implementation: a plain loop, kept as the correctness
// baseline for the parallel kernel.
std::vector<RunSummary> run_ensemble_serial(const EnsembleConfig& config);

// OpenMP kernel; bit-identical to the serial reference for any worker count.
std::vector<RunSummary> run_ensemble(const EnsembleConfig& config);

// Independent excursion simulations keeping the top_r longest lengths each.
// Same seed-stream contract as run_ensemble.
std::vector<ExcursionSample> excursion_ensemble(double alpha, double grid_step,
                                                double horizon, int top_r, int64_t runs,
                                                uint64_t master_seed, int workers);

// Serial reference for excursion_ensemble.
std::vector<ExcursionSample> excursion_ensemble_serial(double alpha, double grid_step,
                                                       double horizon, int top_r,
                                                       int64_t runs, uint64_t master_seed);

// Column extraction: the order-th longest length of every sample. Throws if
// some run produced fewer excursions.
std::vector<double> excursion_order_stat(std::span<const ExcursionSample> samples,
                                         int order);

}  // namespace hyperlab
