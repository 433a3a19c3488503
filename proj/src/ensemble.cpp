#include "hyperlab/ensemble.hpp"

#include <exception>
#include <stdexcept>

#include "hyperlab/explorer.hpp"
#include "hyperlab/rng.hpp"

namespace hyperlab {

namespace {

void check_config(const EnsembleConfig& config) {
  if (config.runs < 1) throw std::invalid_argument("ensemble: runs must be >= 1");
  if (config.workers < 1) throw std::invalid_argument("ensemble: workers must be >= 1");
}

RunSummary one_run(const EnsembleConfig& config, int64_t i) {
  const uint64_t seed = stream_seed(config.master_seed, static_cast<uint64_t>(i));
  return summarize_trace(explore_implicit(config.params, seed), config.top_r, seed);
}

}  // namespace

std::vector<RunSummary> run_ensemble_serial(const EnsembleConfig& config) {
  check_config(config);
  std::vector<RunSummary> out(static_cast<size_t>(config.runs));
  for (int64_t i = 0; i < config.runs; ++i) out[i] = one_run(config, i);
  return out;
}

std::vector<RunSummary> run_ensemble(const EnsembleConfig& config) {
  check_config(config);
  std::vector<RunSummary> out(static_cast<size_t>(config.runs));
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(config.workers)
  for (int64_t i = 0; i < config.runs; ++i) {
    try {
      out[i] = one_run(config, i);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<ExcursionSample> excursion_ensemble_serial(double alpha, double grid_step,
                                                       double horizon, int top_r,
                                                       int64_t runs, uint64_t master_seed) {
  if (runs < 1) throw std::invalid_argument("ensemble: runs must be >= 1");
  std::vector<ExcursionSample> out(static_cast<size_t>(runs));
  for (int64_t i = 0; i < runs; ++i)
    out[i] = simulate_excursions(alpha, grid_step, horizon, top_r,
                                 stream_seed(master_seed, static_cast<uint64_t>(i)));
  return out;
}

std::vector<ExcursionSample> excursion_ensemble(double alpha, double grid_step,
                                                double horizon, int top_r, int64_t runs,
                                                uint64_t master_seed, int workers) {
  if (runs < 1) throw std::invalid_argument("ensemble: runs must be >= 1");
  if (workers < 1) throw std::invalid_argument("ensemble: workers must be >= 1");
  std::vector<ExcursionSample> out(static_cast<size_t>(runs));
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int64_t i = 0; i < runs; ++i) {
    try {
      out[i] = simulate_excursions(alpha, grid_step, horizon, top_r,
                                   stream_seed(master_seed, static_cast<uint64_t>(i)));
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<double> excursion_order_stat(std::span<const ExcursionSample> samples,
                                         int order) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.ordered_lengths.size() < static_cast<size_t>(order))
      throw std::runtime_error("excursion run produced fewer excursions than requested");
    out.push_back(s.ordered_lengths[static_cast<size_t>(order) - 1]);
  }
  return out;
}

}  // namespace hyperlab
