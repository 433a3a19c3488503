#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hyperlab/explorer.hpp"
#include "hyperlab/theory.hpp"

namespace hyperlab {

// Per-run functionals: the top component sizes (descending) and the
// component count, together with the seed that produced them.
struct RunSummary {
  uint64_t seed = 0;
  int64_t n_components = 0;
  std::vector<int64_t> top_sizes;

  // 1-based order statistic; 0 when the run had fewer components.
  int64_t L(int i) const {
    return (i >= 1 && static_cast<size_t>(i) <= top_sizes.size()) ? top_sizes[i - 1] : 0;
  }
  int64_t L1() const { return L(1); }
  int64_t L2() const { return L(2); }
};

RunSummary summarize_trace(const ExplorationTrace& trace, int top_r, uint64_t seed);

// Aggregate view of an ensemble of largest-component sizes against the
// limiting normal law.
struct NormalityReport {
  int64_t m = 0;
  double sample_mean = 0.0;
  double sample_var = 0.0;
  double theory_mean = 0.0;  // rho_k * n
  double theory_var = 0.0;   // sigma_sq
  double ks_statistic = 0.0;
  double ks_p_value = 0.0;
  std::vector<double> standardized;  // (L1_i - theory_mean)/sqrt(theory_var), run order
};

NormalityReport standardize(const std::vector<RunSummary>& summaries,
                            const ModelParams& params);

// Standard normal CDF (erfc-based, absolute error well below 1e-7).
double normal_cdf(double x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

// One-sample Kolmogorov-Smirnov test of an ascending sample against a CDF.
// p-value from the asymptotic Kolmogorov distribution at sqrt(m) * D.
KsResult ks_test(std::span<const double> sorted_sample,
                 const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov test; both inputs ascending.
KsResult ks_test_two_sample(std::span<const double> a, std::span<const double> b);

// Survival function of the Kolmogorov distribution,
// Q(z) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 z^2).
double kolmogorov_sf(double z);

// Lengths of the maximal intervals where the drifted path
// w(s) + alpha s - s^2/2 exceeds its running minimum, by Euler simulation.
struct ExcursionSample {
  double alpha = 0.0;
  double grid_step = 0.0;
  std::vector<double> ordered_lengths;  // descending, top r
  double simulated_time = 0.0;          // may exceed the horizon (trailing closure)
  int64_t renewal_steps = 0;            // steps that set a new running minimum
};

// Simulates until the horizon and then until the open excursion (if any)
// closes; throws if that takes longer than half the horizon again, so a too
// short horizon fails loudly instead of truncating.
ExcursionSample simulate_excursions(double alpha, double grid_step, double horizon,
                                    int r, uint64_t seed);

// Past s ~ alpha the drift is restoring, so excursions beyond this horizon
// are vanishingly rare.
double default_excursion_horizon(double alpha);

// Two-sample KS on unsorted data (sorted internally).
KsResult critical_compare(std::span<const double> sample_a,
                          std::span<const double> sample_b);

// Chi-square homogeneity test of two binned histograms. Adjacent bins are
// pooled until each merged bin holds at least min_bin_total observations.
struct Chi2Result {
  double statistic = 0.0;
  int64_t df = 0;
  double p_value = 0.0;
};

Chi2Result chi2_two_sample(std::span<const int64_t> counts_a,
                           std::span<const int64_t> counts_b,
                           int64_t min_bin_total = 10);

// Upper tail of the chi-square distribution with df degrees of freedom.
double chi2_sf(double x, double df);

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

}  // namespace hyperlab
