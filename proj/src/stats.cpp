#include "hyperlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hyperlab/rng.hpp"

namespace hyperlab {

RunSummary summarize_trace(const ExplorationTrace& trace, int top_r, uint64_t seed) {
  if (top_r < 1) throw std::invalid_argument("summarize_trace: top_r must be >= 1");
  RunSummary s;
  s.seed = seed;
  s.n_components = static_cast<int64_t>(trace.component_sizes.size());
  const size_t r = std::min<size_t>(top_r, trace.component_sizes.size());
  s.top_sizes.resize(r);
  std::partial_sort_copy(trace.component_sizes.begin(), trace.component_sizes.end(),
                         s.top_sizes.begin(), s.top_sizes.end(), std::greater<>());
  return s;
}

NormalityReport standardize(const std::vector<RunSummary>& summaries,
                            const ModelParams& params) {
  if (summaries.size() < 2)
    throw std::invalid_argument("standardize: need at least 2 runs");
  if (!(params.lambda > 1.0))
    throw std::domain_error("standardize: needs lambda > 1");

  NormalityReport rep;
  rep.m = static_cast<int64_t>(summaries.size());
  rep.theory_mean = rho_k(params.lambda, params.k) * static_cast<double>(params.n);
  rep.theory_var = sigma_sq(params);
  const double sigma = std::sqrt(rep.theory_var);

  double sum = 0.0;
  for (const auto& s : summaries) sum += static_cast<double>(s.L1());
  rep.sample_mean = sum / static_cast<double>(rep.m);
  double ss = 0.0;
  for (const auto& s : summaries) {
    const double d = static_cast<double>(s.L1()) - rep.sample_mean;
    ss += d * d;
  }
  rep.sample_var = ss / static_cast<double>(rep.m - 1);

  rep.standardized.reserve(summaries.size());
  for (const auto& s : summaries)
    rep.standardized.push_back((static_cast<double>(s.L1()) - rep.theory_mean) / sigma);

  std::vector<double> sorted = rep.standardized;
  std::sort(sorted.begin(), sorted.end());
  const KsResult ks = ks_test(sorted, [](double x) { return normal_cdf(x); });
  rep.ks_statistic = ks.statistic;
  rep.ks_p_value = ks.p_value;
  return rep;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double kolmogorov_sf(double z) {
  if (!(z > 0.0)) return 1.0;
  if (z < 0.2) return 1.0;  // Q(0.2) = 1 to better than 1e-12
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 300; ++j) {
    const double term = std::exp(-2.0 * j * j * z * z);
    sum += sign * term;
    if (term < 1e-10) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> sample,
                 const std::function<double(double)>& cdf) {
  const size_t m = sample.size();
  if (m == 0) throw std::invalid_argument("ks_test: empty sample");
  for (size_t i = 1; i < m; ++i)
    if (sample[i] < sample[i - 1])
      throw std::invalid_argument("ks_test: sample must be sorted ascending");

  const double dm = static_cast<double>(m);
  double d = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / dm,
                             static_cast<double>(i + 1) / dm - f));
  }
  return {d, kolmogorov_sf(std::sqrt(dm) * d)};
}

KsResult ks_test_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_test_two_sample: empty sample");
  auto check = [](std::span<const double> s) {
    for (size_t i = 1; i < s.size(); ++i)
      if (s[i] < s[i - 1])
        throw std::invalid_argument("ks_test_two_sample: samples must be sorted");
  };
  check(a);
  check(b);

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (i == a.size())
      x = b[j];
    else if (j == b.size())
      x = a[i];
    else
      x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double z = d * std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_sf(z)};
}

double default_excursion_horizon(double alpha) {
  return std::max(15.0, 6.0 + 3.0 * alpha);
}

ExcursionSample simulate_excursions(double alpha, double grid_step, double horizon,
                                    int r, uint64_t seed) {
  if (!(grid_step > 0.0)) throw std::invalid_argument("excursions: grid_step must be > 0");
  if (!(horizon >= grid_step))
    throw std::invalid_argument("excursions: horizon shorter than one step");
  if (r < 1) throw std::invalid_argument("excursions: r must be >= 1");

  Rng rng(seed);
  const double h = grid_step;
  const double sqh = std::sqrt(h);
  const auto horizon_steps = static_cast<int64_t>(std::llround(horizon / h));
  const int64_t hard_cap =
      horizon_steps + std::max<int64_t>(horizon_steps / 2, std::llround(5.0 / h));

  std::vector<double> lengths;
  double w = 0.0, wmin = 0.0;
  int64_t last_renewal = 0;
  int64_t renewals = 0;
  int64_t j = 0;
  for (;;) {
    ++j;
    if (j > hard_cap)
      throw std::runtime_error("excursions: horizon too short, trailing excursion still open");
    const double s_left = static_cast<double>(j - 1) * h;
    w += (alpha - s_left) * h + sqh * rng.normal();
    if (w <= wmin) {
      wmin = w;
      const int64_t above = j - 1 - last_renewal;
      if (above > 0) lengths.push_back(static_cast<double>(above) * h);
      ++renewals;
      last_renewal = j;
      if (j >= horizon_steps) break;
    }
  }

  std::sort(lengths.begin(), lengths.end(), std::greater<>());
  if (static_cast<size_t>(r) < lengths.size()) lengths.resize(static_cast<size_t>(r));

  ExcursionSample out;
  out.alpha = alpha;
  out.grid_step = h;
  out.ordered_lengths = std::move(lengths);
  out.simulated_time = static_cast<double>(j) * h;
  out.renewal_steps = renewals;
  return out;
}

KsResult critical_compare(std::span<const double> sample_a,
                          std::span<const double> sample_b) {
  if (sample_a.empty() || sample_b.empty())
    throw std::invalid_argument("critical_compare: empty sample");
  std::vector<double> a(sample_a.begin(), sample_a.end());
  std::vector<double> b(sample_b.begin(), sample_b.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return ks_test_two_sample(a, b);
}

namespace {

// Regularized lower incomplete gamma by series (x < a+1).
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma by continued fraction (x >= a+1).
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double f = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return f * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_sf(double x, double df) { return gamma_q(0.5 * df, 0.5 * x); }

Chi2Result chi2_two_sample(std::span<const int64_t> counts_a,
                           std::span<const int64_t> counts_b,
                           int64_t min_bin_total) {
  if (counts_a.size() != counts_b.size())
    throw std::invalid_argument("chi2: histograms must have equal bin counts");
  int64_t total_a = 0, total_b = 0;
  for (const auto c : counts_a) total_a += c;
  for (const auto c : counts_b) total_b += c;
  if (total_a == 0 || total_b == 0)
    throw std::invalid_argument("chi2: empty histogram");

  // Pool adjacent sparse bins so the chi-square approximation is sound.
  std::vector<std::pair<int64_t, int64_t>> bins;
  int64_t acc_a = 0, acc_b = 0;
  for (size_t i = 0; i < counts_a.size(); ++i) {
    acc_a += counts_a[i];
    acc_b += counts_b[i];
    if (acc_a + acc_b >= min_bin_total) {
      bins.emplace_back(acc_a, acc_b);
      acc_a = acc_b = 0;
    }
  }
  if (acc_a + acc_b > 0) {
    if (bins.empty())
      bins.emplace_back(acc_a, acc_b);
    else {
      bins.back().first += acc_a;
      bins.back().second += acc_b;
    }
  }
  if (bins.size() < 2) throw std::invalid_argument("chi2: fewer than 2 usable bins");

  const double sa = std::sqrt(static_cast<double>(total_b) / static_cast<double>(total_a));
  const double sb = 1.0 / sa;
  double stat = 0.0;
  for (const auto& [a, b] : bins) {
    const double diff = sa * static_cast<double>(a) - sb * static_cast<double>(b);
    stat += diff * diff / static_cast<double>(a + b);
  }
  Chi2Result res;
  res.statistic = stat;
  res.df = static_cast<int64_t>(bins.size()) - 1;
  res.p_value = chi2_sf(stat, static_cast<double>(res.df));
  return res;
}

}  // namespace hyperlab
