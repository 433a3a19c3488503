#include "hyperlab/theory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hyperlab/binom.hpp"

namespace hyperlab {

namespace {

constexpr double kMaxLambda = 100.0;
// Below this epsilon the fixed point is solved by series instead of
// bisection; both routes agree to ~1e-10 relative at the crossover.
constexpr double kSeriesEpsilon = 1e-6;

void check_k(int k) {
  if (k < 2) throw std::domain_error("k must be at least 2, got " + std::to_string(k));
}

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

}  // namespace

ModelParams ModelParams::from_lambda(int64_t n, int k, double lambda) {
  check_k(k);
  if (n < k) throw std::domain_error("need n >= k");
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw std::domain_error("lambda must be finite and nonnegative");
  ModelParams params;
  params.n = n;
  params.k = k;
  params.lambda = lambda;
  params.p = lambda * factorial(k - 2) * std::pow(static_cast<double>(n), -(k - 1));
  if (!(params.p >= 0.0 && params.p < 1.0))
    throw std::domain_error("derived edge probability out of [0,1)");
  return params;
}

ModelParams ModelParams::from_alpha(int64_t n, int k, double alpha) {
  return from_lambda(n, k, critical_lambda(n, k, alpha));
}

double dual_lambda(double lambda) {
  if (!std::isfinite(lambda)) throw std::domain_error("lambda must be finite");
  if (lambda < 1.0) throw std::domain_error("dual intensity needs lambda >= 1");
  if (lambda > kMaxLambda) throw std::domain_error("lambda too large (max 100)");
  if (lambda == 1.0) return 1.0;
  const double eps = lambda - 1.0;
  if (eps < kSeriesEpsilon) {
    const double rho = 2.0 * eps - (8.0 / 3.0) * eps * eps;
    return lambda * (1.0 - rho);
  }
  // x e^{-x} is strictly increasing on (0, 1], so bisection is safe.
  const double target = lambda * std::exp(-lambda);
  double lo = 0.0, hi = 1.0;
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mid * std::exp(-mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double rho_poisson(double lambda) {
  if (!std::isfinite(lambda)) throw std::domain_error("lambda must be finite");
  if (lambda < 1.0) throw std::domain_error("survival probability needs lambda >= 1");
  if (lambda == 1.0) return 0.0;
  const double eps = lambda - 1.0;
  if (eps < kSeriesEpsilon) return 2.0 * eps - (8.0 / 3.0) * eps * eps;
  // Largest root of rho + expm1(-lambda rho) = 0. The expm1 form avoids the
  // cancellation in 1 - rho - e^{-lambda rho} for small rho, which is what
  // keeps the solver accurate right down to the series crossover. The
  // function is negative on (0, rho) and positive after, so bisect.
  double lo = 1e-15, hi = 1.0;
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mid + std::expm1(-lambda * mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double rho_k(double lambda, int k) {
  check_k(k);
  const double rho = rho_poisson(lambda);
  // 1 - (1-rho)^{1/(k-1)}, cancellation-free near rho = 0.
  return -std::expm1(std::log1p(-rho) / (k - 1));
}

double sigma_sq(const ModelParams& params) {
  if (!(params.lambda > 1.0))
    throw std::domain_error("sigma_sq is defined only for lambda > 1");
  // 1 - rho stays meaningful via the fixed point even where rho itself
  // rounds to 1 (lambda beyond ~37), so sigma_sq keeps its strict sign.
  const double rho_p = rho_poisson(params.lambda);
  const double log_q = -params.lambda * rho_p;  // log(1 - rho_poisson)
  const double q = std::exp(log_q / (params.k - 1));  // 1 - rho_k
  const double rho = -std::expm1(log_q / (params.k - 1));
  const double ls = dual_lambda(params.lambda);
  const double num = q * (params.lambda * q - ls + rho);
  const double den = (1.0 - ls) * (1.0 - ls);
  return num / den * static_cast<double>(params.n);
}

TheoryValues theory_values(const ModelParams& params) {
  TheoryValues v;
  v.lambda_star = dual_lambda(params.lambda);
  v.rho_poisson = rho_poisson(params.lambda);
  v.rho_k = rho_k(params.lambda, params.k);
  v.epsilon = params.lambda - 1.0;
  v.sigma_sq = params.lambda > 1.0 ? sigma_sq(params)
                                   : std::numeric_limits<double>::quiet_NaN();
  return v;
}

namespace {

// exp(-(lambda/(k-1)) (1 - (1-tau)^{k-1})), shared by the trajectory family.
double trajectory_exponential(double tau, int k, double lambda) {
  const double one_minus_pow = -std::expm1((k - 1) * std::log1p(-tau));
  return std::exp(-lambda / (k - 1) * one_minus_pow);
}

void check_tau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::domain_error("tau must lie in [0, 1]");
}

}  // namespace

double limit_trajectory(double tau, int k, double lambda) {
  check_k(k);
  check_tau(tau);
  return 1.0 - tau - trajectory_exponential(tau, k, lambda);
}

TrajectoryDerivatives limit_trajectory_derivatives(double tau, int k, double lambda) {
  check_k(k);
  check_tau(tau);
  const double e = trajectory_exponential(tau, k, lambda);
  const double pw2 = std::pow(1.0 - tau, k - 2);
  TrajectoryDerivatives d;
  d.first = -1.0 + lambda * pw2 * e;
  const double linear = (k == 2) ? 0.0 : lambda * (k - 2) * std::pow(1.0 - tau, k - 3);
  d.second = -(linear + lambda * pw2 * lambda * pw2) * e;
  return d;
}

std::vector<double> decay_trajectory(const ModelParams& params) {
  const int64_t n = params.n;
  std::vector<double> beta(static_cast<size_t>(n) + 1);
  beta[0] = 1.0;
  for (int64_t i = 1; i <= n; ++i) {
    const uint64_t count = binom_or_throw(n - i - 1, params.k - 2);
    const double alpha = params.p * static_cast<double>(count);
    if (alpha >= 1.0)
      throw std::domain_error("trajectory undefined: per-step rate reaches 1");
    beta[i] = beta[i - 1] * (1.0 - alpha);
  }
  return beta;
}

std::vector<double> mean_walk_trajectory(const ModelParams& params) {
  std::vector<double> x = decay_trajectory(params);
  const double n = static_cast<double>(params.n);
  for (int64_t t = 0; t <= params.n; ++t)
    x[t] = n - static_cast<double>(t) - n * x[t];
  return x;
}

double expected_unseen(const ModelParams& params, int64_t t) {
  if (t < 0 || t > params.n) throw std::domain_error("t must lie in [0, n]");
  const double tau = static_cast<double>(t) / static_cast<double>(params.n);
  return static_cast<double>(params.n) *
         trajectory_exponential(tau, params.k, params.lambda);
}

double critical_alpha(const ModelParams& params) {
  return (params.lambda - 1.0) * std::cbrt(static_cast<double>(params.n)) *
         std::pow(params.k - 1, -2.0 / 3.0);
}

double critical_lambda(int64_t n, int k, double alpha) {
  check_k(k);
  return 1.0 + std::pow(k - 1, 2.0 / 3.0) * alpha *
                   std::pow(static_cast<double>(n), -1.0 / 3.0);
}

}  // namespace hyperlab
