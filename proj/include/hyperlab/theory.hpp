#pragma once

#include <cstdint>
#include <vector>

namespace hyperlab {

// Experiment coordinates. The edge probability is tied to the branching
// intensity lambda by p = lambda (k-2)! n^{-(k-1)}; for k = 2 this is the
// familiar p = lambda/n.
struct ModelParams {
  int64_t n = 0;
  int k = 0;
  double lambda = 0.0;
  double p = 0.0;

  static ModelParams from_lambda(int64_t n, int k, double lambda);
  // Critical-window coordinates: lambda = 1 + (k-1)^{2/3} alpha n^{-1/3}.
  static ModelParams from_alpha(int64_t n, int k, double alpha);
};

// All closed-form / fixed-point constants for one (n, k, lambda).
struct TheoryValues {
  double lambda_star = 0.0;   // dual intensity, <= 1
  double rho_poisson = 0.0;   // Poisson branching survival probability
  double rho_k = 0.0;         // giant-component vertex fraction
  double sigma_sq = 0.0;      // absolute variance (includes factor n); NaN at lambda = 1
  double epsilon = 0.0;       // lambda - 1
};

// Dual intensity: the unique x <= 1 with x e^{-x} = lambda e^{-lambda}.
// lambda = 1 returns 1 exactly; requires 1 <= lambda <= 100.
double dual_lambda(double lambda);

// Survival probability of the Poisson(lambda) branching process, the largest
// root of 1 - rho = e^{-lambda rho}. Requires lambda >= 1.
double rho_poisson(double lambda);

// Survival probability of the k-uniform analogue: 1 - (1-rho_lambda)^{1/(k-1)}.
double rho_k(double lambda, int k);

// Limit variance of the largest-component size (absolute, scales with n).
// Defined only for lambda > 1.
double sigma_sq(const ModelParams& params);

TheoryValues theory_values(const ModelParams& params);

// Rescaled deterministic trajectory of the exploration walk: the n -> infinity
// limit of X_{tau n}/n. Zero at tau = 0 and at tau = rho_k.
double limit_trajectory(double tau, int k, double lambda);

struct TrajectoryDerivatives {
  double first = 0.0;
  double second = 0.0;
};

// Closed-form first and second derivatives of limit_trajectory in tau.
TrajectoryDerivatives limit_trajectory_derivatives(double tau, int k, double lambda);

// Multiplicative decay factors beta_t = prod_{i<=t} (1 - alpha_i) of the
// drift recursion, alpha_i = p C(n-i-1, k-2). Index t runs 0..n, beta_0 = 1.
std::vector<double> decay_trajectory(const ModelParams& params);

// Deterministic walk trajectory x_t = n - t - n beta_t, index 0..n.
std::vector<double> mean_walk_trajectory(const ModelParams& params);

// Expected number of never-touched vertices after t steps,
// n exp(-(lambda/(k-1)) (1 - (1-t/n)^{k-1})).
double expected_unseen(const ModelParams& params, int64_t t);

// Critical-window location parameter alpha = (lambda-1) n^{1/3} (k-1)^{-2/3}.
double critical_alpha(const ModelParams& params);

// Inverse of critical_alpha: the lambda giving a prescribed alpha.
double critical_lambda(int64_t n, int k, double alpha);

}  // namespace hyperlab
