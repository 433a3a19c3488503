#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include <omp.h>

#include "hyperlab/explorer.hpp"
#include "hyperlab/hypergraph.hpp"
#include "hyperlab/rng.hpp"
#include "hyperlab/stats.hpp"

using namespace hyperlab;

namespace {

void check_trace_invariants(const ExplorationTrace& tr) {
  const int64_t n = tr.n;
  REQUIRE(tr.A.size() == static_cast<size_t>(n) + 1);
  CHECK(tr.A[0] == 0);
  CHECK(tr.U[0] == n);
  CHECK(tr.X[0] == 0);
  for (int64_t t = 1; t <= n; ++t) {
    CHECK(tr.A[t] + tr.U[t] == n - t);                    // status conservation
    CHECK(tr.X[t] - tr.X[t - 1] == tr.eta[t] - 1);        // walk identity
    CHECK(tr.X[t] == tr.A[t] - tr.C[t]);
  }
  CHECK(tr.X[n] == -tr.C[n]);
  int64_t total = 0;
  for (const auto s : tr.component_sizes) {
    CHECK(s >= 1);
    total += s;
  }
  CHECK(total == n);
  CHECK(static_cast<int64_t>(tr.component_sizes.size()) == tr.C[n]);
  // Component sizes recomputed from the walk agree with the online record.
  CHECK(component_sizes_from_walk(tr.X) == tr.component_sizes);
  // New components start exactly when no vertex is active.
  for (const auto t : tr.new_component_steps) CHECK(tr.A[t - 1] == 0);
  CHECK(static_cast<int64_t>(tr.new_component_steps.size()) == tr.C[n]);
}

std::vector<int64_t> sorted_desc(std::vector<int64_t> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

TEST_CASE("empty hypergraph walk") {
  const auto params = ModelParams::from_lambda(50, 3, 0.0);
  REQUIRE(params.p == 0.0);
  const auto tr = explore_implicit(params, 123);
  check_trace_invariants(tr);
  CHECK(tr.C[50] == 50);
  CHECK(tr.X[50] == -50);
  for (int64_t t = 1; t <= 50; ++t) CHECK(tr.eta[t] == 0);
  CHECK(tr.component_sizes == std::vector<int64_t>(50, 1));
}

TEST_CASE("single certain edge") {
  // n = k and p = 1: one candidate edge, present for sure.
  Hypergraph h(3, 3, {{1, 2, 3}});
  const auto tr = explore_given(h);
  check_trace_invariants(tr);
  CHECK(tr.eta[1] == 2);
  CHECK(tr.component_sizes == std::vector<int64_t>{3});
}

TEST_CASE("explicit replay matches union-find") {
  const Hypergraph none(5, 3, {});
  CHECK(explore_given(none).component_sizes == std::vector<int64_t>(5, 1));

  const Hypergraph pair(6, 3, {{1, 2, 3}, {3, 4, 5}});
  const auto tr = explore_given(pair);
  check_trace_invariants(tr);
  CHECK(sorted_desc(tr.component_sizes) == std::vector<int64_t>{5, 1});

  for (const int k : {2, 3, 4}) {
    for (uint64_t seed = 0; seed < 300; ++seed) {
      const int64_t n = 20 + static_cast<int64_t>(seed % 41);  // up to 60
      const auto params = ModelParams::from_lambda(n, k, 1.5);
      const auto h = sample_hypergraph(n, k, params.p, 555000 + seed);
      const auto replay = explore_given(h);
      check_trace_invariants(replay);
      CHECK(sorted_desc(replay.component_sizes) == components(h).sizes);
    }
  }
}

TEST_CASE("overflowing candidate counts are rejected") {
  // C(n-1, k-1) far beyond 64 bits: exact sampling is impossible.
  const auto params = ModelParams::from_lambda(1000000, 21, 1.0);
  CHECK_THROWS_AS(explore_implicit(params, 1), std::overflow_error);
  CHECK_THROWS_AS(decay_trajectory(params), std::overflow_error);
}

TEST_CASE("determinism across repeats") {
  const auto params = ModelParams::from_lambda(300, 3, 1.5);
  const auto a = explore_implicit(params, 42);
  const auto b = explore_implicit(params, 42);
  CHECK(a.X == b.X);
  CHECK(a.eta == b.eta);
  CHECK(a.component_sizes == b.component_sizes);
  const auto c = explore_implicit(params, 43);
  CHECK(a.X != c.X);
}

TEST_CASE("walk to component sizes") {
  using V = std::vector<int64_t>;
  CHECK(component_sizes_from_walk(V{0, -1, -2}) == V{1, 1});
  CHECK(component_sizes_from_walk(V{0, 1, 0, -1, -2}) == V{3, 1});
  CHECK_THROWS_AS(component_sizes_from_walk(V{0, -2}), std::invalid_argument);
  CHECK_THROWS_AS(component_sizes_from_walk(V{1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(component_sizes_from_walk(V{0, 1, 0}), std::invalid_argument);
}

TEST_CASE("trace csv format") {
  const auto params = ModelParams::from_lambda(3, 3, 0.0);
  const auto tr = explore_implicit(params, 1);
  std::ostringstream os;
  write_trace_csv(tr, os);
  CHECK(os.str() == "t,eta,A,U,C,X\n1,0,0,2,1,-1\n2,0,0,1,2,-2\n3,0,0,0,3,-3\n");
}

TEST_CASE("decomposition of the empty walk") {
  const auto params = ModelParams::from_lambda(20, 3, 0.0);
  const auto tr = explore_implicit(params, 9);
  const auto d = decompose(tr, params);
  for (int64_t t = 1; t <= 20; ++t) {
    CHECK(d.drift[t] == -1.0);
    CHECK(d.martingale_diff[t] == 0.0);
    CHECK(d.martingale[t] == 0.0);
    CHECK(d.approx_walk[t] == doctest::Approx(-static_cast<double>(t)).epsilon(1e-15));
    CHECK(d.approx_gap[t] <= 1e-12);
  }
}

TEST_CASE("decompose validates parameters") {
  const auto params = ModelParams::from_lambda(30, 3, 1.2);
  const auto tr = explore_implicit(params, 4);
  const auto other = ModelParams::from_lambda(31, 3, 1.2);
  CHECK_THROWS_AS(decompose(tr, other), std::invalid_argument);
  const auto other_p = ModelParams::from_lambda(30, 3, 1.3);
  CHECK_THROWS_AS(decompose(tr, other_p), std::invalid_argument);
}

TEST_CASE("conditional moments closed forms") {
  const auto params = ModelParams::from_lambda(100, 3, 1.5);
  const auto zero = conditional_moments(params, 10, 0);
  CHECK(zero.mean == 0.0);
  CHECK(zero.variance == 0.0);

  // k = 2: activations are independent Bernoulli, pure binomial moments.
  const auto g2 = ModelParams::from_lambda(80, 2, 1.4);
  const auto m2 = conditional_moments(g2, 5, 60);
  CHECK(m2.mean == doctest::Approx(60.0 * g2.p).epsilon(1e-12));
  CHECK(m2.variance == doctest::Approx(60.0 * g2.p * (1.0 - g2.p)).epsilon(1e-12));

  CHECK_THROWS_AS(conditional_moments(params, -1, 0), std::domain_error);
  CHECK_THROWS_AS(conditional_moments(params, 100, 0), std::domain_error);
  CHECK_THROWS_AS(conditional_moments(params, 10, 95), std::domain_error);
}

TEST_CASE("conditional moments match the first step empirically") {
  const auto params = ModelParams::from_lambda(10000, 3, 1.5);
  const auto expect = conditional_moments(params, 0, params.n - 1);
  const int64_t reps = 20000;
  std::vector<int64_t> eta1(reps);
#pragma omp parallel for schedule(dynamic)
  for (int64_t i = 0; i < reps; ++i) {
    // Only step 1 is needed; a width-1 exploration is wasteful but exact.
    const auto tr = explore_implicit(params, stream_seed(90210, static_cast<uint64_t>(i)));
    eta1[i] = tr.eta[1];
  }
  double sum = 0.0, sumsq = 0.0;
  for (const auto e : eta1) {
    sum += static_cast<double>(e);
    sumsq += static_cast<double>(e) * static_cast<double>(e);
  }
  const double mean = sum / reps;
  const double var = (sumsq - reps * mean * mean) / (reps - 1);
  // 4 standard errors of the mean / of the variance estimate.
  const double se_mean = std::sqrt(expect.variance / reps);
  CHECK(std::abs(mean - expect.mean) <= 4.0 * se_mean);
  const double se_var = expect.variance * std::sqrt(2.0 / (reps - 1));
  CHECK(std::abs(var - expect.variance) <= 5.0 * se_var);
}

TEST_CASE("variance bound along the run") {
  // Empirical Var(eta_t) never exceeds lambda (k-1) by more than noise.
  const auto params = ModelParams::from_lambda(2000, 3, 1.5);
  const int64_t reps = 500;
  std::vector<double> sum(params.n + 1, 0.0), sumsq(params.n + 1, 0.0);
  for (int64_t i = 0; i < reps; ++i) {
    const auto tr = explore_implicit(params, stream_seed(31337, static_cast<uint64_t>(i)));
    for (int64_t t = 1; t <= params.n; ++t) {
      sum[t] += static_cast<double>(tr.eta[t]);
      sumsq[t] += static_cast<double>(tr.eta[t]) * static_cast<double>(tr.eta[t]);
    }
  }
  const double bound = params.lambda * (params.k - 1);
  const double rel_se = std::sqrt(2.0 / (reps - 1));
  for (int64_t t = 1; t <= params.n; ++t) {
    const double mean = sum[t] / reps;
    const double var = (sumsq[t] - reps * mean * mean) / (reps - 1);
    CHECK(var <= bound + 5.0 * var * rel_se + 1e-9);
  }
}

TEST_CASE("unseen counts track the deterministic trajectory") {
  const auto params = ModelParams::from_lambda(100000, 3, 1.3);
  const int64_t horizon =
      static_cast<int64_t>(rho_k(params.lambda, params.k) * params.n);
  for (const uint64_t seed : {11u, 22u, 33u}) {
    const auto tr = explore_implicit(params, seed);
    double worst = 0.0;
    for (int64_t t = 0; t <= horizon; ++t)
      worst = std::max(worst, std::abs(static_cast<double>(tr.U[t]) -
                                       expected_unseen(params, t)));
    CHECK(worst <= 0.01 * static_cast<double>(params.n));
  }
}

TEST_CASE("giant component closes near rho*n") {
  // The walk's deep minimum, i.e. the end of the largest component, sits
  // within 0.02n of the survival fraction for typical supercritical runs.
  const auto params = ModelParams::from_lambda(100000, 3, 1.3);
  const double rho_n = rho_k(params.lambda, params.k) * static_cast<double>(params.n);
  for (const uint64_t seed : {101u, 202u, 303u}) {
    const auto tr = explore_implicit(params, seed);
    int64_t end = 0, giant_end = 0, giant = 0;
    for (const auto size : tr.component_sizes) {
      end += size;
      if (size > giant) {
        giant = size;
        giant_end = end;
      }
    }
    CHECK(std::abs(static_cast<double>(giant_end) - rho_n) <=
          0.02 * static_cast<double>(params.n));
  }
}

TEST_CASE("implicit mode agrees with the explicit oracle in distribution") {
  // Two-sample chi-square on L1 histograms, n = 40.
  const auto params = ModelParams::from_lambda(40, 3, 1.5);
  const int64_t reps = 4000;
  std::vector<int64_t> ha(20, 0), hb(20, 0);
  for (int64_t i = 0; i < reps; ++i) {
    const auto h =
        sample_hypergraph(params.n, params.k, params.p, stream_seed(1, static_cast<uint64_t>(i)));
    const auto sizes = components(h).sizes;
    ha[static_cast<size_t>(sizes.front() - 1) / 2]++;
    const auto tr = explore_implicit(params, stream_seed(2, static_cast<uint64_t>(i)));
    const int64_t l1 =
        *std::max_element(tr.component_sizes.begin(), tr.component_sizes.end());
    hb[static_cast<size_t>(l1 - 1) / 2]++;
  }
  const auto res = chi2_two_sample(ha, hb);
  CHECK(res.p_value > 0.01);
}
