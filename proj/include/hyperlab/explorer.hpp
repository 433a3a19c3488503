#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "hyperlab/hypergraph.hpp"
#include "hyperlab/theory.hpp"

namespace hyperlab {

enum class VertexStatus : uint8_t { Unseen = 0, Active = 1, Explored = 2 };

// Full record of one exploration run. Time-indexed sequences run 0..n
// (eta[0] is a placeholder zero: eta counts per-step activations).
// component_sizes are the gaps between consecutive zeros of A, in the order
// the components were revealed; they always sum to n.
struct ExplorationTrace {
  int64_t n = 0;
  int k = 0;
  double p = 0.0;
  std::vector<int64_t> eta;
  std::vector<int64_t> A;  // active count
  std::vector<int64_t> U;  // unseen count
  std::vector<int64_t> C;  // components started
  std::vector<int64_t> X;  // walk A - C
  std::vector<int64_t> component_sizes;
  std::vector<int64_t> new_component_steps;  // steps t with A_{t-1} = 0
};

// Explores H_k(n, p) without materializing it: at step t the number of
// present edges among the C(n-t, k-1) candidates through the current vertex
// is Binomial(C(n-t, k-1), p) and each edge is an independent uniform
// (k-1)-subset of the eligible vertices, distinct within the step. Runs in
// O(n + k * edges) time and O(n) memory.
ExplorationTrace explore_implicit(const ModelParams& params, uint64_t seed);

// Deterministic replay on an explicit hypergraph: vertices in ascending
// index order, FIFO among active. Recovers the exact connected components.
ExplorationTrace explore_given(const Hypergraph& h);

// Component sizes from a bare walk: gaps of the first-passage times
// t_i = inf{t : X_t = -i}. The walk must start at 0, have increments >= -1,
// and end at its running minimum.
std::vector<int64_t> component_sizes_from_walk(std::span<const int64_t> walk);

// Martingale decomposition diagnostics of a recorded run. Sequences are
// time-indexed 0..n; drift and martingale_diff have index 0 unused.
struct DecompositionTrace {
  std::vector<double> drift;            // exact conditional mean of the step
  std::vector<double> martingale_diff;  // step minus drift
  std::vector<double> martingale;       // running beta-weighted sum
  std::vector<double> approx_walk;      // x_t + beta_t * martingale_t
  std::vector<double> approx_gap;       // |X_t - approx_walk_t|
};

DecompositionTrace decompose(const ExplorationTrace& trace, const ModelParams& params);

struct ConditionalMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Exact conditional mean and variance of the number of fresh activations in
// step t+1 given unseen_others eligible vertices at time t.
ConditionalMoments conditional_moments(const ModelParams& params, int64_t t,
                                       int64_t unseen_others);

// CSV dump, one row per step: t,eta,A,U,C,X. LF line endings.
void write_trace_csv(const ExplorationTrace& trace, std::ostream& out);

}  // namespace hyperlab
