#include "hyperlab/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "hyperlab/binom.hpp"
#include "hyperlab/rng.hpp"

namespace hyperlab {

namespace {

constexpr int64_t kMaxVertices = (int64_t{1} << 31) - 2;

struct TraceBuilder {
  ExplorationTrace trace;
  int64_t A = 0, U = 0, C = 0, X = 0;
  int64_t last_boundary = 0;

  TraceBuilder(int64_t n, int k, double p) {
    trace.n = n;
    trace.k = k;
    trace.p = p;
    const auto len = static_cast<size_t>(n) + 1;
    trace.eta.assign(len, 0);
    trace.A.assign(len, 0);
    trace.U.assign(len, 0);
    trace.C.assign(len, 0);
    trace.X.assign(len, 0);
    U = n;
    trace.U[0] = n;
  }

  void record(int64_t t, int64_t eta_t) {
    X += eta_t - 1;
    trace.eta[t] = eta_t;
    trace.A[t] = A;
    trace.U[t] = U;
    trace.C[t] = C;
    trace.X[t] = X;
    if (A == 0) {
      trace.component_sizes.push_back(t - last_boundary);
      last_boundary = t;
    }
  }
};

// FIFO of active vertices; every vertex is enqueued at most once.
struct ActiveQueue {
  std::vector<int32_t> buf;
  size_t head = 0;

  explicit ActiveQueue(int64_t n) { buf.reserve(static_cast<size_t>(n)); }
  bool empty() const { return head == buf.size(); }
  void push(int32_t v) { buf.push_back(v); }
  int32_t pop() { return buf[head++]; }
};

}  // namespace

ExplorationTrace explore_implicit(const ModelParams& params, uint64_t seed) {
  const int64_t n = params.n;
  const int k = params.k;
  const double p = params.p;
  if (n > kMaxVertices) throw std::overflow_error("n too large for explorer");

  // cand[s] = C(s, k-1), the candidate-edge count with s eligible vertices.
  // The whole table must fit in 64 bits for exact sampling.
  std::vector<uint64_t> cand(static_cast<size_t>(n), 0);
  if (k - 1 < n) {
    cand[k - 1] = 1;
    for (int64_t s = k - 1; s + 1 < n; ++s) {
      const unsigned __int128 next =
          static_cast<unsigned __int128>(cand[s]) * static_cast<uint64_t>(s + 1) /
          static_cast<uint64_t>(s + 2 - k);
      if (next > std::numeric_limits<uint64_t>::max())
        throw std::overflow_error("candidate edge count exceeds 64 bits");
      cand[s + 1] = static_cast<uint64_t>(next);
    }
  }

  Rng rng(seed);
  TraceBuilder tb(n, k, p);
  std::vector<uint8_t> status(static_cast<size_t>(n) + 1,
                              static_cast<uint8_t>(VertexStatus::Unseen));
  // Permutation of vertices; explored ones occupy the prefix, so a uniform
  // eligible vertex is a uniform slot in the suffix.
  std::vector<int32_t> perm(static_cast<size_t>(n));
  std::vector<int32_t> slot_of(static_cast<size_t>(n) + 1);
  for (int64_t i = 0; i < n; ++i) {
    perm[i] = static_cast<int32_t>(i + 1);
    slot_of[i + 1] = static_cast<int32_t>(i);
  }
  ActiveQueue active(n);
  int64_t cursor = 1;

  std::vector<int32_t> edge(static_cast<size_t>(k) - 1);
  std::vector<int32_t> step_edges;  // flat, stride k-1, sorted slots

  for (int64_t t = 1; t <= n; ++t) {
    int32_t v;
    if (tb.A == 0) {
      while (status[cursor] != static_cast<uint8_t>(VertexStatus::Unseen)) ++cursor;
      v = static_cast<int32_t>(cursor);
      ++tb.C;
      --tb.U;
      tb.trace.new_component_steps.push_back(t);
    } else {
      v = active.pop();
      --tb.A;
    }
    status[v] = static_cast<uint8_t>(VertexStatus::Explored);
    // Swap v into the explored prefix.
    const int32_t sv = slot_of[v];
    const int32_t target = static_cast<int32_t>(t - 1);
    if (sv != target) {
      const int32_t other = perm[target];
      std::swap(perm[sv], perm[target]);
      slot_of[v] = target;
      slot_of[other] = sv;
    }

    const int64_t suffix = n - t;
    int64_t eta_t = 0;
    if (suffix >= k - 1 && p > 0.0) {
      const uint64_t found = rng.binomial(cand[suffix], p);
      step_edges.clear();
      for (uint64_t e = 0; e < found; ++e) {
        for (;;) {
          // k-1 distinct uniform slots in [t, n).
          for (int j = 0; j < k - 1; ++j) {
            int32_t s;
            bool fresh;
            do {
              s = static_cast<int32_t>(t + rng.below(static_cast<uint64_t>(suffix)));
              fresh = true;
              for (int l = 0; l < j; ++l) {
                if (edge[l] == s) {
                  fresh = false;
                  break;
                }
              }
            } while (!fresh);
            edge[j] = s;
          }
          std::sort(edge.begin(), edge.end());
          // Present edges are distinct: redraw a repeat of this step.
          bool duplicate = false;
          for (size_t base = 0; base < step_edges.size(); base += k - 1) {
            if (std::equal(edge.begin(), edge.end(), step_edges.begin() + base)) {
              duplicate = true;
              break;
            }
          }
          if (!duplicate) break;
        }
        step_edges.insert(step_edges.end(), edge.begin(), edge.end());
        for (const int32_t s : edge) {
          const int32_t u = perm[s];
          if (status[u] == static_cast<uint8_t>(VertexStatus::Unseen)) {
            status[u] = static_cast<uint8_t>(VertexStatus::Active);
            active.push(u);
            ++eta_t;
          }
        }
      }
      tb.A += eta_t;
      tb.U -= eta_t;
    }
    tb.record(t, eta_t);
  }
  return tb.trace;
}

ExplorationTrace explore_given(const Hypergraph& h) {
  const int64_t n = h.n;
  const int k = h.k;
  if (n > kMaxVertices) throw std::overflow_error("n too large for explorer");

  // CSR incidence lists.
  std::vector<int32_t> degree(static_cast<size_t>(n) + 2, 0);
  for (const auto& e : h.edges)
    for (const int32_t v : e) ++degree[v + 1];
  std::vector<int64_t> offset(static_cast<size_t>(n) + 2, 0);
  for (int64_t v = 1; v <= n + 1; ++v) offset[v] = offset[v - 1] + degree[v];
  std::vector<int32_t> incident(static_cast<size_t>(offset[n + 1]));
  {
    std::vector<int64_t> fill(offset.begin(), offset.end() - 1);
    for (size_t e = 0; e < h.edges.size(); ++e)
      for (const int32_t v : h.edges[e])
        incident[fill[v]++] = static_cast<int32_t>(e);
  }
  std::vector<uint8_t> revealed(h.edges.size(), 0);

  TraceBuilder tb(n, k, std::numeric_limits<double>::quiet_NaN());
  std::vector<uint8_t> status(static_cast<size_t>(n) + 1,
                              static_cast<uint8_t>(VertexStatus::Unseen));
  ActiveQueue active(n);
  int64_t cursor = 1;

  for (int64_t t = 1; t <= n; ++t) {
    int32_t v;
    if (tb.A == 0) {
      while (status[cursor] != static_cast<uint8_t>(VertexStatus::Unseen)) ++cursor;
      v = static_cast<int32_t>(cursor);
      ++tb.C;
      --tb.U;
      tb.trace.new_component_steps.push_back(t);
    } else {
      v = active.pop();
      --tb.A;
    }
    status[v] = static_cast<uint8_t>(VertexStatus::Explored);

    int64_t eta_t = 0;
    for (int64_t i = offset[v]; i < offset[v + 1]; ++i) {
      const int32_t e = incident[i];
      if (revealed[e]) continue;  // already seen through an earlier vertex
      revealed[e] = 1;
      for (const int32_t u : h.edges[e]) {
        if (status[u] == static_cast<uint8_t>(VertexStatus::Unseen)) {
          status[u] = static_cast<uint8_t>(VertexStatus::Active);
          active.push(u);
          ++eta_t;
        }
      }
    }
    tb.A += eta_t;
    tb.U -= eta_t;
    tb.record(t, eta_t);
  }
  return tb.trace;
}

std::vector<int64_t> component_sizes_from_walk(std::span<const int64_t> walk) {
  if (walk.empty() || walk[0] != 0)
    throw std::invalid_argument("walk must start at 0");
  std::vector<int64_t> sizes;
  int64_t level = 0;  // current running minimum
  int64_t last = 0;
  for (size_t t = 1; t < walk.size(); ++t) {
    if (walk[t] - walk[t - 1] < -1)
      throw std::invalid_argument("walk has an increment below -1");
    if (walk[t] < level) {
      sizes.push_back(static_cast<int64_t>(t) - last);
      last = static_cast<int64_t>(t);
      level = walk[t];
    }
  }
  // The gaps must account for every step, i.e. the final time is a record.
  if (last != static_cast<int64_t>(walk.size()) - 1)
    throw std::invalid_argument("walk must end at its running minimum");
  return sizes;
}

DecompositionTrace decompose(const ExplorationTrace& trace, const ModelParams& params) {
  if (trace.n != params.n || trace.k != params.k)
    throw std::invalid_argument("decompose: trace and params disagree on (n, k)");
  if (std::isfinite(trace.p) && trace.p != params.p)
    throw std::invalid_argument("decompose: trace and params disagree on p");
  const int64_t n = params.n;

  const std::vector<double> beta = decay_trajectory(params);
  const std::vector<double> x = mean_walk_trajectory(params);
  const double log_q = std::log1p(-params.p);

  DecompositionTrace d;
  const auto len = static_cast<size_t>(n) + 1;
  d.drift.assign(len, 0.0);
  d.martingale_diff.assign(len, 0.0);
  d.martingale.assign(len, 0.0);
  d.approx_walk.assign(len, 0.0);
  d.approx_gap.assign(len, 0.0);

  for (int64_t t = 0; t < n; ++t) {
    const uint64_t pair_count = binom_or_throw(n - t - 2, params.k - 2);
    const double pi1 = -std::expm1(static_cast<double>(pair_count) * log_q);
    const int64_t u_prime = trace.U[t] - (trace.A[t] == 0 ? 1 : 0);
    d.drift[t + 1] = static_cast<double>(u_prime) * pi1 - 1.0;
    d.martingale_diff[t + 1] =
        static_cast<double>(trace.X[t + 1] - trace.X[t]) - d.drift[t + 1];
    d.martingale[t + 1] = d.martingale[t] + d.martingale_diff[t + 1] / beta[t + 1];
    d.approx_walk[t + 1] = x[t + 1] + beta[t + 1] * d.martingale[t + 1];
    d.approx_gap[t + 1] =
        std::abs(static_cast<double>(trace.X[t + 1]) - d.approx_walk[t + 1]);
  }
  return d;
}

ConditionalMoments conditional_moments(const ModelParams& params, int64_t t,
                                       int64_t unseen_others) {
  const int64_t n = params.n;
  const int k = params.k;
  if (t < 0 || t >= n) throw std::domain_error("conditional_moments: t out of [0, n)");
  if (unseen_others < 0 || unseen_others > n - t - 1)
    throw std::domain_error("conditional_moments: unseen count out of range");

  const double log_q = std::log1p(-params.p);
  const double u = static_cast<double>(unseen_others);

  // Candidate edges through the next vertex, classified by how they meet a
  // fixed pair of unseen vertices. Disjoint candidate families are
  // independent, which gives the pair-activation probability exactly.
  const auto both = static_cast<double>(binom_or_throw(n - t - 3, k - 3));
  const auto one = static_cast<double>(binom_or_throw(n - t - 3, k - 2));
  const auto single = static_cast<double>(binom_or_throw(n - t - 2, k - 2));

  const double pi1 = -std::expm1(single * log_q);
  const double pi2 = -std::expm1(both * log_q);
  const double q1 = std::exp(one * log_q);
  const double q2 = std::exp(2.0 * one * log_q);
  const double pi3 = (1.0 - pi2) * (1.0 - 2.0 * q1 + q2);

  ConditionalMoments m;
  m.mean = u * pi1;
  m.variance = u * (u - 1.0) * (pi2 + pi3) + u * pi1 - (u * pi1) * (u * pi1);
  return m;
}

void write_trace_csv(const ExplorationTrace& trace, std::ostream& out) {
  out << "t,eta,A,U,C,X\n";
  for (int64_t t = 1; t <= trace.n; ++t) {
    out << t << ',' << trace.eta[t] << ',' << trace.A[t] << ',' << trace.U[t]
        << ',' << trace.C[t] << ',' << trace.X[t] << '\n';
  }
}

}  // namespace hyperlab
