#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace hyperlab {

// Explicit k-uniform hypergraph on vertices 1..n. Every edge is a sorted
// k-subset; duplicate edges are rejected at construction.
struct Hypergraph {
  int64_t n = 0;
  int k = 0;
  std::vector<std::vector<int32_t>> edges;

  Hypergraph(int64_t n, int k, std::vector<std::vector<int32_t>> edges);
};

// Samples H_k(n, p): every k-subset present independently with probability p.
// Geometric skipping over the colexicographic rank space, so the cost is
// proportional to the number of edges drawn, not to C(n, k).
Hypergraph sample_hypergraph(int64_t n, int k, double p, uint64_t seed);

struct ComponentSummary {
  std::vector<int64_t> sizes;   // descending
  std::vector<int32_t> label;   // label[v] = smallest vertex of v's component; [0] unused
};

// Connected components when every edge is read as a clique on its vertices.
// Union-find with path halving and union by size.
ComponentSummary components(const Hypergraph& h);

// Colexicographic unranking: the rank-th k-subset of [1, n], 0 <= rank < C(n, k).
std::vector<int32_t> unrank_subset(uint64_t rank, int64_t n, int k);

// Inverse of unrank_subset; input must be sorted ascending with distinct entries.
uint64_t rank_subset(std::span<const int32_t> subset);

// Text format: first line "n k", then one edge per line as space-separated
// ascending vertex indices. Malformed input is rejected with the line number.
Hypergraph read_hypergraph(std::istream& in);
void write_hypergraph(const Hypergraph& h, std::ostream& out);

}  // namespace hyperlab
