#include "hyperlab/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hyperlab/binom.hpp"
#include "hyperlab/rng.hpp"

namespace hyperlab {

Hypergraph::Hypergraph(int64_t n_, int k_, std::vector<std::vector<int32_t>> edges_)
    : n(n_), k(k_), edges(std::move(edges_)) {
  if (k < 2) throw std::invalid_argument("hypergraph: k must be at least 2");
  if (n < 1) throw std::invalid_argument("hypergraph: n must be positive");
  for (auto& e : edges) {
    if (static_cast<int>(e.size()) != k)
      throw std::invalid_argument("hypergraph: edge arity differs from k");
    std::sort(e.begin(), e.end());
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] < 1 || e[i] > n)
        throw std::invalid_argument("hypergraph: vertex index out of range");
      if (i > 0 && e[i] == e[i - 1])
        throw std::invalid_argument("hypergraph: duplicate vertex within an edge");
    }
  }
  std::vector<const std::vector<int32_t>*> order(edges.size());
  for (size_t i = 0; i < edges.size(); ++i) order[i] = &edges[i];
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return *a < *b; });
  for (size_t i = 1; i < order.size(); ++i)
    if (*order[i] == *order[i - 1])
      throw std::invalid_argument("hypergraph: duplicate edge");
}

Hypergraph sample_hypergraph(int64_t n, int k, double p, uint64_t seed) {
  if (k < 2 || n < k) throw std::invalid_argument("sample: need 2 <= k <= n");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample: p must lie in [0, 1]");
  const uint64_t total = binom_or_throw(n, k);

  std::vector<std::vector<int32_t>> edges;
  if (p > 0.0) {
    Rng rng(seed);
    uint64_t pos = 0;
    while (pos < total) {
      const uint64_t skip = rng.geometric_skip(p);
      if (skip >= total - pos) break;
      pos += skip;
      edges.push_back(unrank_subset(pos, n, k));
      ++pos;
    }
  }
  return Hypergraph(n, k, std::move(edges));
}

ComponentSummary components(const Hypergraph& h) {
  std::vector<int32_t> parent(static_cast<size_t>(h.n) + 1);
  std::vector<int32_t> size(static_cast<size_t>(h.n) + 1, 1);
  std::iota(parent.begin(), parent.end(), 0);

  auto find = [&](int32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];  // path halving
      v = parent[v];
    }
    return v;
  };
  auto unite = [&](int32_t a, int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  };

  for (const auto& e : h.edges)
    for (size_t i = 1; i < e.size(); ++i) unite(e[0], e[i]);

  ComponentSummary out;
  out.label.assign(static_cast<size_t>(h.n) + 1, 0);
  // Smallest vertex of each component as the representative label.
  for (int32_t v = 1; v <= h.n; ++v) {
    const int32_t r = find(v);
    if (out.label[r] == 0) out.label[r] = v;  // v ascending: first hit is smallest
  }
  for (int32_t v = 1; v <= h.n; ++v) out.label[v] = out.label[find(v)];
  for (int32_t v = 1; v <= h.n; ++v)
    if (find(v) == v) out.sizes.push_back(size[v]);
  std::sort(out.sizes.begin(), out.sizes.end(), std::greater<>());
  return out;
}

std::vector<int32_t> unrank_subset(uint64_t rank, int64_t n, int k) {
  if (k < 1 || n < k) throw std::invalid_argument("unrank: need 1 <= k <= n");
  const uint64_t total = binom_or_throw(n, k);
  if (rank >= total) throw std::out_of_range("unrank: rank out of range");

  std::vector<int32_t> out(static_cast<size_t>(k));
  uint64_t r = rank;
  int64_t a = n;
  for (int i = k; i >= 1; --i) {
    // Largest a with C(a-1, i) <= r; values overflowing 64 bits are
    // certainly > r, so treat overflow as "too big".
    for (;;) {
      const auto b = binom_checked(a - 1, i);
      if (b && *b <= r) break;
      --a;
    }
    out[static_cast<size_t>(i) - 1] = static_cast<int32_t>(a);
    r -= *binom_checked(a - 1, i);
    --a;
  }
  return out;
}

uint64_t rank_subset(std::span<const int32_t> subset) {
  uint64_t r = 0;
  for (size_t i = 0; i < subset.size(); ++i) {
    if (i > 0 && subset[i] <= subset[i - 1])
      throw std::invalid_argument("rank: subset must be ascending and distinct");
    r += binom_or_throw(subset[i] - 1, static_cast<int64_t>(i) + 1);
  }
  return r;
}

Hypergraph read_hypergraph(std::istream& in) {
  auto fail = [](int64_t line, const std::string& what) {
    throw std::invalid_argument("hypergraph parse error: line " +
                                std::to_string(line) + ": " + what);
  };

  std::string line;
  int64_t lineno = 0;
  int64_t n = 0;
  int k = 0;
  if (!std::getline(in, line)) fail(1, "missing header 'n k'");
  ++lineno;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n >> k) || (hs >> extra)) fail(lineno, "expected header 'n k'");
    if (n < 1 || k < 2) fail(lineno, "need n >= 1 and k >= 2");
  }

  std::vector<std::vector<int32_t>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream es(line);
    std::vector<int32_t> edge;
    int64_t v = 0;
    while (es >> v) {
      if (v < 1 || v > n) fail(lineno, "vertex index out of [1, n]");
      if (!edge.empty() && v <= edge.back())
        fail(lineno, "vertices must be strictly ascending");
      edge.push_back(static_cast<int32_t>(v));
    }
    if (!es.eof()) fail(lineno, "non-integer token");
    if (static_cast<int>(edge.size()) != k)
      fail(lineno, "expected " + std::to_string(k) + " vertices, got " +
                       std::to_string(edge.size()));
    edges.push_back(std::move(edge));
  }
  try {
    return Hypergraph(n, k, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("hypergraph parse error: ") + e.what());
  }
}

void write_hypergraph(const Hypergraph& h, std::ostream& out) {
  out << h.n << ' ' << h.k << '\n';
  for (const auto& e : h.edges) {
    for (size_t i = 0; i < e.size(); ++i) {
      if (i) out << ' ';
      out << e[i];
    }
    out << '\n';
  }
}

}  // namespace hyperlab
