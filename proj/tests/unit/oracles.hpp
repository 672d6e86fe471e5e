#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

#include "netsig/graph.hpp"
#include "netsig/rng.hpp"

namespace oracle {

using Adj = std::vector<std::vector<int>>;

inline Adj dense(const netsig::StaticGraph& g) {
  Adj a(g.n(), std::vector<int>(g.n(), 0));
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = 0; j < g.n(); ++j) a[i][j] = g.has_edge(i, j) ? 1 : 0;
  return a;
}

inline std::size_t edges(const Adj& a) {
  std::size_t s = 0;
  for (const auto& row : a)
    for (int v : row) s += static_cast<std::size_t>(v);
  return s / 2;
}

// Triangle enumeration over all vertex triples.
inline double clustering(const Adj& a) {
  const std::size_t n = a.size();
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t deg = 0, tri = 0;
    for (std::size_t u = 0; u < n; ++u) deg += static_cast<std::size_t>(a[v][u]);
    if (deg < 2) continue;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t w = u + 1; w < n; ++w)
        if (a[v][u] && a[v][w] && a[u][w]) ++tri;
    total += 2.0 * static_cast<double>(tri) / static_cast<double>(deg * (deg - 1));
  }
  return total / static_cast<double>(n);
}

// BFS from every vertex.
inline std::optional<double> shortest_path(const Adj& a) {
  const std::size_t n = a.size();
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<long> dist(n, -1);
    std::queue<std::size_t> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      for (std::size_t u = 0; u < n; ++u)
        if (a[v][u] && dist[u] < 0) {
          dist[u] = dist[v] + 1;
          q.push(u);
        }
    }
    for (std::size_t t = s + 1; t < n; ++t)
      if (dist[t] > 0) {
        sum += static_cast<double>(dist[t]);
        ++pairs;
      }
  }
  if (pairs == 0) return std::nullopt;
  return sum / static_cast<double>(pairs);
}

inline bool connected(const Adj& a) {
  std::vector<int> seen(a.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (std::size_t u = 0; u < a.size(); ++u)
      if (a[v][u] && !seen[u]) {
        seen[u] = 1;
        stack.push_back(u);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

// O(N^2) DFT of a real sequence, bins 0..N/2.
inline std::vector<std::complex<double>> dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t f = 0; f < out.size(); ++f) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(f * i % n) / static_cast<double>(n);
      acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[f] = acc;
  }
  return out;
}

// Linear arrangement cost of an ordering (order[p] = vertex at position p).
inline long arrangement_cost(const Adj& a, const std::vector<std::size_t>& order) {
  std::vector<long> pos(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) pos[order[p]] = static_cast<long>(p);
  long cost = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[i][j]) cost += std::abs(pos[i] - pos[j]);
  return cost;
}

inline long best_arrangement_cost(const Adj& a) {
  std::vector<std::size_t> perm(a.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  long best = std::numeric_limits<long>::max();
  do best = std::min(best, arrangement_cost(a, perm));
  while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Edges whose endpoints sit at most `window` apart on the cycle.
inline long circular_window_score(const Adj& a, const std::vector<std::size_t>& order, long window) {
  const long m = static_cast<long>(order.size());
  std::vector<long> pos(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) pos[order[p]] = static_cast<long>(p);
  long score = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[i][j]) {
        const long d = std::abs(pos[i] - pos[j]);
        if (std::min(d, m - d) <= window) ++score;
      }
  return score;
}

inline long best_circular_window_score(const Adj& a, long window) {
  std::vector<std::size_t> perm(a.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  long best = 0;
  // Vertex 0 stays at position 0.
  do best = std::max(best, circular_window_score(a, perm, window));
  while (std::next_permutation(perm.begin() + 1, perm.end()));
  return best;
}

// Random simple graph on n vertices with edge probability p.
inline netsig::StaticGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  netsig::Rng rng(seed);
  std::vector<netsig::Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < p) e.emplace_back(i, j);
  return netsig::StaticGraph(n, e);
}

}  // namespace oracle
