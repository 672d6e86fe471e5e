#include "netsig/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "netsig/error.hpp"

namespace netsig {

StaticGraph::StaticGraph(std::size_t n) : n_(n), adj_(n * n, 0) {
  if (n == 0) throw InvalidArgument("graph must have at least one vertex");
}

StaticGraph::StaticGraph(std::size_t n, const std::vector<Edge>& edges) : StaticGraph(n) {
  for (const auto& [i, j] : edges) {
    if (i >= n || j >= n)
      throw InvalidArgument("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") out of range for n = " + std::to_string(n));
    if (i == j) throw InvalidArgument("self-loop on vertex " + std::to_string(i));
    adj_[i * n + j] = 1;
    adj_[j * n + i] = 1;
  }
}

StaticGraph StaticGraph::from_adjacency(std::size_t n, std::vector<std::uint8_t> adjacency) {
  if (n == 0) throw InvalidArgument("graph must have at least one vertex");
  if (adjacency.size() != n * n) throw InvalidArgument("adjacency size does not match n*n");
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i * n + i] != 0) throw InvalidArgument("self-loop on vertex " + std::to_string(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      auto& a = adjacency[i * n + j];
      auto& b = adjacency[j * n + i];
      if ((a != 0) != (b != 0)) throw InvalidArgument("adjacency matrix is not symmetric");
      a = a != 0;
      b = b != 0;
    }
  }
  return StaticGraph(n, std::move(adjacency), 0);
}

std::size_t StaticGraph::degree(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t j = 0; j < n_; ++j) d += adj_[i * n_ + j];
  return d;
}

std::vector<Edge> StaticGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (adj_[i * n_ + j]) out.emplace_back(i, j);
  return out;
}

std::vector<std::size_t> StaticGraph::neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j)
    if (adj_[i * n_ + j]) out.push_back(j);
  return out;
}

StaticGraph StaticGraph::permuted(const std::vector<std::size_t>& order) const {
  if (order.size() != n_) throw InvalidArgument("permutation size does not match n");
  std::vector<std::uint8_t> adj(n_ * n_);
  for (std::size_t p = 0; p < n_; ++p)
    for (std::size_t q = 0; q < n_; ++q) adj[p * n_ + q] = adj_[order[p] * n_ + order[q]];
  return StaticGraph(n_, std::move(adj), 0);
}

TemporalNetwork::TemporalNetwork(std::vector<StaticGraph> snapshots) : snapshots_(std::move(snapshots)) {
  if (snapshots_.empty()) throw InvalidArgument("temporal network needs at least one snapshot");
  const std::size_t n = snapshots_.front().n();
  for (const auto& g : snapshots_)
    if (g.n() != n) throw InvalidArgument("snapshots have differing vertex counts");
}

std::size_t edge_count(const StaticGraph& g) {
  std::size_t m = 0;
  const auto& a = g.adjacency();
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = i + 1; j < g.n(); ++j) m += a[i * g.n() + j];
  return m;
}

std::size_t isolated_count(const StaticGraph& g) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.n(); ++i)
    if (g.degree(i) == 0) ++count;
  return count;
}

double avg_clustering(const StaticGraph& g) {
  double total = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    const auto nb = g.neighbors(i);
    const std::size_t d = nb.size();
    if (d < 2) continue;
    std::size_t links = 0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b) links += g.has_edge(nb[a], nb[b]);
    total += 2.0 * static_cast<double>(links) / static_cast<double>(d * (d - 1));
  }
  return total / static_cast<double>(g.n());
}

std::optional<double> avg_shortest_path(const StaticGraph& g) {
  const std::size_t n = g.n();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) adj[i] = g.neighbors(i);

  constexpr auto unseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n);
  std::deque<std::size_t> queue;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), unseen);
    dist[s] = 0;
    queue.assign(1, s);
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u]) {
        if (dist[v] != unseen) continue;
        dist[v] = dist[u] + 1;
        queue.push_back(v);
        if (v > s) {
          sum += static_cast<double>(dist[v]);
          ++pairs;
        }
      }
    }
  }
  if (pairs == 0) return std::nullopt;
  return sum / static_cast<double>(pairs);
}

Descriptor parse_descriptor(std::string_view label) {
  if (label == "edges") return Descriptor::Edges;
  if (label == "isolated") return Descriptor::Isolated;
  if (label == "clustering") return Descriptor::Clustering;
  if (label == "shortest_path") return Descriptor::ShortestPath;
  throw InvalidArgument("unknown descriptor '" + std::string(label) + "'");
}

std::string_view descriptor_label(Descriptor d) {
  switch (d) {
    case Descriptor::Edges: return "edges";
    case Descriptor::Isolated: return "isolated";
    case Descriptor::Clustering: return "clustering";
    case Descriptor::ShortestPath: return "shortest_path";
  }
  return "";
}

DescriptorSeries descriptor_series(const TemporalNetwork& net, Descriptor which) {
  DescriptorSeries out{std::string(descriptor_label(which)), {}};
  out.values.reserve(net.t_len());
  for (const auto& g : net.snapshots()) {
    switch (which) {
      case Descriptor::Edges: out.values.push_back(static_cast<double>(edge_count(g))); break;
      case Descriptor::Isolated: out.values.push_back(static_cast<double>(isolated_count(g))); break;
      case Descriptor::Clustering: out.values.push_back(avg_clustering(g)); break;
      case Descriptor::ShortestPath:
        out.values.push_back(avg_shortest_path(g).value_or(std::numeric_limits<double>::quiet_NaN()));
        break;
    }
  }
  return out;
}

}  // namespace netsig
