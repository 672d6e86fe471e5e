#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netsig {

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected, unweighted simple graph on vertices 0..n-1, stored as a dense
/// symmetric adjacency matrix. Immutable once built.
class StaticGraph {
public:
  /// Empty graph on n >= 1 vertices.
  explicit StaticGraph(std::size_t n);

  /// Graph from an edge list. Duplicates are merged; (i, j) and (j, i) are the
  /// same edge. Self-loops and out-of-range ids throw InvalidArgument.
  StaticGraph(std::size_t n, const std::vector<Edge>& edges);

  /// Graph from a row-major n*n 0/1 matrix. Throws InvalidArgument unless the
  /// matrix is symmetric with a zero diagonal.
  static StaticGraph from_adjacency(std::size_t n, std::vector<std::uint8_t> adjacency);

  std::size_t n() const noexcept { return n_; }
  bool has_edge(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }
  std::size_t degree(std::size_t i) const;

  /// Edges as (i, j) with i < j, in lexicographic order.
  std::vector<Edge> edges() const;
  std::vector<std::size_t> neighbors(std::size_t i) const;

  /// Relabeled copy: vertex `order[p]` of this graph becomes vertex p.
  StaticGraph permuted(const std::vector<std::size_t>& order) const;

  const std::vector<std::uint8_t>& adjacency() const noexcept { return adj_; }

  friend bool operator==(const StaticGraph&, const StaticGraph&) = default;

private:
  StaticGraph(std::size_t n, std::vector<std::uint8_t> adj, int) : n_(n), adj_(std::move(adj)) {}

  std::size_t n_;
  std::vector<std::uint8_t> adj_;
};

/// Sequence of snapshots over a fixed vertex set.
class TemporalNetwork {
public:
  /// Throws InvalidArgument if `snapshots` is empty or vertex counts differ.
  explicit TemporalNetwork(std::vector<StaticGraph> snapshots);

  std::size_t n() const noexcept { return snapshots_.front().n(); }
  std::size_t t_len() const noexcept { return snapshots_.size(); }
  const StaticGraph& at(std::size_t t) const { return snapshots_.at(t); }
  const std::vector<StaticGraph>& snapshots() const noexcept { return snapshots_; }

  friend bool operator==(const TemporalNetwork&, const TemporalNetwork&) = default;

private:
  std::vector<StaticGraph> snapshots_;
};

std::size_t edge_count(const StaticGraph& g);
std::size_t isolated_count(const StaticGraph& g);

/// Mean local clustering coefficient over all n vertices; vertices of degree
/// below 2 count as 0.
double avg_clustering(const StaticGraph& g);

/// Mean BFS distance over connected unordered pairs; nullopt when no pair is
/// connected.
std::optional<double> avg_shortest_path(const StaticGraph& g);

enum class Descriptor { Edges, Isolated, Clustering, ShortestPath };

/// Accepts "edges", "isolated", "clustering", "shortest_path".
Descriptor parse_descriptor(std::string_view label);
std::string_view descriptor_label(Descriptor d);

struct DescriptorSeries {
  std::string name;
  std::vector<double> values;  // NaN where the descriptor is undefined
};

DescriptorSeries descriptor_series(const TemporalNetwork& net, Descriptor which);

}  // namespace netsig
