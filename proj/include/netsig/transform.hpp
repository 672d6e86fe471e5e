#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "netsig/graph.hpp"

namespace netsig {

/// delta_ii = 0, delta_ij = 1 for edges and w = 1 + 1/n for non-edges.
struct DistanceMatrix {
  std::size_t n = 0;
  Eigen::MatrixXd delta;
};

/// CMDS embedding of one graph. Row p of `coords` is the vertex at position p
/// of `ordering` (ordering[p] = original vertex id). Columns are components,
/// sorted by decreasing eigenvalue.
struct SignalCollection {
  std::size_t n = 0;
  std::size_t c_len = 0;
  Eigen::MatrixXd coords;        // n x c_len
  Eigen::VectorXd energies;      // u_c = sum_i x_ic^2
  Eigen::VectorXd eigenvalues;   // retained CMDS eigenvalues, 0 for padding
  std::vector<std::size_t> ordering;
  double dropped_eigen_mass = 0.0;  // sum of |lambda| over discarded eigenvalues
};

/// One SignalCollection per snapshot, zero-padded to a common component count.
struct TemporalSignals {
  std::size_t n = 0;
  std::size_t c_len = 0;
  std::vector<SignalCollection> steps;
};

/// Retained eigenvalues satisfy lambda > kEigenRelTol * lambda_max.
inline constexpr double kEigenRelTol = 1e-10;

DistanceMatrix build_distance_matrix(const StaticGraph& g);

/// Classical MDS of `delta`; ordering is left as the identity.
SignalCollection cmds(const DistanceMatrix& delta);

/// Circular seriation of each connected component: starting from the angular
/// order in the plane of the second and third Laplacian eigenvectors, a
/// seeded annealing search maximizes the number of edges whose endpoints lie
/// at most two positions apart on the cycle; the annealed layout is kept only
/// if it strictly improves on the angular one. The cycle is then opened where
/// the linear cost sum |pos(i) - pos(j)| over edges is smallest, ties going to
/// the lexicographically smallest id sequence. Components go by decreasing
/// size (ties: smallest vertex id first), isolated vertices last by id.
std::vector<std::size_t> vertex_ordering(const StaticGraph& g);

SignalCollection transform(const StaticGraph& g);

/// Per-snapshot transform, padded to the largest component count.
TemporalSignals transform_temporal(const TemporalNetwork& net);

/// Pads (or leaves) a collection to `c_len` components with zero columns.
void pad_components(SignalCollection& sig, std::size_t c_len);

/// N_c = sqrt(sum x_ref^2 / sum x_tilde^2); 1 when both sums vanish.
Eigen::VectorXd normalization_factors(const Eigen::VectorXd& ref_energies, const Eigen::MatrixXd& x_tilde);
Eigen::VectorXd normalization_factors(const SignalCollection& ref, const Eigen::MatrixXd& x_tilde);

/// Pairwise d_ij = sqrt(sum_c u_c^alpha (x_ic - x_jc)^2) with the weights
/// u_c^alpha rescaled to sum to C.
Eigen::MatrixXd weighted_distances(const Eigen::MatrixXd& x, const Eigen::VectorXd& energies, double alpha);

/// Normalize, weight, keep the m_edges closest pairs, and map positions back
/// to original vertex ids through `ordering`. Ties at the threshold are
/// admitted in lexicographic order of original ids.
StaticGraph inverse_transform(const Eigen::MatrixXd& x_tilde, const Eigen::VectorXd& ref_energies,
                              std::span<const std::size_t> ordering, double alpha, std::size_t m_edges);

TemporalNetwork inverse_transform_temporal(const TemporalSignals& sig, const TemporalSignals& refs, double alpha,
                                           std::span<const std::size_t> edge_counts);

}  // namespace netsig
