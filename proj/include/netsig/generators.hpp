#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "netsig/graph.hpp"

namespace netsig {

struct ErdosRenyi {
  double p = 0.0;
};

/// Vertex i links to the k/2 nearest neighbors on each side of the cycle.
struct RingLattice {
  std::size_t k = 4;
};

/// Ring lattice with Watts-Strogatz rewiring: each lattice edge (i, i+j) is
/// rewired to (i, u), u uniform among non-neighbors of i, with probability p.
struct NoisedRing {
  std::size_t k = 4;
  double p_rewire = 0.1;
};

/// Stochastic block model with contiguous equal blocks; the n mod n_com
/// remainder vertices join the last block.
struct Sbm {
  std::size_t n_com = 3;
  double p_w = 0.8;
  double p_b = 0.05;
};

/// Ring lattice on all vertices, plus within-community pairs (blocks as in
/// Sbm) linked with probability p_w.
struct RingCommunities {
  std::size_t k = 4;
  std::size_t n_com = 3;
  double p_w = 0.8;
};

using ModelSpec = std::variant<ErdosRenyi, RingLattice, NoisedRing, Sbm, RingCommunities>;

/// Parses compact specs such as `er:p=0.4`, `sbm:k=3,pw=0.8,pb=0.05`,
/// `ring:k=4`, `nring:k=4,p=0.1`, `ringcom:k=4,c=3[,pw=0.8]`.
ModelSpec parse_model_spec(std::string_view text);

/// Like parse_model_spec, but one integer parameter may be a range `a..b` or
/// `a..b/step` (e.g. `sbm:k=2..6`, `ring:k=2..8/2`), expanding to one spec per
/// value.
std::vector<ModelSpec> parse_model_spec_range(std::string_view text);

std::string format_model_spec(const ModelSpec& spec);

/// Community index of each vertex for block-structured models.
std::vector<std::size_t> block_assignment(std::size_t n, std::size_t n_com);

/// Throws InvalidArgument when the spec cannot be realized on n vertices.
void validate(const ModelSpec& spec, std::size_t n);

StaticGraph generate_static(const ModelSpec& spec, std::size_t n, std::uint64_t seed);

/// Toy temporal network: Markov edge dynamics drifting toward one prescribed
/// structure per period.
struct TtnConfig {
  std::size_t n = 100;
  std::size_t period_len = 20;
  std::vector<ModelSpec> schedule;
  double p_keep_in = 0.99;   // edge present at t-1 and prescribed
  double p_gain_in = 0.2;    // edge absent at t-1 and prescribed
  double p_keep_out = 0.8;   // edge present at t-1, not prescribed
  double p_gain_out = 0.01;  // edge absent at t-1, not prescribed
  std::uint64_t seed = 0;

  /// Four 20-step periods: ER(0.4), SBM(3, 0.8, 0.05), 4-ring, 4-ring with 3
  /// communities; n = 100.
  static TtnConfig default_schedule(std::uint64_t seed);
};

TemporalNetwork generate_ttn(const TtnConfig& cfg);

/// Prescribed edge set of period `period`, as drawn by generate_ttn.
StaticGraph ttn_prescribed(const TtnConfig& cfg, std::size_t period);

}  // namespace netsig
