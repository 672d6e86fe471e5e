#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "netsig/graph.hpp"
#include "netsig/spectral.hpp"
#include "netsig/transform.hpp"

namespace netsig {

struct NmfConfig {
  std::size_t k = 3;
  double gamma = 0.0;        // weight of the temporal smoothness penalty
  double beta = 0.0;         // 0 = Itakura-Saito; 1 and 2 only without smoothing
  std::size_t max_iters = 500;
  double tol = 1e-6;         // relative objective decrease over kStopWindow iterations
  double floor = 1e-12;      // epsilon relative to mean(V)
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kStopWindow = 10;

/// Stacked energies: v(f * C + c, t) = e_cf^(t) + eps.
struct NmfInput {
  std::size_t c_len = 0;
  std::size_t f_len = 0;
  Eigen::MatrixXd v;  // (F*C) x T
  double eps = 0.0;

  std::size_t row(std::size_t c, std::size_t f) const { return f * c_len + c; }
};

struct NmfResult {
  Eigen::MatrixXd w;  // (F*C) x K, columns sum to 1
  Eigen::MatrixXd h;  // K x T
  std::vector<double> objective_trace;  // entry 0 is the initial objective
  bool converged = false;
  std::size_t iterations = 0;
};

/// Relative floor applied when stacking spectra (eps = kStackFloor * mean(E),
/// or kStackFloor itself for all-zero input).
inline constexpr double kStackFloor = 1e-12;

NmfInput stack_spectra(const TemporalSpectra& spec);

/// d_beta(x | y), summed elementwise. beta = 0 gives x/y - log(x/y) - 1.
double beta_divergence(const Eigen::ArrayXXd& x, const Eigen::ArrayXXd& y, double beta);

/// D(V | WH + eps) + gamma * sum_k sum_{t>=1} d_IS(h_{k,t-1} | h_{k,t}).
double nmf_objective(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w, const Eigen::MatrixXd& h, double eps,
                     double beta, double gamma);

/// Majorization-minimization NMF. With beta = 0 and gamma > 0 the activation
/// update minimizes the majorized objective coordinate-wise in t, which keeps
/// the objective non-increasing.
NmfResult nmf_decompose(const NmfInput& input, const NmfConfig& cfg);
NmfResult nmf_decompose(const Eigen::MatrixXd& v, const NmfConfig& cfg);

/// Wiener mask of pattern k at (row, t): w_rk h_kt / sum_l w_rl h_lt.
Eigen::MatrixXd wiener_mask(const NmfResult& res, std::size_t k);

/// Masked copy of `spec` for pattern k; phases are preserved.
TemporalSpectra wiener_separate(const TemporalSpectra& spec, const NmfResult& res, std::size_t k);

struct ComponentNetwork {
  TemporalSpectra spectra;
  TemporalSignals signals;
  TemporalNetwork network;
  Eigen::MatrixXd aggregate;  // sum_t h_kt A^(k,t); empty until aggregated
};

/// Inverse DFT of each step, then the energy-weighted inverse transform using
/// the reference signals' energies and vertex orderings.
ComponentNetwork reconstruct_component(const TemporalSpectra& spec_k, const TemporalSignals& refs, double alpha,
                                       std::span<const std::size_t> edge_counts);

/// sum_t h_k[t] * A^(t), as a dense n x n matrix.
Eigen::MatrixXd aggregate_weighted(const TemporalNetwork& net, std::span<const double> h_k);

struct Decomposition {
  TemporalSignals signals;
  TemporalSpectra spectra;
  NmfInput input;
  NmfResult nmf;
  std::vector<ComponentNetwork> components;
};

/// transform -> spectra -> stack -> NMF -> Wiener -> reconstruct -> aggregate.
/// Per-step edge budgets default to the original snapshots' edge counts.
Decomposition decompose_pipeline(const TemporalNetwork& net, const NmfConfig& cfg, double alpha,
                                 std::optional<std::vector<std::size_t>> edge_counts = std::nullopt);

}  // namespace netsig
