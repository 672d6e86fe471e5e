#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "netsig/generators.hpp"
#include "netsig/transform.hpp"

namespace netsig {

/// One-sided DFT of each component: coeffs(c, f) = sum_i x_ic exp(-2 pi i f i / N)
/// for f = 0 .. N/2 (unnormalized forward transform).
struct SpectrumSet {
  std::size_t n = 0;  // signal length the spectrum came from
  std::size_t c_len = 0;
  std::size_t f_len = 0;
  Eigen::MatrixXcd coeffs;  // c_len x f_len

  Eigen::MatrixXd magnitudes() const { return coeffs.cwiseAbs(); }
  Eigen::MatrixXd energies() const { return coeffs.cwiseAbs2(); }
  Eigen::MatrixXd phases() const;  // arg in (-pi, pi]
};

struct TemporalSpectra {
  std::size_t n = 0;
  std::size_t c_len = 0;
  std::size_t f_len = 0;
  std::vector<SpectrumSet> steps;

  std::size_t t_len() const noexcept { return steps.size(); }
};

inline std::size_t frequency_bins(std::size_t n) { return n / 2 + 1; }

/// Parseval weight of bin f for length-n signals: 1 for DC and (even n)
/// Nyquist, 2 otherwise.
double parseval_weight(std::size_t f, std::size_t n);

/// Forward real DFT of each column of an n x C matrix.
SpectrumSet compute_spectrum(const Eigen::MatrixXd& signals);
SpectrumSet compute_spectrum(const SignalCollection& sig);

/// Inverse of compute_spectrum: Hermitian extension of the one-sided
/// spectrum, inverse DFT divided by n. Returns n x C real signals.
Eigen::MatrixXd inverse_spectrum(const SpectrumSet& spec);

TemporalSpectra compute_temporal_spectra(const TemporalSignals& sig);

enum class MarginalAxis {
  OverFrequencies,  // E_f(c): fixed component, summed over frequencies
  OverComponents,   // E_c(f): fixed frequency, summed over components
};

struct MarginalSeries {
  MarginalAxis axis;
  std::size_t index;
  std::vector<double> values;
};

MarginalSeries marginal(const TemporalSpectra& spec, MarginalAxis axis, std::size_t index);

/// Pearson correlation of two equally sized matrices, flattened; nullopt when
/// either has zero variance.
std::optional<double> pearson(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Energy maps of `reps` seeded instances of `model` on n vertices.
std::vector<Eigen::MatrixXd> model_energy_instances(const ModelSpec& model, std::size_t n, std::size_t reps,
                                                    std::uint64_t seed);

/// Mean Pearson correlation between `energies` and each instance map. Maps of
/// different component counts are compared after zero-padding to the larger.
std::optional<double> mean_correlation(const Eigen::MatrixXd& energies, const std::vector<Eigen::MatrixXd>& instances);

/// Mean correlation between spec_t's energies and `reps` instances of `model`.
std::optional<double> correlate_with_model(const SpectrumSet& spec_t, const ModelSpec& model, std::size_t n,
                                           std::size_t reps, std::uint64_t seed);

/// rho(t) for every time step against the same set of model instances.
std::vector<std::optional<double>> correlation_series(const TemporalSpectra& spec, const ModelSpec& model,
                                                      std::size_t reps, std::uint64_t seed);

}  // namespace netsig
