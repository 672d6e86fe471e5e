#include "netsig/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "netsig/error.hpp"
#include "netsig/parallel.hpp"
#include "netsig/rng.hpp"

namespace netsig {
namespace {

// FFTW planning is not thread-safe; executing an existing plan on fresh
// buffers is. Plans are created once per length and kept for the process.
class FftPlans {
public:
  static FftPlans& instance() {
    static FftPlans plans;
    return plans;
  }

  fftw_plan forward(std::size_t n) { return get(forward_, n, true); }
  fftw_plan backward(std::size_t n) { return get(backward_, n, false); }

  ~FftPlans() {
    for (auto& [n, p] : forward_) fftw_destroy_plan(p);
    for (auto& [n, p] : backward_) fftw_destroy_plan(p);
  }

private:
  fftw_plan get(std::map<std::size_t, fftw_plan>& cache, std::size_t n, bool fwd) {
    std::lock_guard lock(mutex_);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    std::vector<double> real(n);
    std::vector<std::complex<double>> cplx(n / 2 + 1);
    auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = fwd ? fftw_plan_dft_r2c_1d(len, real.data(), c, flags)
                      : fftw_plan_dft_c2r_1d(len, c, real.data(), flags);
    if (p == nullptr) throw NumericFailure(0, "FFTW planning failed for length " + std::to_string(n));
    cache.emplace(n, p);
    return p;
  }

  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> forward_;
  std::map<std::size_t, fftw_plan> backward_;
};

Eigen::MatrixXd padded_rows(const Eigen::MatrixXd& m, Eigen::Index rows) {
  if (m.rows() == rows) return m;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, m.cols());
  out.topRows(m.rows()) = m;
  return out;
}

}  // namespace

Eigen::MatrixXd SpectrumSet::phases() const {
  Eigen::MatrixXd out(coeffs.rows(), coeffs.cols());
  for (Eigen::Index c = 0; c < coeffs.rows(); ++c) {
    for (Eigen::Index f = 0; f < coeffs.cols(); ++f) {
      const double a = std::arg(coeffs(c, f));
      out(c, f) = a <= -std::numbers::pi ? std::numbers::pi : a;
    }
  }
  return out;
}

double parseval_weight(std::size_t f, std::size_t n) {
  if (f == 0) return 1.0;
  if (n % 2 == 0 && f == n / 2) return 1.0;
  return 2.0;
}

SpectrumSet compute_spectrum(const Eigen::MatrixXd& signals) {
  const auto n = static_cast<std::size_t>(signals.rows());
  if (n < 2) throw InvalidArgument("spectrum needs signals of length >= 2");
  SpectrumSet out;
  out.n = n;
  out.c_len = static_cast<std::size_t>(signals.cols());
  out.f_len = frequency_bins(n);
  out.coeffs.resize(signals.cols(), static_cast<Eigen::Index>(out.f_len));

  fftw_plan plan = FftPlans::instance().forward(n);
  std::vector<double> in(n);
  std::vector<std::complex<double>> spec(out.f_len);
  for (Eigen::Index c = 0; c < signals.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) in[i] = signals(static_cast<Eigen::Index>(i), c);
    fftw_execute_dft_r2c(plan, in.data(), reinterpret_cast<fftw_complex*>(spec.data()));
    for (std::size_t f = 0; f < out.f_len; ++f) out.coeffs(c, static_cast<Eigen::Index>(f)) = spec[f];
  }
  return out;
}

SpectrumSet compute_spectrum(const SignalCollection& sig) { return compute_spectrum(sig.coords); }

Eigen::MatrixXd inverse_spectrum(const SpectrumSet& spec) {
  const std::size_t n = spec.n;
  if (n < 2 || spec.f_len != frequency_bins(n)) throw InvalidArgument("spectrum shape inconsistent with n");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), spec.coeffs.rows());
  fftw_plan plan = FftPlans::instance().backward(n);
  std::vector<std::complex<double>> in(spec.f_len);
  std::vector<double> res(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (Eigen::Index c = 0; c < spec.coeffs.rows(); ++c) {
    for (std::size_t f = 0; f < spec.f_len; ++f) in[f] = spec.coeffs(c, static_cast<Eigen::Index>(f));
    fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(in.data()), res.data());
    for (std::size_t i = 0; i < n; ++i) out(static_cast<Eigen::Index>(i), c) = res[i] * scale;
  }
  return out;
}

TemporalSpectra compute_temporal_spectra(const TemporalSignals& sig) {
  TemporalSpectra out;
  out.n = sig.n;
  out.c_len = sig.c_len;
  out.f_len = frequency_bins(sig.n);
  out.steps.resize(sig.steps.size());
  parallel_for(sig.steps.size(), [&](std::size_t t) { out.steps[t] = compute_spectrum(sig.steps[t]); });
  return out;
}

MarginalSeries marginal(const TemporalSpectra& spec, MarginalAxis axis, std::size_t index) {
  const std::size_t bound = axis == MarginalAxis::OverFrequencies ? spec.c_len : spec.f_len;
  if (index >= bound)
    throw InvalidArgument("marginal index " + std::to_string(index) + " out of range [0, " + std::to_string(bound) +
                          ")");
  MarginalSeries out{axis, index, {}};
  out.values.reserve(spec.t_len());
  const auto i = static_cast<Eigen::Index>(index);
  for (const auto& s : spec.steps) {
    out.values.push_back(axis == MarginalAxis::OverFrequencies ? s.coeffs.row(i).cwiseAbs2().sum()
                                                               : s.coeffs.col(i).cwiseAbs2().sum());
  }
  return out;
}

std::optional<double> pearson(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("pearson: shapes differ");
  const Eigen::ArrayXXd da = a.array() - a.mean();
  const Eigen::ArrayXXd db = b.array() - b.mean();
  const double va = da.square().sum();
  const double vb = db.square().sum();
  if (va <= 0.0 || vb <= 0.0) return std::nullopt;
  return (da * db).sum() / std::sqrt(va * vb);
}

std::vector<Eigen::MatrixXd> model_energy_instances(const ModelSpec& model, std::size_t n, std::size_t reps,
                                                    std::uint64_t seed) {
  if (reps < 1) throw InvalidArgument("repetition count must be >= 1");
  std::vector<Eigen::MatrixXd> out(reps);
  parallel_for(reps, [&](std::size_t r) {
    out[r] = compute_spectrum(transform(generate_static(model, n, derive_seed(seed, r)))).energies();
  });
  return out;
}

std::optional<double> mean_correlation(const Eigen::MatrixXd& energies, const std::vector<Eigen::MatrixXd>& instances) {
  if (instances.empty()) throw InvalidArgument("no model instances to correlate with");
  double sum = 0.0;
  for (const auto& inst : instances) {
    if (inst.cols() != energies.cols()) throw InvalidArgument("frequency counts differ between spectra");
    const Eigen::Index rows = std::max(inst.rows(), energies.rows());
    const auto rho = pearson(padded_rows(energies, rows), padded_rows(inst, rows));
    if (!rho) return std::nullopt;
    sum += *rho;
  }
  return sum / static_cast<double>(instances.size());
}

std::optional<double> correlate_with_model(const SpectrumSet& spec_t, const ModelSpec& model, std::size_t n,
                                           std::size_t reps, std::uint64_t seed) {
  return mean_correlation(spec_t.energies(), model_energy_instances(model, n, reps, seed));
}

std::vector<std::optional<double>> correlation_series(const TemporalSpectra& spec, const ModelSpec& model,
                                                      std::size_t reps, std::uint64_t seed) {
  const auto instances = model_energy_instances(model, spec.n, reps, seed);
  std::vector<std::optional<double>> out(spec.t_len());
  parallel_for(spec.t_len(), [&](std::size_t t) { out[t] = mean_correlation(spec.steps[t].energies(), instances); });
  return out;
}

}  // namespace netsig
