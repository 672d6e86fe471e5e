#include "netsig/decomposition.hpp"

#include "netsig/error.hpp"
#include "netsig/parallel.hpp"

namespace netsig {

Eigen::MatrixXd wiener_mask(const NmfResult& res, std::size_t k) {
  const auto kk = static_cast<Eigen::Index>(k);
  if (kk >= res.w.cols()) throw InvalidArgument("pattern index out of range");
  const Eigen::MatrixXd total = res.w * res.h;
  const double uniform = 1.0 / static_cast<double>(res.w.cols());
  Eigen::MatrixXd mask(total.rows(), total.cols());
  for (Eigen::Index t = 0; t < total.cols(); ++t)
    for (Eigen::Index r = 0; r < total.rows(); ++r)
      mask(r, t) = total(r, t) > 0.0 ? res.w(r, kk) * res.h(kk, t) / total(r, t) : uniform;
  return mask;
}

TemporalSpectra wiener_separate(const TemporalSpectra& spec, const NmfResult& res, std::size_t k) {
  if (static_cast<std::size_t>(res.w.rows()) != spec.c_len * spec.f_len ||
      static_cast<std::size_t>(res.h.cols()) != spec.t_len())
    throw InvalidArgument("NMF factors do not match the spectra shape");
  const Eigen::MatrixXd mask = wiener_mask(res, k);
  TemporalSpectra out = spec;
  for (std::size_t t = 0; t < spec.t_len(); ++t) {
    auto& coeffs = out.steps[t].coeffs;
    for (std::size_t f = 0; f < spec.f_len; ++f)
      for (std::size_t c = 0; c < spec.c_len; ++c)
        coeffs(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(f)) *=
            mask(static_cast<Eigen::Index>(f * spec.c_len + c), static_cast<Eigen::Index>(t));
  }
  return out;
}

ComponentNetwork reconstruct_component(const TemporalSpectra& spec_k, const TemporalSignals& refs, double alpha,
                                       std::span<const std::size_t> edge_counts) {
  if (spec_k.t_len() != refs.steps.size()) throw InvalidArgument("spectra and reference lengths differ");
  TemporalSignals sig;
  sig.n = refs.n;
  sig.c_len = spec_k.c_len;
  sig.steps.resize(spec_k.t_len());
  parallel_for(spec_k.t_len(), [&](std::size_t t) {
    auto& s = sig.steps[t];
    s.n = refs.n;
    s.c_len = spec_k.c_len;
    s.coords = inverse_spectrum(spec_k.steps[t]);
    s.energies = s.coords.colwise().squaredNorm().transpose();
    s.eigenvalues = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.c_len));
    s.ordering = refs.steps[t].ordering;
  });
  TemporalNetwork net = inverse_transform_temporal(sig, refs, alpha, edge_counts);
  return ComponentNetwork{spec_k, std::move(sig), std::move(net), {}};
}

Eigen::MatrixXd aggregate_weighted(const TemporalNetwork& net, std::span<const double> h_k) {
  if (h_k.size() != net.t_len())
    throw InvalidArgument("activation length " + std::to_string(h_k.size()) + " differs from T = " +
                          std::to_string(net.t_len()));
  const auto n = static_cast<Eigen::Index>(net.n());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t t = 0; t < net.t_len(); ++t) {
    const auto& adj = net.at(t).adjacency();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (adj[static_cast<std::size_t>(i * n + j)]) out(i, j) += h_k[t];
  }
  return out;
}

Decomposition decompose_pipeline(const TemporalNetwork& net, const NmfConfig& cfg, double alpha,
                                 std::optional<std::vector<std::size_t>> edge_counts) {
  if (net.n() < 2) throw InvalidArgument("decomposition needs n >= 2");
  std::vector<std::size_t> budget;
  if (edge_counts) {
    budget = std::move(*edge_counts);
  } else {
    for (const auto& g : net.snapshots()) budget.push_back(edge_count(g));
  }

  Decomposition out;
  out.signals = transform_temporal(net);
  out.spectra = compute_temporal_spectra(out.signals);
  out.input = stack_spectra(out.spectra);
  out.nmf = nmf_decompose(out.input, cfg);
  out.components.reserve(cfg.k);
  for (std::size_t k = 0; k < cfg.k; ++k) {
    auto comp = reconstruct_component(wiener_separate(out.spectra, out.nmf, k), out.signals, alpha, budget);
    const Eigen::VectorXd h_k = out.nmf.h.row(static_cast<Eigen::Index>(k)).transpose();
    comp.aggregate = aggregate_weighted(comp.network, std::span<const double>(h_k.data(), h_k.size()));
    out.components.push_back(std::move(comp));
  }
  return out;
}

}  // namespace netsig
