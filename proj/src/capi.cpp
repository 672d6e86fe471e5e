#include <cmath>
#include <cstring>
#include <exception>
#include <algorithm>
#include <fstream>
#include <limits>
#include <new>
#include <string>

#include "netsig/decomposition.hpp"
#include "netsig/error.hpp"
#include "netsig/generators.hpp"
#include "netsig/ingest.hpp"
#include "netsig/io.hpp"
#include "netsig/netsig.h"
#include "netsig/parallel.hpp"
#include "netsig/spectral.hpp"
#include "netsig/transform.hpp"

#ifndef NETSIG_VERSION
#define NETSIG_VERSION "0.0.0"
#endif

struct netsig_network {
  netsig::TemporalNetwork net;
};
struct netsig_signals {
  netsig::TemporalSignals sig;
};
struct netsig_spectra {
  netsig::TemporalSpectra spec;
};
struct netsig_decomposition {
  netsig::Decomposition dec;
};

namespace {

thread_local std::string g_last_error;

netsig_status fail(netsig_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

netsig_status map_code(netsig::ErrorCode code) {
  switch (code) {
    case netsig::ErrorCode::InvalidArgument: return NETSIG_ERR_INVALID_ARGUMENT;
    case netsig::ErrorCode::Io: return NETSIG_ERR_IO;
    case netsig::ErrorCode::Parse: return NETSIG_ERR_PARSE;
    case netsig::ErrorCode::Numeric: return NETSIG_ERR_NUMERIC;
    case netsig::ErrorCode::Degenerate: return NETSIG_ERR_DEGENERATE;
  }
  return NETSIG_ERR_INTERNAL;
}

// Runs body, translating exceptions into status codes.
template <class F>
netsig_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return NETSIG_OK;
  } catch (const netsig::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NETSIG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NETSIG_ERR_INTERNAL, e.what());
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw netsig::InvalidArgument(std::string(what) + " must not be NULL");
}

void require_len(std::size_t got, std::size_t want) {
  if (got != want)
    throw netsig::InvalidArgument("buffer length " + std::to_string(got) + " does not match " + std::to_string(want));
}

template <class M>
void copy_row_major(const M& m, double* out, std::size_t len) {
  require(out, "output buffer");
  require_len(len, static_cast<std::size_t>(m.rows() * m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) *out++ = m(i, j);
}

std::vector<netsig::ModelSpec> parse_schedule(const char* text) {
  require(text, "schedule");
  std::vector<netsig::ModelSpec> out;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    const auto item = rest.substr(0, semi);
    if (!item.empty()) out.push_back(netsig::parse_model_spec(item));
    if (semi == std::string_view::npos) break;
    rest = rest.substr(semi + 1);
  }
  return out;
}

const char* kDefaultSchedule = "er:p=0.4;sbm:k=3,pw=0.8,pb=0.05;ring:k=4;ringcom:k=4,c=3,pw=0.8";

}  // namespace

extern "C" {

const char* netsig_version(void) { return NETSIG_VERSION; }

const char* netsig_last_error(void) { return g_last_error.c_str(); }

const char* netsig_status_name(netsig_status status) {
  switch (status) {
    case NETSIG_OK: return "ok";
    case NETSIG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NETSIG_ERR_IO: return "i/o error";
    case NETSIG_ERR_PARSE: return "parse error";
    case NETSIG_ERR_NUMERIC: return "numeric failure";
    case NETSIG_ERR_DEGENERATE: return "degenerate component";
    case NETSIG_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

netsig_status netsig_set_threads(size_t threads) {
  return guarded([&] { netsig::set_thread_count(threads); });
}

netsig_status netsig_network_generate(const char* model_spec, size_t n, uint64_t seed, netsig_network** out) {
  return guarded([&] {
    require(model_spec, "model_spec");
    require(out, "out");
    auto g = netsig::generate_static(netsig::parse_model_spec(model_spec), n, seed);
    *out = new netsig_network{netsig::TemporalNetwork({std::move(g)})};
  });
}

void netsig_ttn_config_default(netsig_ttn_config* cfg) {
  if (cfg == nullptr) return;
  const auto d = netsig::TtnConfig::default_schedule(0);
  *cfg = netsig_ttn_config{d.n, d.period_len, kDefaultSchedule, d.p_keep_in, d.p_gain_in, d.p_keep_out,
                           d.p_gain_out, 0};
}

netsig_status netsig_network_generate_ttn(const netsig_ttn_config* cfg, netsig_network** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    netsig::TtnConfig c;
    c.n = cfg->n;
    c.period_len = cfg->period_len;
    c.schedule = parse_schedule(cfg->schedule);
    c.p_keep_in = cfg->p_keep_in;
    c.p_gain_in = cfg->p_gain_in;
    c.p_keep_out = cfg->p_keep_out;
    c.p_gain_out = cfg->p_gain_out;
    c.seed = cfg->seed;
    *out = new netsig_network{netsig::generate_ttn(c)};
  });
}

netsig_status netsig_network_read(const char* path, netsig_network** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new netsig_network{netsig::read_network_file(path)};
  });
}

netsig_status netsig_network_write(const netsig_network* net, const char* path) {
  return guarded([&] {
    require(net, "net");
    require(path, "path");
    netsig::write_network_file(path, net->net);
  });
}

void netsig_ingest_config_default(netsig_ingest_config* cfg) {
  if (cfg == nullptr) return;
  *cfg = netsig_ingest_config{600, 0, 0, 0};
}

netsig_status netsig_network_ingest(const char* path, const netsig_ingest_config* cfg, netsig_network** out,
                                    size_t* skipped) {
  return guarded([&] {
    require(path, "path");
    require(cfg, "cfg");
    require(out, "out");
    std::ifstream in(path);
    if (!in) throw netsig::IoError(std::string("cannot open '") + path + "' for reading");
    std::vector<std::string> warnings;
    const auto records = netsig::parse_contacts(in, path, cfg->lenient != 0, &warnings);
    if (records.empty()) throw netsig::InvalidArgument(std::string("no contact records in '") + path + "'");
    netsig::AggregationConfig agg;
    agg.window = cfg->window;
    agg.t_start = cfg->t_start;
    agg.t_end = cfg->t_end;
    if (agg.t_start == 0 && agg.t_end == 0) {
      auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                          [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
      agg.t_start = lo->timestamp;
      agg.t_end = hi->timestamp + 1;
    }
    agg.id_map = netsig::build_id_map(records);
    auto net = netsig::aggregate_windows(records, agg, cfg->lenient != 0, &warnings);
    if (skipped) *skipped = warnings.size();
    *out = new netsig_network{std::move(net)};
  });
}

netsig_status netsig_network_shape(const netsig_network* net, size_t* n, size_t* t_len) {
  return guarded([&] {
    require(net, "net");
    if (n) *n = net->net.n();
    if (t_len) *t_len = net->net.t_len();
  });
}

netsig_status netsig_network_edge_count(const netsig_network* net, size_t t, size_t* count) {
  return guarded([&] {
    require(net, "net");
    require(count, "count");
    if (t >= net->net.t_len()) throw netsig::InvalidArgument("time index out of range");
    *count = netsig::edge_count(net->net.at(t));
  });
}

netsig_status netsig_network_has_edge(const netsig_network* net, size_t t, size_t i, size_t j, int* present) {
  return guarded([&] {
    require(net, "net");
    require(present, "present");
    if (t >= net->net.t_len() || i >= net->net.n() || j >= net->net.n())
      throw netsig::InvalidArgument("index out of range");
    *present = net->net.at(t).has_edge(i, j) ? 1 : 0;
  });
}

netsig_status netsig_network_equal(const netsig_network* a, const netsig_network* b, int* equal) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(equal, "equal");
    *equal = a->net == b->net ? 1 : 0;
  });
}

netsig_status netsig_network_descriptor(const netsig_network* net, const char* name, double* out, size_t len) {
  return guarded([&] {
    require(net, "net");
    require(name, "name");
    require(out, "out");
    const auto series = netsig::descriptor_series(net->net, netsig::parse_descriptor(name));
    require_len(len, series.values.size());
    std::copy(series.values.begin(), series.values.end(), out);
  });
}

void netsig_network_free(netsig_network* net) { delete net; }

netsig_status netsig_signals_compute(const netsig_network* net, netsig_signals** out) {
  return guarded([&] {
    require(net, "net");
    require(out, "out");
    *out = new netsig_signals{netsig::transform_temporal(net->net)};
  });
}

netsig_status netsig_signals_shape(const netsig_signals* sig, size_t* n, size_t* c_len, size_t* t_len) {
  return guarded([&] {
    require(sig, "sig");
    if (n) *n = sig->sig.n;
    if (c_len) *c_len = sig->sig.c_len;
    if (t_len) *t_len = sig->sig.steps.size();
  });
}

netsig_status netsig_signals_coords(const netsig_signals* sig, size_t t, double* out, size_t len) {
  return guarded([&] {
    require(sig, "sig");
    if (t >= sig->sig.steps.size()) throw netsig::InvalidArgument("time index out of range");
    copy_row_major(sig->sig.steps[t].coords, out, len);
  });
}

netsig_status netsig_signals_write(const netsig_signals* sig, const char* path, netsig_format format) {
  return guarded([&] {
    require(sig, "sig");
    require(path, "path");
    if (format == NETSIG_FORMAT_BIN)
      netsig::write_signals_binary(path, sig->sig);
    else
      netsig::write_signals_text_dir(path, sig->sig);
  });
}

netsig_status netsig_signals_roundtrip(const netsig_signals* sig, const netsig_network* net, double alpha,
                                       size_t* mismatched) {
  return guarded([&] {
    require(sig, "sig");
    require(net, "net");
    require(mismatched, "mismatched");
    std::vector<std::size_t> counts;
    for (const auto& g : net->net.snapshots()) counts.push_back(netsig::edge_count(g));
    const auto back = netsig::inverse_transform_temporal(sig->sig, sig->sig, alpha, counts);
    std::size_t bad = 0;
    for (std::size_t t = 0; t < back.t_len(); ++t) bad += back.at(t) == net->net.at(t) ? 0 : 1;
    *mismatched = bad;
  });
}

void netsig_signals_free(netsig_signals* sig) { delete sig; }

netsig_status netsig_spectra_compute(const netsig_signals* sig, netsig_spectra** out) {
  return guarded([&] {
    require(sig, "sig");
    require(out, "out");
    *out = new netsig_spectra{netsig::compute_temporal_spectra(sig->sig)};
  });
}

netsig_status netsig_spectra_shape(const netsig_spectra* spec, size_t* c_len, size_t* f_len, size_t* t_len) {
  return guarded([&] {
    require(spec, "spec");
    if (c_len) *c_len = spec->spec.c_len;
    if (f_len) *f_len = spec->spec.f_len;
    if (t_len) *t_len = spec->spec.t_len();
  });
}

netsig_status netsig_spectra_energies(const netsig_spectra* spec, size_t t, double* out, size_t len) {
  return guarded([&] {
    require(spec, "spec");
    if (t >= spec->spec.t_len()) throw netsig::InvalidArgument("time index out of range");
    copy_row_major(spec->spec.steps[t].energies(), out, len);
  });
}

netsig_status netsig_spectra_write(const netsig_spectra* spec, const char* path, netsig_format format) {
  return guarded([&] {
    require(spec, "spec");
    require(path, "path");
    if (format == NETSIG_FORMAT_BIN)
      netsig::write_spectra_binary(path, spec->spec);
    else
      netsig::atomic_write(path, [&](std::ostream& o) { netsig::write_spectra_csv(o, spec->spec); });
  });
}

netsig_status netsig_spectra_marginal(const netsig_spectra* spec, netsig_axis axis, size_t index, double* out,
                                      size_t len) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    const auto ax = axis == NETSIG_AXIS_OVER_COMPONENTS ? netsig::MarginalAxis::OverComponents
                                                        : netsig::MarginalAxis::OverFrequencies;
    const auto series = netsig::marginal(spec->spec, ax, index);
    require_len(len, series.values.size());
    std::copy(series.values.begin(), series.values.end(), out);
  });
}

netsig_status netsig_spectra_correlate(const netsig_spectra* spec, const char* model_spec, size_t reps, uint64_t seed,
                                       double* out, size_t len) {
  return guarded([&] {
    require(spec, "spec");
    require(model_spec, "model_spec");
    require(out, "out");
    require_len(len, spec->spec.t_len());
    const auto rho = netsig::correlation_series(spec->spec, netsig::parse_model_spec(model_spec), reps, seed);
    for (std::size_t t = 0; t < rho.size(); ++t) out[t] = rho[t].value_or(std::numeric_limits<double>::quiet_NaN());
  });
}

void netsig_spectra_free(netsig_spectra* spec) { delete spec; }

netsig_status netsig_model_spec_expand(const char* spec_range, size_t index, char* buf, size_t buf_len,
                                       size_t* count) {
  return guarded([&] {
    require(spec_range, "spec_range");
    const auto specs = netsig::parse_model_spec_range(spec_range);
    if (count) *count = specs.size();
    if (buf == nullptr) return;
    if (index >= specs.size()) throw netsig::InvalidArgument("spec index out of range");
    const std::string s = netsig::format_model_spec(specs[index]);
    if (s.size() + 1 > buf_len) throw netsig::InvalidArgument("buffer too small for model spec");
    std::memcpy(buf, s.c_str(), s.size() + 1);
  });
}

void netsig_nmf_config_default(netsig_nmf_config* cfg) {
  if (cfg == nullptr) return;
  const netsig::NmfConfig d;
  *cfg = netsig_nmf_config{d.k, d.gamma, d.beta, d.max_iters, d.tol, d.floor, d.seed};
}

netsig_status netsig_decompose(const netsig_network* net, const netsig_nmf_config* cfg, double alpha,
                               const size_t* edge_counts, size_t edge_counts_len, netsig_decomposition** out) {
  return guarded([&] {
    require(net, "net");
    require(cfg, "cfg");
    require(out, "out");
    netsig::NmfConfig c{cfg->k, cfg->gamma, cfg->beta, cfg->max_iters, cfg->tol, cfg->floor, cfg->seed};
    std::optional<std::vector<std::size_t>> budget;
    if (edge_counts != nullptr) {
      require_len(edge_counts_len, net->net.t_len());
      budget.emplace(edge_counts, edge_counts + edge_counts_len);
    }
    *out = new netsig_decomposition{netsig::decompose_pipeline(net->net, c, alpha, std::move(budget))};
  });
}

netsig_status netsig_decomposition_shape(const netsig_decomposition* dec, size_t* k, size_t* c_len, size_t* f_len,
                                         size_t* t_len, size_t* n) {
  return guarded([&] {
    require(dec, "dec");
    if (k) *k = static_cast<std::size_t>(dec->dec.nmf.w.cols());
    if (c_len) *c_len = dec->dec.spectra.c_len;
    if (f_len) *f_len = dec->dec.spectra.f_len;
    if (t_len) *t_len = dec->dec.spectra.t_len();
    if (n) *n = dec->dec.signals.n;
  });
}

netsig_status netsig_decomposition_w(const netsig_decomposition* dec, double* out, size_t len) {
  return guarded([&] {
    require(dec, "dec");
    copy_row_major(dec->dec.nmf.w, out, len);
  });
}

netsig_status netsig_decomposition_h(const netsig_decomposition* dec, double* out, size_t len) {
  return guarded([&] {
    require(dec, "dec");
    copy_row_major(dec->dec.nmf.h, out, len);
  });
}

netsig_status netsig_decomposition_trace(const netsig_decomposition* dec, double* out, size_t len, size_t* trace_len,
                                         int* converged) {
  return guarded([&] {
    require(dec, "dec");
    const auto& trace = dec->dec.nmf.objective_trace;
    if (trace_len) *trace_len = trace.size();
    if (converged) *converged = dec->dec.nmf.converged ? 1 : 0;
    if (out == nullptr) return;
    require_len(len, trace.size());
    std::copy(trace.begin(), trace.end(), out);
  });
}

netsig_status netsig_decomposition_component(const netsig_decomposition* dec, size_t k, netsig_network** out) {
  return guarded([&] {
    require(dec, "dec");
    require(out, "out");
    if (k >= dec->dec.components.size()) throw netsig::InvalidArgument("pattern index out of range");
    *out = new netsig_network{dec->dec.components[k].network};
  });
}

netsig_status netsig_decomposition_aggregate(const netsig_decomposition* dec, size_t k, double* out, size_t len) {
  return guarded([&] {
    require(dec, "dec");
    if (k >= dec->dec.components.size()) throw netsig::InvalidArgument("pattern index out of range");
    copy_row_major(dec->dec.components[k].aggregate, out, len);
  });
}

void netsig_decomposition_free(netsig_decomposition* dec) { delete dec; }

}  // extern "C"
