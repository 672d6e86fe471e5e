/*
 * netsig C API.
 *
 * Temporal networks are turned into per-snapshot signal collections (classical
 * multidimensional scaling), analyzed in the frequency domain, factorized with
 * smooth Itakura-Saito NMF, and the extracted patterns are transformed back
 * into temporal sub-networks.
 *
 * Every function returns a netsig_status. On failure, netsig_last_error()
 * describes the error for the calling thread until its next API call. Objects
 * are opaque handles released with the matching *_free function; free
 * functions accept NULL. Matrices are copied out in row-major order into
 * caller buffers whose length (in elements) must match exactly.
 */
#ifndef NETSIG_NETSIG_H
#define NETSIG_NETSIG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NETSIG_BUILDING_LIB)
#    define NETSIG_API __declspec(dllexport)
#  else
#    define NETSIG_API __declspec(dllimport)
#  endif
#else
#  define NETSIG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum netsig_status {
  NETSIG_OK = 0,
  NETSIG_ERR_INVALID_ARGUMENT = 1,
  NETSIG_ERR_IO = 2,
  NETSIG_ERR_PARSE = 3,
  NETSIG_ERR_NUMERIC = 4,
  NETSIG_ERR_DEGENERATE = 5,
  NETSIG_ERR_INTERNAL = 6
} netsig_status;

typedef enum netsig_format { NETSIG_FORMAT_CSV = 0, NETSIG_FORMAT_BIN = 1 } netsig_format;

typedef enum netsig_axis {
  NETSIG_AXIS_OVER_FREQUENCIES = 0, /* E_f(c) */
  NETSIG_AXIS_OVER_COMPONENTS = 1   /* E_c(f) */
} netsig_axis;

typedef struct netsig_network netsig_network;
typedef struct netsig_signals netsig_signals;
typedef struct netsig_spectra netsig_spectra;
typedef struct netsig_decomposition netsig_decomposition;

NETSIG_API const char* netsig_version(void);
NETSIG_API const char* netsig_last_error(void);
NETSIG_API const char* netsig_status_name(netsig_status status);

/* Worker threads for per-snapshot work; 0 = hardware concurrency. */
NETSIG_API netsig_status netsig_set_threads(size_t threads);

/* ---- networks ---------------------------------------------------------- */

/* Single-snapshot network drawn from a model spec such as "sbm:k=3". */
NETSIG_API netsig_status netsig_network_generate(const char* model_spec, size_t n, uint64_t seed,
                                                 netsig_network** out);

typedef struct netsig_ttn_config {
  size_t n;
  size_t period_len;
  const char* schedule; /* ';'-separated model specs, one per period */
  double p_keep_in;
  double p_gain_in;
  double p_keep_out;
  double p_gain_out;
  uint64_t seed;
} netsig_ttn_config;

/* Fills the default toy-network configuration (n = 100, four 20-step periods). */
NETSIG_API void netsig_ttn_config_default(netsig_ttn_config* cfg);
NETSIG_API netsig_status netsig_network_generate_ttn(const netsig_ttn_config* cfg, netsig_network** out);

NETSIG_API netsig_status netsig_network_read(const char* path, netsig_network** out);
NETSIG_API netsig_status netsig_network_write(const netsig_network* net, const char* path);

typedef struct netsig_ingest_config {
  int64_t window; /* seconds per snapshot */
  int64_t t_start;
  int64_t t_end;  /* exclusive; t_start == t_end == 0 means the records' span */
  int lenient;    /* skip malformed lines / unknown ids instead of failing */
} netsig_ingest_config;

NETSIG_API void netsig_ingest_config_default(netsig_ingest_config* cfg);
/* Reads a `t i j [Ci Cj]` contact log; *skipped (optional) receives the
 * number of lenient-mode skips. */
NETSIG_API netsig_status netsig_network_ingest(const char* path, const netsig_ingest_config* cfg,
                                               netsig_network** out, size_t* skipped);

NETSIG_API netsig_status netsig_network_shape(const netsig_network* net, size_t* n, size_t* t_len);
NETSIG_API netsig_status netsig_network_edge_count(const netsig_network* net, size_t t, size_t* count);
NETSIG_API netsig_status netsig_network_has_edge(const netsig_network* net, size_t t, size_t i, size_t j,
                                                 int* present);
NETSIG_API netsig_status netsig_network_equal(const netsig_network* a, const netsig_network* b, int* equal);
/* Descriptor "edges", "isolated", "clustering" or "shortest_path"; NaN marks
 * undefined values. len must equal T. */
NETSIG_API netsig_status netsig_network_descriptor(const netsig_network* net, const char* name, double* out,
                                                   size_t len);
NETSIG_API void netsig_network_free(netsig_network* net);

/* ---- signals and spectra ----------------------------------------------- */

NETSIG_API netsig_status netsig_signals_compute(const netsig_network* net, netsig_signals** out);
NETSIG_API netsig_status netsig_signals_shape(const netsig_signals* sig, size_t* n, size_t* c_len, size_t* t_len);
/* N x C coordinates of step t. */
NETSIG_API netsig_status netsig_signals_coords(const netsig_signals* sig, size_t t, double* out, size_t len);
/* CSV format writes a directory of per-step text files plus manifest.json;
 * BIN writes a single container file. */
NETSIG_API netsig_status netsig_signals_write(const netsig_signals* sig, const char* path, netsig_format format);
/* Per-snapshot perfect-retrieval check: number of snapshots that differ
 * after inverse transform with alpha and the original edge counts. */
NETSIG_API netsig_status netsig_signals_roundtrip(const netsig_signals* sig, const netsig_network* net, double alpha,
                                                  size_t* mismatched);
NETSIG_API void netsig_signals_free(netsig_signals* sig);

NETSIG_API netsig_status netsig_spectra_compute(const netsig_signals* sig, netsig_spectra** out);
NETSIG_API netsig_status netsig_spectra_shape(const netsig_spectra* spec, size_t* c_len, size_t* f_len,
                                              size_t* t_len);
/* C x F energies of step t. */
NETSIG_API netsig_status netsig_spectra_energies(const netsig_spectra* spec, size_t t, double* out, size_t len);
NETSIG_API netsig_status netsig_spectra_write(const netsig_spectra* spec, const char* path, netsig_format format);
NETSIG_API netsig_status netsig_spectra_marginal(const netsig_spectra* spec, netsig_axis axis, size_t index,
                                                 double* out, size_t len);
/* rho(t) against reps seeded instances of model_spec; NaN where undefined. */
NETSIG_API netsig_status netsig_spectra_correlate(const netsig_spectra* spec, const char* model_spec, size_t reps,
                                                  uint64_t seed, double* out, size_t len);
NETSIG_API void netsig_spectra_free(netsig_spectra* spec);

/* Expands "sbm:k=2..6" into its member specs; writes the canonical form of
 * spec `index` into buf (NUL-terminated) and the member count into *count. */
NETSIG_API netsig_status netsig_model_spec_expand(const char* spec_range, size_t index, char* buf, size_t buf_len,
                                                  size_t* count);

/* ---- decomposition ----------------------------------------------------- */

typedef struct netsig_nmf_config {
  size_t k;
  double gamma;
  double beta;
  size_t max_iters;
  double tol;
  double floor;
  uint64_t seed;
} netsig_nmf_config;

NETSIG_API void netsig_nmf_config_default(netsig_nmf_config* cfg);

/* Full pipeline. edge_counts (length T) overrides the per-step edge budget;
 * pass NULL to reuse the original snapshot edge counts. */
NETSIG_API netsig_status netsig_decompose(const netsig_network* net, const netsig_nmf_config* cfg, double alpha,
                                          const size_t* edge_counts, size_t edge_counts_len,
                                          netsig_decomposition** out);
NETSIG_API netsig_status netsig_decomposition_shape(const netsig_decomposition* dec, size_t* k, size_t* c_len,
                                                    size_t* f_len, size_t* t_len, size_t* n);
/* (F*C) x K patterns; row f*C + c. */
NETSIG_API netsig_status netsig_decomposition_w(const netsig_decomposition* dec, double* out, size_t len);
/* K x T activations. */
NETSIG_API netsig_status netsig_decomposition_h(const netsig_decomposition* dec, double* out, size_t len);
NETSIG_API netsig_status netsig_decomposition_trace(const netsig_decomposition* dec, double* out, size_t len,
                                                    size_t* trace_len, int* converged);
/* Reconstructed temporal sub-network of pattern k (new handle). */
NETSIG_API netsig_status netsig_decomposition_component(const netsig_decomposition* dec, size_t k,
                                                        netsig_network** out);
/* N x N activation-weighted aggregate of pattern k. */
NETSIG_API netsig_status netsig_decomposition_aggregate(const netsig_decomposition* dec, size_t k, double* out,
                                                        size_t len);
NETSIG_API void netsig_decomposition_free(netsig_decomposition* dec);

#ifdef __cplusplus
}
#endif

#endif /* NETSIG_NETSIG_H */
