#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include "netsig/graph.hpp"
#include "netsig/spectral.hpp"
#include "netsig/transform.hpp"

namespace netsig {

/// Writes through a temporary sibling file renamed into place on success.
void atomic_write(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body,
                  bool binary = false);

// Edge-list format: header `N T`, then one `t i j` line per edge occurrence
// (i < j), ordered by t. Readers also accept '#' comment lines, either
// endpoint order and duplicate lines.
void write_network(std::ostream& out, const TemporalNetwork& net);
TemporalNetwork read_network(std::istream& in, const std::string& source = "<stream>");
void write_network_file(const std::filesystem::path& path, const TemporalNetwork& net);
TemporalNetwork read_network_file(const std::filesystem::path& path);

// Columnar signal text: `N C`, then the N ordering entries on one line, then
// N rows of C values.
void write_signal_collection(std::ostream& out, const SignalCollection& sig);
SignalCollection read_signal_collection(std::istream& in, const std::string& source = "<stream>");

// Binary container, little-endian:
//   8 bytes magic "NETSIGB1", u32 kind (1 signals, 2 spectra), u32 zero,
//   u64 dims[3], u64 n,
//   then f64 payload (spectra: interleaved re/im), then for signals the T x N
//   orderings as u64.
// Signals: dims = (N, C, T), payload index ((t * N) + i) * C + c.
// Spectra: dims = (C, F, T), payload index ((t * C) + c) * F + f.
void write_signals_binary(const std::filesystem::path& path, const TemporalSignals& sig);
TemporalSignals read_signals_binary(const std::filesystem::path& path);
void write_spectra_binary(const std::filesystem::path& path, const TemporalSpectra& spec);
TemporalSpectra read_spectra_binary(const std::filesystem::path& path);

/// One columnar text file per step (`signals_tNNNNN.txt`) plus `manifest.json`.
void write_signals_text_dir(const std::filesystem::path& dir, const TemporalSignals& sig);
TemporalSignals read_signals_text_dir(const std::filesystem::path& dir);

/// Header `c,f,t,re,im,mag,energy,phase`, one row per (c, f, t).
void write_spectra_csv(std::ostream& out, const TemporalSpectra& spec);

}  // namespace netsig
