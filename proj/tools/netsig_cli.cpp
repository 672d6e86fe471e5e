// netsig command-line front end. Every command goes through the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "netsig/netsig.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitParse = 4,
  kExitNumeric = 5,
  kExitDegenerate = 6,
  kExitMismatch = 7,
};

struct CliError : std::runtime_error {
  CliError(int code, const std::string& msg) : std::runtime_error(msg), code(code) {}
  int code;
};

int exit_code_for(netsig_status s) {
  switch (s) {
    case NETSIG_OK: return kExitOk;
    case NETSIG_ERR_INVALID_ARGUMENT: return kExitUsage;
    case NETSIG_ERR_IO: return kExitIo;
    case NETSIG_ERR_PARSE: return kExitParse;
    case NETSIG_ERR_NUMERIC: return kExitNumeric;
    case NETSIG_ERR_DEGENERATE: return kExitDegenerate;
    case NETSIG_ERR_INTERNAL: return kExitInternal;
  }
  return kExitInternal;
}

void check(netsig_status s) {
  if (s != NETSIG_OK) throw CliError(exit_code_for(s), netsig_last_error());
}

struct NetworkDeleter {
  void operator()(netsig_network* p) const { netsig_network_free(p); }
};
struct SignalsDeleter {
  void operator()(netsig_signals* p) const { netsig_signals_free(p); }
};
struct SpectraDeleter {
  void operator()(netsig_spectra* p) const { netsig_spectra_free(p); }
};
struct DecompositionDeleter {
  void operator()(netsig_decomposition* p) const { netsig_decomposition_free(p); }
};
using Network = std::unique_ptr<netsig_network, NetworkDeleter>;
using Signals = std::unique_ptr<netsig_signals, SignalsDeleter>;
using Spectra = std::unique_ptr<netsig_spectra, SpectraDeleter>;
using Decomposition = std::unique_ptr<netsig_decomposition, DecompositionDeleter>;

Network read_network(const std::string& path) {
  netsig_network* raw = nullptr;
  check(netsig_network_read(path.c_str(), &raw));
  return Network(raw);
}

std::pair<std::size_t, std::size_t> network_shape(const netsig_network* net) {
  std::size_t n = 0, t = 0;
  check(netsig_network_shape(net, &n, &t));
  return {n, t};
}

// Shortest round-trip representation, so reruns are byte-identical.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError(kExitIo, "cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw CliError(kExitIo, "write failed for '" + path.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw CliError(kExitIo, "cannot rename into '" + path.string() + "'");
  }
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError(kExitIo, "cannot create directory '" + dir.string() + "': " + ec.message());
}

// Row-major rows x cols matrix with a leading index column.
std::string matrix_csv(const std::vector<double>& m, std::size_t rows, std::size_t cols, const std::string& index,
                       const std::string& prefix) {
  std::ostringstream out;
  out << index;
  for (std::size_t j = 0; j < cols; ++j) out << ',' << prefix << j;
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    out << i;
    for (std::size_t j = 0; j < cols; ++j) out << ',' << num(m[i * cols + j]);
    out << '\n';
  }
  return out.str();
}

std::string series_csv(const std::vector<double>& v) {
  std::ostringstream out;
  out << "t,value\n";
  for (std::size_t t = 0; t < v.size(); ++t) out << t << ',' << num(v[t]) << '\n';
  return out.str();
}

struct Globals {
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string format = "csv";
  std::string manifest;
};

netsig_format format_of(const Globals& g) { return g.format == "bin" ? NETSIG_FORMAT_BIN : NETSIG_FORMAT_CSV; }

struct Run {
  json manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void output(const fs::path& p) { manifest["outputs"].push_back(p.string()); }
  void input(const fs::path& p) { manifest["inputs"].push_back(p.string()); }
  void timing(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    manifest["timings_ms"][stage] = std::chrono::duration<double, std::milli>(now - start).count();
    start = now;
  }
};

// ---- generate -------------------------------------------------------------

struct GenerateOpts {
  std::string spec;
  std::string ttn;
  std::optional<std::size_t> n;
  std::optional<std::size_t> period_len;
  std::string out = "network.txt";
};

fs::path cmd_generate(const GenerateOpts& o, const Globals& g, Run& run) {
  if (o.spec.empty() == o.ttn.empty()) throw CliError(kExitUsage, "give either a model spec or --ttn");
  netsig_network* raw = nullptr;
  json cfg;
  if (!o.ttn.empty()) {
    netsig_ttn_config c;
    netsig_ttn_config_default(&c);
    const std::string schedule = o.ttn == "default" ? std::string(c.schedule) : o.ttn;
    c.schedule = schedule.c_str();
    c.seed = g.seed;
    if (o.n) c.n = *o.n;
    if (o.period_len) c.period_len = *o.period_len;
    cfg = {{"ttn", o.ttn},           {"schedule", schedule},     {"n", c.n},
           {"period_len", c.period_len}, {"p_keep_in", c.p_keep_in}, {"p_gain_in", c.p_gain_in},
           {"p_keep_out", c.p_keep_out}, {"p_gain_out", c.p_gain_out}};
    check(netsig_network_generate_ttn(&c, &raw));
  } else {
    const std::size_t n = o.n.value_or(100);
    cfg = {{"model", o.spec}, {"n", n}};
    check(netsig_network_generate(o.spec.c_str(), n, g.seed, &raw));
  }
  Network net(raw);
  run.timing("generate");
  check(netsig_network_write(net.get(), o.out.c_str()));
  run.output(o.out);
  const auto [n, t] = network_shape(net.get());
  run.manifest["config"] = cfg;
  run.manifest["shapes"] = {{"n", n}, {"t", t}};
  std::cerr << "wrote " << o.out << " (N=" << n << ", T=" << t << ")\n";
  return o.out;
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeOpts {
  std::string in;
  std::string out;
  std::vector<std::string> marginals;
};

struct MarginalRequest {
  netsig_axis axis;
  std::size_t index;
  std::string label;
};

// "Ef:c=0" is the energy over frequencies of component 0; "Ec:f=3" the energy
// over components at frequency 3.
MarginalRequest parse_marginal(const std::string& text) {
  MarginalRequest r{};
  std::string key;
  if (text.rfind("Ef:c=", 0) == 0) {
    r.axis = NETSIG_AXIS_OVER_FREQUENCIES;
    key = "c";
  } else if (text.rfind("Ec:f=", 0) == 0) {
    r.axis = NETSIG_AXIS_OVER_COMPONENTS;
    key = "f";
  } else {
    throw CliError(kExitUsage, "bad marginal '" + text + "' (expected Ef:c=<i> or Ec:f=<i>)");
  }
  const std::string digits = text.substr(5);
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), r.index);
  if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size())
    throw CliError(kExitUsage, "bad marginal index in '" + text + "'");
  r.label = (r.axis == NETSIG_AXIS_OVER_FREQUENCIES ? "Ef_c" : "Ec_f") + digits;
  return r;
}

fs::path cmd_analyze(const AnalyzeOpts& o, const Globals& g, Run& run) {
  std::vector<MarginalRequest> requests;
  for (const auto& m : o.marginals) requests.push_back(parse_marginal(m));

  run.input(o.in);
  Network net = read_network(o.in);
  const auto [n, t_len] = network_shape(net.get());
  run.timing("read");

  const fs::path dir = o.out;
  make_dir(dir);

  static const char* kDescriptors[] = {"edges", "isolated", "clustering", "shortest_path"};
  std::vector<std::vector<double>> series;
  for (const char* name : kDescriptors) {
    series.emplace_back(t_len);
    check(netsig_network_descriptor(net.get(), name, series.back().data(), t_len));
  }
  std::ostringstream desc;
  desc << "t";
  for (const char* name : kDescriptors) desc << ',' << name;
  desc << '\n';
  for (std::size_t t = 0; t < t_len; ++t) {
    desc << t;
    for (const auto& s : series) desc << ',' << num(s[t]);
    desc << '\n';
  }
  write_atomic(dir / "descriptors.csv", desc.str());
  run.output(dir / "descriptors.csv");
  run.timing("descriptors");

  netsig_signals* sraw = nullptr;
  check(netsig_signals_compute(net.get(), &sraw));
  Signals sig(sraw);
  netsig_spectra* praw = nullptr;
  check(netsig_spectra_compute(sig.get(), &praw));
  Spectra spec(praw);
  std::size_t c_len = 0, f_len = 0;
  check(netsig_spectra_shape(spec.get(), &c_len, &f_len, nullptr));
  run.timing("spectra");

  const fs::path spectra_path = dir / (g.format == "bin" ? "spectra.bin" : "spectra.csv");
  check(netsig_spectra_write(spec.get(), spectra_path.c_str(), format_of(g)));
  run.output(spectra_path);

  for (const auto& r : requests) {
    std::vector<double> v(t_len);
    check(netsig_spectra_marginal(spec.get(), r.axis, r.index, v.data(), v.size()));
    const fs::path p = dir / ("marginal_" + r.label + ".csv");
    write_atomic(p, series_csv(v));
    run.output(p);
  }
  run.timing("write");

  run.manifest["config"] = {{"marginals", o.marginals}};
  run.manifest["shapes"] = {{"n", n}, {"t", t_len}, {"c", c_len}, {"f", f_len}};
  std::cerr << "analyzed " << o.in << " (N=" << n << ", T=" << t_len << ", C=" << c_len << ", F=" << f_len
            << ")\n";
  return dir / "run.json";
}

// ---- correlate ------------------------------------------------------------

struct CorrelateOpts {
  std::string in;
  std::vector<std::string> models;
  std::size_t reps = 20;
  std::string out = "correlation.csv";
};

std::vector<std::string> expand_models(const std::vector<std::string>& ranges) {
  std::vector<std::string> out;
  for (const auto& r : ranges) {
    std::size_t count = 0;
    check(netsig_model_spec_expand(r.c_str(), 0, nullptr, 0, &count));
    for (std::size_t i = 0; i < count; ++i) {
      char buf[256];
      check(netsig_model_spec_expand(r.c_str(), i, buf, sizeof buf, nullptr));
      out.emplace_back(buf);
    }
  }
  return out;
}

fs::path cmd_correlate(const CorrelateOpts& o, const Globals& g, Run& run) {
  const auto models = expand_models(o.models);
  if (models.empty()) throw CliError(kExitUsage, "no model specs given");

  run.input(o.in);
  Network net = read_network(o.in);
  const auto [n, t_len] = network_shape(net.get());
  netsig_signals* sraw = nullptr;
  check(netsig_signals_compute(net.get(), &sraw));
  Signals sig(sraw);
  netsig_spectra* praw = nullptr;
  check(netsig_spectra_compute(sig.get(), &praw));
  Spectra spec(praw);
  run.timing("spectra");

  std::vector<std::vector<double>> cols;
  for (const auto& m : models) {
    cols.emplace_back(t_len);
    check(netsig_spectra_correlate(spec.get(), m.c_str(), o.reps, g.seed, cols.back().data(), t_len));
  }
  run.timing("correlate");

  std::ostringstream csv;
  csv << "t";
  for (const auto& m : models) csv << ",\"" << m << '"';
  csv << '\n';
  for (std::size_t t = 0; t < t_len; ++t) {
    csv << t;
    for (const auto& c : cols) csv << ',' << num(c[t]);
    csv << '\n';
  }
  write_atomic(o.out, csv.str());
  run.output(o.out);

  run.manifest["config"] = {{"models", o.models}, {"expanded", models}, {"reps", o.reps}};
  run.manifest["shapes"] = {{"n", n}, {"t", t_len}, {"models", models.size()}};
  std::cerr << "correlated " << models.size() << " model(s) over " << t_len << " steps\n";
  return o.out;
}

// ---- decompose ------------------------------------------------------------

struct DecomposeOpts {
  std::string in;
  std::size_t k = 3;
  double gamma = 0.0;
  double beta = 0.0;
  double alpha = 1.0;
  std::size_t max_iters = 500;
  double tol = 1e-6;
  std::vector<std::size_t> edge_budget;
  std::string out;
};

fs::path cmd_decompose(const DecomposeOpts& o, const Globals& g, Run& run) {
  run.input(o.in);
  Network net = read_network(o.in);
  const auto [n, t_len] = network_shape(net.get());

  netsig_nmf_config cfg;
  netsig_nmf_config_default(&cfg);
  cfg.k = o.k;
  cfg.gamma = o.gamma;
  cfg.beta = o.beta;
  cfg.max_iters = o.max_iters;
  cfg.tol = o.tol;
  cfg.seed = g.seed;

  std::vector<std::size_t> budget = o.edge_budget;
  if (budget.size() == 1) budget.assign(t_len, budget.front());
  if (!budget.empty() && budget.size() != t_len)
    throw CliError(kExitUsage, "--edge-budget needs 1 or " + std::to_string(t_len) + " values");

  netsig_decomposition* draw = nullptr;
  check(netsig_decompose(net.get(), &cfg, o.alpha, budget.empty() ? nullptr : budget.data(), budget.size(), &draw));
  Decomposition dec(draw);
  run.timing("decompose");

  std::size_t k = 0, c_len = 0, f_len = 0, steps = 0, nodes = 0;
  check(netsig_decomposition_shape(dec.get(), &k, &c_len, &f_len, &steps, &nodes));
  const std::size_t rows = f_len * c_len;

  const fs::path dir = o.out;
  make_dir(dir);

  std::vector<double> w(rows * k), h(k * steps);
  check(netsig_decomposition_w(dec.get(), w.data(), w.size()));
  check(netsig_decomposition_h(dec.get(), h.data(), h.size()));

  write_atomic(dir / "W.csv", matrix_csv(w, rows, k, "row", "k"));
  run.output(dir / "W.csv");
  std::vector<double> ht(steps * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t t = 0; t < steps; ++t) ht[t * k + i] = h[i * steps + t];
  write_atomic(dir / "H.csv", matrix_csv(ht, steps, k, "t", "k"));
  run.output(dir / "H.csv");

  for (std::size_t j = 0; j < k; ++j) {
    std::ostringstream map;
    map << "c,f,value\n";
    for (std::size_t c = 0; c < c_len; ++c)
      for (std::size_t f = 0; f < f_len; ++f) map << c << ',' << f << ',' << num(w[(f * c_len + c) * k + j]) << '\n';
    const fs::path pattern = dir / ("pattern_k" + std::to_string(j) + ".csv");
    write_atomic(pattern, map.str());
    run.output(pattern);

    netsig_network* craw = nullptr;
    check(netsig_decomposition_component(dec.get(), j, &craw));
    Network comp(craw);
    const fs::path net_path = dir / ("network_k" + std::to_string(j) + ".txt");
    check(netsig_network_write(comp.get(), net_path.c_str()));
    run.output(net_path);

    std::vector<double> agg(nodes * nodes);
    check(netsig_decomposition_aggregate(dec.get(), j, agg.data(), agg.size()));
    const fs::path agg_path = dir / ("aggregate_k" + std::to_string(j) + ".csv");
    write_atomic(agg_path, matrix_csv(agg, nodes, nodes, "i", "v"));
    run.output(agg_path);
  }

  std::size_t trace_len = 0;
  int converged = 0;
  check(netsig_decomposition_trace(dec.get(), nullptr, 0, &trace_len, &converged));
  std::vector<double> trace(trace_len);
  check(netsig_decomposition_trace(dec.get(), trace.data(), trace.size(), nullptr, nullptr));
  std::ostringstream tr;
  tr << "iteration,objective\n";
  for (std::size_t i = 0; i < trace.size(); ++i) tr << i << ',' << num(trace[i]) << '\n';
  write_atomic(dir / "trace.csv", tr.str());
  run.output(dir / "trace.csv");
  run.timing("write");

  run.manifest["config"] = {{"k", cfg.k},         {"gamma", cfg.gamma},         {"beta", cfg.beta},
                            {"alpha", o.alpha},   {"max_iters", cfg.max_iters}, {"tol", cfg.tol},
                            {"floor", cfg.floor}, {"edge_budget", o.edge_budget}};
  run.manifest["shapes"] = {{"n", nodes}, {"t", steps}, {"c", c_len}, {"f", f_len}, {"k", k}, {"v_rows", rows}};
  run.manifest["converged"] = converged != 0;
  run.manifest["objective_trace"] = trace;
  std::cerr << "decomposed " << o.in << " into " << k << " patterns (" << trace.size() - 1 << " iterations"
            << (converged ? ", converged" : "") << ")\n";
  return dir / "run.json";
}

// ---- ingest ---------------------------------------------------------------

struct IngestOpts {
  std::string in;
  std::int64_t window = 600;
  std::int64_t t_start = 0;
  std::int64_t t_end = 0;
  bool lenient = false;
  std::string out = "network.txt";
};

fs::path cmd_ingest(const IngestOpts& o, const Globals&, Run& run) {
  netsig_ingest_config cfg;
  netsig_ingest_config_default(&cfg);
  cfg.window = o.window;
  cfg.t_start = o.t_start;
  cfg.t_end = o.t_end;
  cfg.lenient = o.lenient ? 1 : 0;

  run.input(o.in);
  netsig_network* raw = nullptr;
  std::size_t skipped = 0;
  check(netsig_network_ingest(o.in.c_str(), &cfg, &raw, &skipped));
  Network net(raw);
  run.timing("ingest");
  check(netsig_network_write(net.get(), o.out.c_str()));
  run.output(o.out);

  const auto [n, t] = network_shape(net.get());
  run.manifest["config"] = {{"window", o.window}, {"t_start", o.t_start}, {"t_end", o.t_end}, {"lenient", o.lenient}};
  run.manifest["shapes"] = {{"n", n}, {"t", t}};
  run.manifest["skipped"] = skipped;
  if (skipped > 0) std::cerr << "skipped " << skipped << " record(s)\n";
  std::cerr << "wrote " << o.out << " (N=" << n << ", T=" << t << ")\n";
  return o.out;
}

// ---- roundtrip ------------------------------------------------------------

struct RoundtripOpts {
  std::string in;
  double alpha = 0.0;
  std::string signals_out;
  std::string out = "roundtrip.csv";
};

fs::path cmd_roundtrip(const RoundtripOpts& o, const Globals& g, Run& run, bool& mismatch) {
  run.input(o.in);
  Network net = read_network(o.in);
  const auto [n, t_len] = network_shape(net.get());
  netsig_signals* sraw = nullptr;
  check(netsig_signals_compute(net.get(), &sraw));
  Signals sig(sraw);
  std::size_t c_len = 0;
  check(netsig_signals_shape(sig.get(), nullptr, &c_len, nullptr));
  run.timing("transform");

  std::size_t bad = 0;
  check(netsig_signals_roundtrip(sig.get(), net.get(), o.alpha, &bad));
  run.timing("inverse");

  if (!o.signals_out.empty()) {
    check(netsig_signals_write(sig.get(), o.signals_out.c_str(), format_of(g)));
    run.output(o.signals_out);
  }

  std::ostringstream csv;
  csv << "t,edges\n";
  for (std::size_t t = 0; t < t_len; ++t) {
    std::size_t e = 0;
    check(netsig_network_edge_count(net.get(), t, &e));
    csv << t << ',' << e << '\n';
  }
  csv << "# mismatched," << bad << '\n';
  write_atomic(o.out, csv.str());
  run.output(o.out);

  run.manifest["config"] = {{"alpha", o.alpha}, {"signals_out", o.signals_out}};
  run.manifest["shapes"] = {{"n", n}, {"t", t_len}, {"c", c_len}};
  run.manifest["mismatched"] = bad;
  std::cout << "snapshots " << t_len << ", mismatched " << bad << '\n';
  mismatch = bad > 0;
  return o.out;
}

// ---- driver ---------------------------------------------------------------

fs::path manifest_path(const Globals& g, const fs::path& primary) {
  if (!g.manifest.empty()) return g.manifest;
  if (primary.filename() == "run.json") return primary;
  fs::path p = primary;
  p += ".run.json";
  return p;
}

int run_cli(std::vector<std::string> args, int depth);

int replay(const std::string& path, int depth) {
  if (depth > 0) throw CliError(kExitUsage, "manifests cannot replay other manifests");
  std::ifstream in(path);
  if (!in) throw CliError(kExitIo, "cannot open manifest '" + path + "'");
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw CliError(kExitParse, "manifest '" + path + "': " + e.what());
  }
  if (!m.contains("argv") || !m["argv"].is_array()) throw CliError(kExitParse, "manifest '" + path + "' has no argv");
  return run_cli(m["argv"].get<std::vector<std::string>>(), depth + 1);
}

int run_cli(std::vector<std::string> args, int depth) {
  CLI::App app{"Temporal network signal analysis", "netsig"};
  app.set_version_flag("--version", std::string(netsig_version()));
  app.require_subcommand(0, 1);
  app.fallthrough();

  const CLI::Range kAtLeastOne(std::size_t{1}, std::numeric_limits<std::size_t>::max());
  Globals g;
  std::string replay_path;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--format", g.format, "Signal/spectra container format")
      ->check(CLI::IsMember({"csv", "bin"}))
      ->capture_default_str();
  app.add_option("--manifest", g.manifest, "Where to write the run manifest");
  app.add_option("--replay", replay_path, "Rerun the command recorded in a manifest")->check(CLI::ExistingFile);

  GenerateOpts gen;
  auto* generate = app.add_subcommand("generate", "Generate a static graph or a temporal toy network");
  generate->add_option("spec", gen.spec, "Model spec, e.g. sbm:k=3");
  generate->add_option("--ttn", gen.ttn, "'default' or a ';'-separated per-period schedule");
  generate->add_option("--n", gen.n, "Vertex count");
  generate->add_option("--period-len", gen.period_len, "Steps per TTN period");
  generate->add_option("-o,--out", gen.out, "Output edge list")->capture_default_str();

  AnalyzeOpts ana;
  auto* analyze = app.add_subcommand("analyze", "Descriptors, spectra and marginals of a temporal network");
  analyze->add_option("input", ana.in, "Edge-list file")->required();
  analyze->add_option("-o,--out", ana.out, "Output directory")->required();
  analyze->add_option("--marginal", ana.marginals, "Marginal energy series, Ef:c=<i> or Ec:f=<i>");

  CorrelateOpts cor;
  auto* correlate = app.add_subcommand("correlate", "Correlate spectra with random-graph models over time");
  correlate->add_option("input", cor.in, "Edge-list file")->required();
  correlate->add_option("--model", cor.models, "Model spec or range, e.g. sbm:k=2..6")->required();
  correlate->add_option("--reps", cor.reps, "Model instances per spec")->check(kAtLeastOne)->capture_default_str();
  correlate->add_option("-o,--out", cor.out, "Output CSV")->capture_default_str();

  DecomposeOpts dcm;
  auto* decompose = app.add_subcommand("decompose", "Extract frequency patterns and their sub-networks");
  decompose->add_option("input", dcm.in, "Edge-list file")->required();
  decompose->add_option("--k", dcm.k, "Number of patterns")->check(kAtLeastOne)->capture_default_str();
  decompose->add_option("--gamma", dcm.gamma, "Temporal smoothness weight")->check(CLI::NonNegativeNumber)->capture_default_str();
  decompose->add_option("--beta", dcm.beta, "Beta-divergence (0 = Itakura-Saito)")->capture_default_str();
  decompose->add_option("--alpha", dcm.alpha, "Reconstruction weight of lower coordinates")->check(CLI::NonNegativeNumber)->capture_default_str();
  decompose->add_option("--max-iters", dcm.max_iters, "NMF iteration cap")->check(kAtLeastOne)->capture_default_str();
  decompose->add_option("--tol", dcm.tol, "Relative decrease stopping threshold")->check(CLI::NonNegativeNumber)->capture_default_str();
  decompose->add_option("--edge-budget", dcm.edge_budget, "Edges per reconstructed step (one value or one per step)")
      ->delimiter(',');
  decompose->add_option("-o,--out", dcm.out, "Output directory")->required();

  IngestOpts ing;
  auto* ingest = app.add_subcommand("ingest", "Aggregate a contact log into a temporal network");
  ingest->add_option("input", ing.in, "Contact log (t i j [Ci Cj])")->required();
  ingest->add_option("--window", ing.window, "Seconds per snapshot")->check(CLI::PositiveNumber)->capture_default_str();
  ingest->add_option("--t-start", ing.t_start, "Start of the analysed span");
  ingest->add_option("--t-end", ing.t_end, "End of the analysed span (exclusive)");
  ingest->add_flag("--lenient", ing.lenient, "Skip malformed lines instead of failing");
  ingest->add_option("-o,--out", ing.out, "Output edge list")->capture_default_str();

  RoundtripOpts rt;
  auto* roundtrip = app.add_subcommand("roundtrip", "Transform and inverse-transform every snapshot");
  roundtrip->add_option("input", rt.in, "Edge-list file")->required();
  roundtrip->add_option("--alpha", rt.alpha, "Reconstruction weight of lower coordinates")->capture_default_str();
  roundtrip->add_option("--signals-out", rt.signals_out, "Also write the signals (directory for csv, file for bin)");
  roundtrip->add_option("-o,--out", rt.out, "Per-step report CSV")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (!replay_path.empty()) {
    if (app.get_subcommands().empty()) return replay(replay_path, depth);
    throw CliError(kExitUsage, "--replay takes no subcommand");
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitUsage;
  }

  check(netsig_set_threads(g.threads));
  Run run;
  run.manifest["tool"] = "netsig";
  run.manifest["version"] = netsig_version();
  run.manifest["command"] = app.get_subcommands().front()->get_name();
  run.manifest["argv"] = args;
  run.manifest["seed"] = g.seed;
  run.manifest["threads"] = g.threads;
  run.manifest["format"] = g.format;
  run.manifest["inputs"] = json::array();
  run.manifest["outputs"] = json::array();

  fs::path primary;
  bool mismatch = false;
  if (generate->parsed()) primary = cmd_generate(gen, g, run);
  else if (analyze->parsed()) primary = cmd_analyze(ana, g, run);
  else if (correlate->parsed()) primary = cmd_correlate(cor, g, run);
  else if (decompose->parsed()) primary = cmd_decompose(dcm, g, run);
  else if (ingest->parsed()) primary = cmd_ingest(ing, g, run);
  else primary = cmd_roundtrip(rt, g, run, mismatch);

  write_atomic(manifest_path(g, primary), run.manifest.dump(2) + "\n");
  return mismatch ? kExitMismatch : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run_cli(std::move(args), 0);
  } catch (const CliError& e) {
    std::cerr << "netsig: " << e.what() << '\n';
    return e.code;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "netsig: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "netsig: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
