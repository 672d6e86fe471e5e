#include "netsig/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "netsig/error.hpp"

namespace netsig {
namespace fs = std::filesystem;
namespace {

std::string num(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

bool next_data_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

template <class T>
std::vector<T> parse_fields(const std::string& line, const std::string& source, std::size_t line_no) {
  std::vector<T> out;
  std::istringstream in(line);
  for (std::string tok; in >> tok;) {
    T v{};
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
      throw ParseError(source, line_no, "bad numeric field '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

// Little-endian encoding helpers.
void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class BinaryReader {
public:
  BinaryReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  std::uint64_t u64() { return bytes(8); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(bytes(4)); }
  double f64() { return std::bit_cast<double>(u64()); }

  void expect_magic() {
    std::array<char, 8> m{};
    in_.read(m.data(), 8);
    if (!in_ || std::memcmp(m.data(), kMagic, 8) != 0) throw ParseError(source_, 0, "not a netsig binary container");
  }

  static constexpr char kMagic[9] = "NETSIGB1";

private:
  std::uint64_t bytes(int count) {
    std::array<unsigned char, 8> b{};
    in_.read(reinterpret_cast<char*>(b.data()), count);
    if (!in_) throw ParseError(source_, 0, "truncated binary container");
    std::uint64_t v = 0;
    for (int i = 0; i < count; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }

  std::istream& in_;
  std::string source_;
};

constexpr std::uint32_t kKindSignals = 1;
constexpr std::uint32_t kKindSpectra = 2;

void write_header(std::ostream& out, std::uint32_t kind, std::uint64_t d0, std::uint64_t d1, std::uint64_t d2,
                  std::uint64_t n) {
  out.write(BinaryReader::kMagic, 8);
  put_u32(out, kind);
  put_u32(out, 0);
  put_u64(out, d0);
  put_u64(out, d1);
  put_u64(out, d2);
  put_u64(out, n);
}

std::ifstream open_input(const fs::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

void atomic_write(const fs::path& path, const std::function<void(std::ostream&)>& body, bool binary) {
  fs::path tmp = path;
  tmp += ".tmp";
  std::error_code ec;
  try {
    std::ofstream out(tmp, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    body(out);
    out.flush();
    if (!out) throw IoError("write failure on '" + tmp.string() + "'");
  } catch (...) {
    fs::remove(tmp, ec);
    throw;
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

void write_network(std::ostream& out, const TemporalNetwork& net) {
  out << net.n() << ' ' << net.t_len() << '\n';
  for (std::size_t t = 0; t < net.t_len(); ++t)
    for (const auto& [i, j] : net.at(t).edges()) out << t << ' ' << i << ' ' << j << '\n';
}

TemporalNetwork read_network(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_data_line(in, line, line_no)) throw ParseError(source, line_no, "missing `N T` header");
  const auto header = parse_fields<std::size_t>(line, source, line_no);
  if (header.size() != 2) throw ParseError(source, line_no, "header must be `N T`");
  const std::size_t n = header[0], t_len = header[1];
  if (n < 1 || t_len < 1) throw ParseError(source, line_no, "N and T must be >= 1");

  std::vector<std::vector<Edge>> edges(t_len);
  while (next_data_line(in, line, line_no)) {
    const auto f = parse_fields<std::size_t>(line, source, line_no);
    if (f.size() != 3) throw ParseError(source, line_no, "expected `t i j`");
    if (f[0] >= t_len || f[1] >= n || f[2] >= n) throw ParseError(source, line_no, "index out of range");
    if (f[1] == f[2]) throw ParseError(source, line_no, "self-loop");
    edges[f[0]].emplace_back(f[1], f[2]);
  }
  if (in.bad()) throw IoError("read failure on " + source);
  std::vector<StaticGraph> snapshots;
  snapshots.reserve(t_len);
  for (const auto& e : edges) snapshots.emplace_back(n, e);
  return TemporalNetwork(std::move(snapshots));
}

void write_network_file(const fs::path& path, const TemporalNetwork& net) {
  atomic_write(path, [&](std::ostream& out) { write_network(out, net); });
}

TemporalNetwork read_network_file(const fs::path& path) {
  auto in = open_input(path);
  return read_network(in, path.string());
}

void write_signal_collection(std::ostream& out, const SignalCollection& sig) {
  out << sig.n << ' ' << sig.c_len << '\n';
  for (std::size_t p = 0; p < sig.ordering.size(); ++p) out << (p ? " " : "") << sig.ordering[p];
  out << '\n';
  for (Eigen::Index i = 0; i < sig.coords.rows(); ++i) {
    for (Eigen::Index c = 0; c < sig.coords.cols(); ++c) out << (c ? " " : "") << num(sig.coords(i, c));
    out << '\n';
  }
}

SignalCollection read_signal_collection(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_data_line(in, line, line_no)) throw ParseError(source, line_no, "missing `N C` header");
  const auto header = parse_fields<std::size_t>(line, source, line_no);
  if (header.size() != 2) throw ParseError(source, line_no, "header must be `N C`");
  SignalCollection sig;
  sig.n = header[0];
  sig.c_len = header[1];
  if (!next_data_line(in, line, line_no)) throw ParseError(source, line_no, "missing ordering line");
  sig.ordering = parse_fields<std::size_t>(line, source, line_no);
  if (sig.ordering.size() != sig.n) throw ParseError(source, line_no, "ordering length differs from N");
  sig.coords.resize(static_cast<Eigen::Index>(sig.n), static_cast<Eigen::Index>(sig.c_len));
  for (std::size_t i = 0; i < sig.n; ++i) {
    if (!next_data_line(in, line, line_no)) throw ParseError(source, line_no, "missing signal row");
    const auto row = parse_fields<double>(line, source, line_no);
    if (row.size() != sig.c_len) throw ParseError(source, line_no, "row length differs from C");
    for (std::size_t c = 0; c < sig.c_len; ++c)
      sig.coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[c];
  }
  sig.energies = sig.coords.colwise().squaredNorm().transpose();
  sig.eigenvalues = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sig.c_len));
  return sig;
}

void write_signals_binary(const fs::path& path, const TemporalSignals& sig) {
  atomic_write(
      path,
      [&](std::ostream& out) {
        write_header(out, kKindSignals, sig.n, sig.c_len, sig.steps.size(), sig.n);
        for (const auto& s : sig.steps)
          for (Eigen::Index i = 0; i < s.coords.rows(); ++i)
            for (Eigen::Index c = 0; c < s.coords.cols(); ++c) put_f64(out, s.coords(i, c));
        for (const auto& s : sig.steps)
          for (std::size_t v : s.ordering) put_u64(out, v);
      },
      true);
}

TemporalSignals read_signals_binary(const fs::path& path) {
  auto in = open_input(path, true);
  BinaryReader r(in, path.string());
  r.expect_magic();
  if (r.u32() != kKindSignals) throw ParseError(path.string(), 0, "container does not hold signals");
  r.u32();
  TemporalSignals sig;
  sig.n = r.u64();
  sig.c_len = r.u64();
  const std::uint64_t t_len = r.u64();
  r.u64();
  sig.steps.resize(t_len);
  const auto n = static_cast<Eigen::Index>(sig.n);
  const auto c = static_cast<Eigen::Index>(sig.c_len);
  for (auto& s : sig.steps) {
    s.n = sig.n;
    s.c_len = sig.c_len;
    s.coords.resize(n, c);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < c; ++k) s.coords(i, k) = r.f64();
    s.energies = s.coords.colwise().squaredNorm().transpose();
    s.eigenvalues = Eigen::VectorXd::Zero(c);
  }
  for (auto& s : sig.steps) {
    s.ordering.resize(sig.n);
    for (auto& v : s.ordering) v = r.u64();
  }
  return sig;
}

void write_spectra_binary(const fs::path& path, const TemporalSpectra& spec) {
  atomic_write(
      path,
      [&](std::ostream& out) {
        write_header(out, kKindSpectra, spec.c_len, spec.f_len, spec.t_len(), spec.n);
        for (const auto& s : spec.steps)
          for (Eigen::Index c = 0; c < s.coeffs.rows(); ++c)
            for (Eigen::Index f = 0; f < s.coeffs.cols(); ++f) {
              put_f64(out, s.coeffs(c, f).real());
              put_f64(out, s.coeffs(c, f).imag());
            }
      },
      true);
}

TemporalSpectra read_spectra_binary(const fs::path& path) {
  auto in = open_input(path, true);
  BinaryReader r(in, path.string());
  r.expect_magic();
  if (r.u32() != kKindSpectra) throw ParseError(path.string(), 0, "container does not hold spectra");
  r.u32();
  TemporalSpectra spec;
  spec.c_len = r.u64();
  spec.f_len = r.u64();
  const std::uint64_t t_len = r.u64();
  spec.n = r.u64();
  if (frequency_bins(spec.n) != spec.f_len) throw ParseError(path.string(), 0, "F inconsistent with N");
  spec.steps.resize(t_len);
  for (auto& s : spec.steps) {
    s.n = spec.n;
    s.c_len = spec.c_len;
    s.f_len = spec.f_len;
    s.coeffs.resize(static_cast<Eigen::Index>(spec.c_len), static_cast<Eigen::Index>(spec.f_len));
    for (Eigen::Index c = 0; c < s.coeffs.rows(); ++c)
      for (Eigen::Index f = 0; f < s.coeffs.cols(); ++f) {
        const double re = r.f64();
        const double im = r.f64();
        s.coeffs(c, f) = {re, im};
      }
  }
  return spec;
}

void write_signals_text_dir(const fs::path& dir, const TemporalSignals& sig) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "'");
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t t = 0; t < sig.steps.size(); ++t) {
    std::ostringstream name;
    name << "signals_t" << std::setw(5) << std::setfill('0') << t << ".txt";
    atomic_write(dir / name.str(), [&](std::ostream& out) { write_signal_collection(out, sig.steps[t]); });
    files.push_back(name.str());
  }
  const nlohmann::json manifest = {
      {"format", "netsig-signals-text"}, {"n", sig.n}, {"c", sig.c_len}, {"t", sig.steps.size()}, {"files", files}};
  atomic_write(dir / "manifest.json", [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });
}

TemporalSignals read_signals_text_dir(const fs::path& dir) {
  auto in = open_input(dir / "manifest.json");
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError((dir / "manifest.json").string(), 0, e.what());
  }
  TemporalSignals sig;
  sig.n = manifest.at("n").get<std::size_t>();
  sig.c_len = manifest.at("c").get<std::size_t>();
  for (const auto& name : manifest.at("files")) {
    const fs::path p = dir / name.get<std::string>();
    auto f = open_input(p);
    sig.steps.push_back(read_signal_collection(f, p.string()));
  }
  return sig;
}

void write_spectra_csv(std::ostream& out, const TemporalSpectra& spec) {
  out << "c,f,t,re,im,mag,energy,phase\n";
  for (std::size_t c = 0; c < spec.c_len; ++c)
    for (std::size_t f = 0; f < spec.f_len; ++f)
      for (std::size_t t = 0; t < spec.t_len(); ++t) {
        const auto z = spec.steps[t].coeffs(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(f));
        double phase = std::arg(z);
        if (phase <= -std::numbers::pi) phase = std::numbers::pi;
        out << c << ',' << f << ',' << t << ',' << num(z.real()) << ',' << num(z.imag()) << ',' << num(std::abs(z))
            << ',' << num(std::norm(z)) << ',' << num(phase) << '\n';
      }
}

}  // namespace netsig
