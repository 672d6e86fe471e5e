#include "netsig/ingest.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include "netsig/error.hpp"

namespace netsig {
namespace {

bool parse_int(const std::string& s, std::int64_t& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

void report(bool lenient, std::vector<std::string>* warnings, const std::string& source, std::size_t line,
            const std::string& what) {
  if (!lenient) throw ParseError(source, line, what);
  if (warnings) warnings->push_back(source + ":" + std::to_string(line) + ": " + what + " (skipped)");
}

}  // namespace

std::vector<ContactRecord> parse_contacts(std::istream& in, const std::string& source, bool lenient,
                                          std::vector<std::string>* warnings) {
  std::vector<ContactRecord> out;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    std::istringstream fields(text);
    std::vector<std::string> tok;
    for (std::string f; fields >> f;) tok.push_back(f);
    if (tok.empty() || tok.front().starts_with('#')) continue;
    if (tok.size() != 3 && tok.size() != 5) {
      report(lenient, warnings, source, line_no, "expected `t i j [Ci Cj]`, got " + std::to_string(tok.size()) + " fields");
      continue;
    }
    ContactRecord r;
    if (!parse_int(tok[0], r.timestamp) || !parse_int(tok[1], r.id_a) || !parse_int(tok[2], r.id_b)) {
      report(lenient, warnings, source, line_no, "non-integer timestamp or id");
      continue;
    }
    if (r.timestamp < 0) {
      report(lenient, warnings, source, line_no, "negative timestamp");
      continue;
    }
    if (r.id_a == r.id_b) {
      report(lenient, warnings, source, line_no, "contact of a participant with itself");
      continue;
    }
    if (tok.size() == 5) {
      r.class_a = tok[3];
      r.class_b = tok[4];
    }
    out.push_back(std::move(r));
  }
  if (in.bad()) throw IoError("read failure on " + source);
  return out;
}

std::map<std::int64_t, std::size_t> build_id_map(const std::vector<ContactRecord>& records) {
  std::set<std::int64_t> ids;
  for (const auto& r : records) {
    ids.insert(r.id_a);
    ids.insert(r.id_b);
  }
  std::map<std::int64_t, std::size_t> out;
  for (std::int64_t id : ids) out.emplace(id, out.size());
  return out;
}

TemporalNetwork aggregate_windows(const std::vector<ContactRecord>& records, const AggregationConfig& cfg,
                                  bool lenient, std::vector<std::string>* warnings) {
  if (cfg.window <= 0) throw InvalidArgument("aggregation window must be > 0");
  if (cfg.t_start >= cfg.t_end) throw InvalidArgument("t_start must be < t_end");
  if (cfg.id_map.empty()) throw InvalidArgument("participant id map is empty");
  const std::size_t n = cfg.id_map.size();
  for (const auto& [id, v] : cfg.id_map)
    if (v >= n) throw InvalidArgument("id map vertex indices must be 0..n-1");

  const auto span = cfg.t_end - cfg.t_start;
  const auto t_len = static_cast<std::size_t>((span + cfg.window - 1) / cfg.window);
  std::vector<std::vector<std::uint8_t>> adj(t_len, std::vector<std::uint8_t>(n * n, 0));

  for (std::size_t idx = 0; idx < records.size(); ++idx) {
    const auto& r = records[idx];
    if (r.timestamp < cfg.t_start || r.timestamp >= cfg.t_end) continue;
    auto a = cfg.id_map.find(r.id_a);
    auto b = cfg.id_map.find(r.id_b);
    if (a == cfg.id_map.end() || b == cfg.id_map.end()) {
      const std::string what = "record " + std::to_string(idx) + " references an id outside the id map";
      if (!lenient) throw InvalidArgument(what);
      if (warnings) warnings->push_back(what + " (skipped)");
      continue;
    }
    const auto t = static_cast<std::size_t>((r.timestamp - cfg.t_start) / cfg.window);
    adj[t][a->second * n + b->second] = 1;
    adj[t][b->second * n + a->second] = 1;
  }

  std::vector<StaticGraph> snapshots;
  snapshots.reserve(t_len);
  for (auto& m : adj) snapshots.push_back(StaticGraph::from_adjacency(n, std::move(m)));
  return TemporalNetwork(std::move(snapshots));
}

}  // namespace netsig
