#include "netsig/generators.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>

#include "netsig/error.hpp"
#include "netsig/rng.hpp"

namespace netsig {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw InvalidArgument(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
}

void check_ring_k(std::size_t k, std::size_t n) {
  if (k < 2 || k % 2 != 0) throw InvalidArgument("ring neighbor count k must be even and >= 2, got " + std::to_string(k));
  if (k >= n) throw InvalidArgument("ring neighbor count k = " + std::to_string(k) + " must be < n = " + std::to_string(n));
}

void check_communities(std::size_t n_com, std::size_t n) {
  if (n_com < 1) throw InvalidArgument("community count must be >= 1");
  if (n_com > n) throw InvalidArgument("community count exceeds vertex count");
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::string_view spec) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InvalidArgument("bad number '" + std::string(s) + "' in model spec '" + std::string(spec) + "'");
  return v;
}

std::size_t parse_size(std::string_view s, std::string_view spec) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InvalidArgument("bad integer '" + std::string(s) + "' in model spec '" + std::string(spec) + "'");
  return v;
}

struct ParsedSpec {
  std::string name;
  std::map<std::string, std::string, std::less<>> params;
};

ParsedSpec split_spec(std::string_view text) {
  ParsedSpec out;
  const auto colon = text.find(':');
  out.name = std::string(text.substr(0, colon));
  if (colon == std::string_view::npos) return out;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw InvalidArgument("expected key=value in model spec '" + std::string(text) + "'");
    if (!out.params.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1))).second)
      throw InvalidArgument("duplicate key in model spec '" + std::string(text) + "'");
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

class ParamReader {
public:
  ParamReader(const ParsedSpec& p, std::string_view text) : p_(p), text_(text) {}

  double real(std::string_view key, std::optional<double> fallback = std::nullopt) {
    used_.push_back(std::string(key));
    auto it = p_.params.find(key);
    if (it == p_.params.end()) return require(key, fallback);
    return parse_double(it->second, text_);
  }

  std::size_t integer(std::string_view key, std::optional<std::size_t> fallback = std::nullopt) {
    used_.push_back(std::string(key));
    auto it = p_.params.find(key);
    if (it == p_.params.end()) return require(key, fallback);
    return parse_size(it->second, text_);
  }

  void finish() const {
    for (const auto& [k, v] : p_.params)
      if (std::find(used_.begin(), used_.end(), k) == used_.end())
        throw InvalidArgument("unknown key '" + k + "' in model spec '" + std::string(text_) + "'");
  }

private:
  template <class T>
  T require(std::string_view key, std::optional<T> fallback) {
    if (!fallback)
      throw InvalidArgument("missing key '" + std::string(key) + "' in model spec '" + std::string(text_) + "'");
    return *fallback;
  }

  const ParsedSpec& p_;
  std::string_view text_;
  std::vector<std::string> used_;
};

ModelSpec build_spec(const ParsedSpec& parsed, std::string_view text) {
  ParamReader r(parsed, text);
  ModelSpec spec;
  if (parsed.name == "er") {
    spec = ErdosRenyi{r.real("p")};
  } else if (parsed.name == "ring") {
    spec = RingLattice{r.integer("k")};
  } else if (parsed.name == "nring") {
    spec = NoisedRing{r.integer("k"), r.real("p")};
  } else if (parsed.name == "sbm") {
    Sbm s;
    s.n_com = r.integer("k");
    s.p_w = r.real("pw", s.p_w);
    s.p_b = r.real("pb", s.p_b);
    spec = s;
  } else if (parsed.name == "ringcom") {
    RingCommunities s;
    s.k = r.integer("k");
    s.n_com = r.integer("c");
    s.p_w = r.real("pw", s.p_w);
    spec = s;
  } else {
    throw InvalidArgument("unknown model '" + parsed.name + "' in spec '" + std::string(text) + "'");
  }
  r.finish();
  return spec;
}

std::vector<std::uint8_t> empty_adjacency(std::size_t n) { return std::vector<std::uint8_t>(n * n, 0); }

void link(std::vector<std::uint8_t>& adj, std::size_t n, std::size_t i, std::size_t j) {
  adj[i * n + j] = 1;
  adj[j * n + i] = 1;
}

void add_ring(std::vector<std::uint8_t>& adj, std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 1; s <= k / 2; ++s) link(adj, n, i, (i + s) % n);
}

void add_blocks(std::vector<std::uint8_t>& adj, std::size_t n, std::size_t n_com, double p_w, double p_b,
                Rng& rng) {
  const auto block = block_assignment(n, n_com);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(block[i] == block[j] ? p_w : p_b)) link(adj, n, i, j);
}

}  // namespace

std::vector<std::size_t> block_assignment(std::size_t n, std::size_t n_com) {
  check_communities(n_com, n);
  const std::size_t size = n / n_com;
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::min(i / size, n_com - 1);
  return out;
}

ModelSpec parse_model_spec(std::string_view text) { return build_spec(split_spec(text), text); }

std::vector<ModelSpec> parse_model_spec_range(std::string_view text) {
  ParsedSpec parsed = split_spec(text);
  std::string range_key;
  for (const auto& [k, v] : parsed.params) {
    if (v.find("..") == std::string::npos) continue;
    if (!range_key.empty()) throw InvalidArgument("only one ranged key allowed in '" + std::string(text) + "'");
    range_key = k;
  }
  if (range_key.empty()) return {build_spec(parsed, text)};

  const std::string value = parsed.params[range_key];
  const auto dots = value.find("..");
  const std::size_t lo = parse_size(std::string_view(value).substr(0, dots), text);
  const auto slash = value.find('/', dots);
  const std::size_t hi = parse_size(std::string_view(value).substr(dots + 2, slash - dots - 2), text);
  const std::size_t step = slash == std::string::npos ? 1 : parse_size(std::string_view(value).substr(slash + 1), text);
  if (lo > hi) throw InvalidArgument("empty range in model spec '" + std::string(text) + "'");
  if (step == 0) throw InvalidArgument("zero range step in model spec '" + std::string(text) + "'");
  std::vector<ModelSpec> out;
  for (std::size_t v = lo; v <= hi; v += step) {
    parsed.params[range_key] = std::to_string(v);
    out.push_back(build_spec(parsed, text));
  }
  return out;
}

std::string format_model_spec(const ModelSpec& spec) {
  return std::visit(
      overloaded{
          [](const ErdosRenyi& s) { return "er:p=" + format_double(s.p); },
          [](const RingLattice& s) { return "ring:k=" + std::to_string(s.k); },
          [](const NoisedRing& s) { return "nring:k=" + std::to_string(s.k) + ",p=" + format_double(s.p_rewire); },
          [](const Sbm& s) {
            return "sbm:k=" + std::to_string(s.n_com) + ",pw=" + format_double(s.p_w) + ",pb=" + format_double(s.p_b);
          },
          [](const RingCommunities& s) {
            return "ringcom:k=" + std::to_string(s.k) + ",c=" + std::to_string(s.n_com) + ",pw=" + format_double(s.p_w);
          },
      },
      spec);
}

void validate(const ModelSpec& spec, std::size_t n) {
  if (n < 1) throw InvalidArgument("vertex count must be >= 1");
  std::visit(overloaded{
                 [](const ErdosRenyi& s) { check_probability(s.p, "p"); },
                 [n](const RingLattice& s) { check_ring_k(s.k, n); },
                 [n](const NoisedRing& s) {
                   check_ring_k(s.k, n);
                   check_probability(s.p_rewire, "rewiring probability");
                 },
                 [n](const Sbm& s) {
                   check_communities(s.n_com, n);
                   check_probability(s.p_w, "p_w");
                   check_probability(s.p_b, "p_b");
                 },
                 [n](const RingCommunities& s) {
                   check_ring_k(s.k, n);
                   check_communities(s.n_com, n);
                   check_probability(s.p_w, "p_w");
                 },
             },
             spec);
}

StaticGraph generate_static(const ModelSpec& spec, std::size_t n, std::uint64_t seed) {
  validate(spec, n);
  Rng rng(seed);
  auto adj = empty_adjacency(n);
  std::visit(overloaded{
                 [&](const ErdosRenyi& s) {
                   for (std::size_t i = 0; i < n; ++i)
                     for (std::size_t j = i + 1; j < n; ++j)
                       if (rng.bernoulli(s.p)) link(adj, n, i, j);
                 },
                 [&](const RingLattice& s) { add_ring(adj, n, s.k); },
                 [&](const NoisedRing& s) {
                   add_ring(adj, n, s.k);
                   for (std::size_t step = 1; step <= s.k / 2; ++step) {
                     for (std::size_t i = 0; i < n; ++i) {
                       const std::size_t j = (i + step) % n;
                       if (!adj[i * n + j] || !rng.bernoulli(s.p_rewire)) continue;
                       std::vector<std::size_t> free;
                       for (std::size_t u = 0; u < n; ++u)
                         if (u != i && !adj[i * n + u]) free.push_back(u);
                       if (free.empty()) continue;
                       const std::size_t u = free[rng.below(free.size())];
                       adj[i * n + j] = adj[j * n + i] = 0;
                       link(adj, n, i, u);
                     }
                   }
                 },
                 [&](const Sbm& s) { add_blocks(adj, n, s.n_com, s.p_w, s.p_b, rng); },
                 [&](const RingCommunities& s) {
                   add_ring(adj, n, s.k);
                   add_blocks(adj, n, s.n_com, s.p_w, 0.0, rng);
                 },
             },
             spec);
  return StaticGraph::from_adjacency(n, std::move(adj));
}

TtnConfig TtnConfig::default_schedule(std::uint64_t seed) {
  TtnConfig cfg;
  cfg.schedule = {ErdosRenyi{0.4}, Sbm{3, 0.8, 0.05}, RingLattice{4}, RingCommunities{4, 3, 0.8}};
  cfg.seed = seed;
  return cfg;
}

namespace {

void validate_ttn(const TtnConfig& cfg) {
  if (cfg.schedule.empty()) throw InvalidArgument("TTN schedule is empty");
  if (cfg.period_len == 0) throw InvalidArgument("TTN period length must be >= 1");
  check_probability(cfg.p_keep_in, "p_keep_in");
  check_probability(cfg.p_gain_in, "p_gain_in");
  check_probability(cfg.p_keep_out, "p_keep_out");
  check_probability(cfg.p_gain_out, "p_gain_out");
  for (const auto& spec : cfg.schedule) validate(spec, cfg.n);
}

constexpr std::uint64_t kDynamicsStream = 0xD1A9;

}  // namespace

StaticGraph ttn_prescribed(const TtnConfig& cfg, std::size_t period) {
  validate_ttn(cfg);
  if (period >= cfg.schedule.size()) throw InvalidArgument("period index out of range");
  return generate_static(cfg.schedule[period], cfg.n, derive_seed(cfg.seed, period));
}

TemporalNetwork generate_ttn(const TtnConfig& cfg) {
  validate_ttn(cfg);
  const std::size_t n = cfg.n;
  Rng rng(derive_seed(cfg.seed, kDynamicsStream));
  auto current = empty_adjacency(n);
  std::vector<StaticGraph> snapshots;
  snapshots.reserve(cfg.period_len * cfg.schedule.size());

  for (std::size_t period = 0; period < cfg.schedule.size(); ++period) {
    const StaticGraph prescribed = ttn_prescribed(cfg, period);
    for (std::size_t step = 0; step < cfg.period_len; ++step) {
      auto next = empty_adjacency(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const bool was = current[i * n + j] != 0;
          const bool in = prescribed.has_edge(i, j);
          const double p = in ? (was ? cfg.p_keep_in : cfg.p_gain_in) : (was ? cfg.p_keep_out : cfg.p_gain_out);
          if (rng.bernoulli(p)) link(next, n, i, j);
        }
      }
      current = next;
      snapshots.push_back(StaticGraph::from_adjacency(n, std::move(next)));
    }
  }
  return TemporalNetwork(std::move(snapshots));
}

}  // namespace netsig
