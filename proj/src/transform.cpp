#include "netsig/transform.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <tuple>

#include "netsig/error.hpp"
#include "netsig/parallel.hpp"
#include "netsig/rng.hpp"

namespace netsig {
namespace {

constexpr std::uint64_t kLayoutSeed = 0x9E3779B97F4A7C15ULL;

std::vector<std::vector<std::size_t>> connected_components(const StaticGraph& g) {
  const std::size_t n = g.n();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp{s};
    seen[s] = true;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      const std::size_t u = comp[head];
      for (std::size_t v = 0; v < n; ++v) {
        if (g.has_edge(u, v) && !seen[v]) {
          seen[v] = true;
          comp.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

// Local indices of a component sorted by angle in the plane of the second
// and third Laplacian eigenvectors; a ring maps onto a circle.
std::vector<std::size_t> angular_order(const std::vector<std::vector<std::size_t>>& nbrs,
                                       const std::vector<std::size_t>& ids) {
  const auto s = static_cast<Eigen::Index>(ids.size());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(s, s);
  for (Eigen::Index a = 0; a < s; ++a) {
    lap(a, a) = static_cast<double>(nbrs[static_cast<std::size_t>(a)].size());
    for (std::size_t b : nbrs[static_cast<std::size_t>(a)]) lap(a, static_cast<Eigen::Index>(b)) = -1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success) throw NumericFailure(0, "Laplacian eigendecomposition failed");
  const auto& vec = solver.eigenvectors();

  // Quantized so that rounding noise cannot reorder near-ties.
  std::vector<long long> key(ids.size());
  for (Eigen::Index a = 0; a < s; ++a)
    key[static_cast<std::size_t>(a)] = std::llround(std::atan2(vec(a, 2), vec(a, 1)) * 1e9);
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::tie(key[a], ids[a]) < std::tie(key[b], ids[b]); });
  return order;
}

// Circular arrangement maximizing the number of edges whose endpoints sit at
// most kWindow positions apart, by simulated annealing over vertex swaps and
// segment reversals.
class CircularLayout {
public:
  static constexpr std::size_t kWindow = 2;

  CircularLayout(const std::vector<std::vector<std::size_t>>& nbrs, std::vector<std::size_t> order)
      : nbrs_(nbrs), order_(std::move(order)), pos_(order_.size()) {
    for (std::size_t p = 0; p < order_.size(); ++p) pos_[order_[p]] = p;
  }

  void anneal(std::uint64_t seed) {
    const std::size_t m = order_.size();
    constexpr std::size_t kStages = 100;
    constexpr double kHot = 1.0, kCold = 0.02;
    const std::size_t per_stage = 20 * m * m / kStages;
    Rng rng(seed);
    for (std::size_t stage = 0; stage < kStages; ++stage) {
      const double temp = kHot * std::pow(kCold / kHot, static_cast<double>(stage) / (kStages - 1));
      const double keep_worse = std::exp(-1.0 / temp);
      for (std::size_t it = 0; it < per_stage; ++it) {
        if (rng.uniform() < 0.5) {
          const std::size_t a = rng.below(m), b = rng.below(m);
          if (a == b) continue;
          const long delta = swap_delta(a, b);
          if (accept(delta, keep_worse, rng)) apply_swap(a, b);
        } else {
          const std::size_t a = rng.below(m), len = 2 + rng.below(m / 2 - 1);
          const long delta = reversal_delta(a, len);
          if (accept(delta, keep_worse, rng)) apply_reversal(a, len);
        }
      }
    }
  }

  std::vector<std::size_t> order() const { return order_; }

  long score() const {
    long total = 0;
    for (std::size_t v = 0; v < nbrs_.size(); ++v)
      for (std::size_t u : nbrs_[v])
        if (u > v) total += close(pos_[v], pos_[u]);
    return total;
  }

private:
  bool close(std::size_t p, std::size_t q) const {
    const std::size_t m = order_.size();
    const std::size_t d = p > q ? p - q : q - p;
    return std::min(d, m - d) <= kWindow;
  }

  static bool accept(long delta, double keep_worse, Rng& rng) {
    return delta >= 0 || rng.uniform() < std::pow(keep_worse, static_cast<double>(-delta));
  }

  long swap_delta(std::size_t a, std::size_t b) const {
    const std::size_t va = order_[a], vb = order_[b];
    long delta = 0;
    for (std::size_t u : nbrs_[va])
      if (u != vb) delta += close(b, pos_[u]) - close(a, pos_[u]);
    for (std::size_t u : nbrs_[vb])
      if (u != va) delta += close(a, pos_[u]) - close(b, pos_[u]);
    return delta;
  }

  void apply_swap(std::size_t a, std::size_t b) {
    std::swap(order_[a], order_[b]);
    pos_[order_[a]] = a;
    pos_[order_[b]] = b;
  }

  // Reversing the circular segment [a, a + len) keeps distances inside it,
  // and only its first and last kWindow slots can be close to outside slots.
  long reversal_delta(std::size_t a, std::size_t len) const {
    const std::size_t m = order_.size();
    long delta = 0;
    for (std::size_t k = 0; k < len; ++k) {
      if (k == kWindow && len > 2 * kWindow) k = len - kWindow;
      const std::size_t p = (a + k) % m;
      const std::size_t q = (a + len - 1 - k) % m;
      for (std::size_t u : nbrs_[order_[p]]) {
        if ((pos_[u] + m - a) % m < len) continue;
        delta += close(q, pos_[u]) - close(p, pos_[u]);
      }
    }
    return delta;
  }

  void apply_reversal(std::size_t a, std::size_t len) {
    const std::size_t m = order_.size();
    for (std::size_t i = 0, j = len - 1; i < j; ++i, --j) apply_swap((a + i) % m, (a + j) % m);
  }

  const std::vector<std::vector<std::size_t>>& nbrs_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> pos_;
};

// Circular seriation of one connected component (ids sorted ascending),
// returned as original ids starting at the smallest id, in the direction
// whose second entry is smaller.
// Opens the cycle where the linear arrangement cost sum |pos(a) - pos(b)| over
// edges is smallest; ties go to the lexicographically smallest id sequence.
std::vector<std::size_t> cut_cycle(const std::vector<std::vector<std::size_t>>& nbrs, const std::vector<std::size_t>& cyc,
                                   const std::vector<std::size_t>& ids) {
  const std::size_t m = cyc.size();
  std::vector<std::size_t> best, cand(m), pos(m);
  long best_cost = std::numeric_limits<long>::max();
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t r = 0; r < m; ++r) pos[cyc[(s + r) % m]] = r;
    long cost = 0;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b : nbrs[a])
        if (a < b) cost += std::labs(static_cast<long>(pos[a]) - static_cast<long>(pos[b]));
    if (cost > best_cost) continue;
    // The reversed sequence has the same cost.
    for (int dir = 0; dir < 2; ++dir) {
      for (std::size_t r = 0; r < m; ++r) cand[r] = ids[cyc[dir == 0 ? (s + r) % m : (s + m - 1 - r) % m]];
      if (cost < best_cost || cand < best) {
        best = cand;
        best_cost = cost;
      }
    }
  }
  return best;
}

std::vector<std::size_t> seriate_component(const StaticGraph& g, const std::vector<std::size_t>& ids) {
  const std::size_t m = ids.size();
  std::vector<std::vector<std::size_t>> nbrs(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (a != b && g.has_edge(ids[a], ids[b])) nbrs[a].push_back(b);

  std::vector<std::size_t> cyc(m);
  std::iota(cyc.begin(), cyc.end(), std::size_t{0});
  if (m >= 4) {
    // The annealed layout replaces the angular one only if strictly better.
    CircularLayout layout(nbrs, angular_order(nbrs, ids));
    const long initial = layout.score();
    cyc = layout.order();
    layout.anneal(kLayoutSeed);
    if (layout.score() > initial) cyc = layout.order();
  }
  return cut_cycle(nbrs, cyc, ids);
}

}  // namespace

DistanceMatrix build_distance_matrix(const StaticGraph& g) {
  const std::size_t n = g.n();
  if (n < 2) throw InvalidArgument("distance matrix needs n >= 2");
  const double w = 1.0 + 1.0 / static_cast<double>(n);
  DistanceMatrix out{n, Eigen::MatrixXd(n, n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.delta(i, j) = i == j ? 0.0 : (g.has_edge(i, j) ? 1.0 : w);
  return out;
}

SignalCollection cmds(const DistanceMatrix& delta) {
  const auto n = static_cast<Eigen::Index>(delta.n);
  // B = -1/2 J (D o D) J, expanded with row and grand means.
  const Eigen::MatrixXd sq = delta.delta.array().square().matrix();
  const Eigen::VectorXd row_mean = sq.rowwise().mean();
  const double grand = row_mean.mean();
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) b(i, j) = -0.5 * (sq(i, j) - row_mean(i) - row_mean(j) + grand);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  if (solver.info() != Eigen::Success) throw NumericFailure(0, "CMDS eigendecomposition failed");
  const Eigen::VectorXd& lambda = solver.eigenvalues();  // ascending
  const double lambda_max = lambda(n - 1);

  std::vector<Eigen::Index> kept;
  double dropped = 0.0;
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    const bool keep = lambda_max > 0.0 && lambda(r) > kEigenRelTol * lambda_max &&
                      static_cast<Eigen::Index>(kept.size()) < n - 1;
    if (keep)
      kept.push_back(r);
    else
      dropped += std::abs(lambda(r));
  }

  SignalCollection out;
  out.n = delta.n;
  out.c_len = kept.size();
  out.coords.resize(n, static_cast<Eigen::Index>(kept.size()));
  out.eigenvalues.resize(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    Eigen::VectorXd v = solver.eigenvectors().col(kept[c]);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    out.eigenvalues(col) = lambda(kept[c]);
    out.coords.col(col) = v * std::sqrt(lambda(kept[c]));
  }
  out.energies = out.coords.colwise().squaredNorm().transpose();
  out.ordering.resize(delta.n);
  std::iota(out.ordering.begin(), out.ordering.end(), std::size_t{0});
  out.dropped_eigen_mass = dropped;
  return out;
}

std::vector<std::size_t> vertex_ordering(const StaticGraph& g) {
  auto comps = connected_components(g);
  std::vector<std::size_t> isolated;
  std::vector<std::vector<std::size_t>> groups;
  for (auto& c : comps) {
    if (c.size() == 1)
      isolated.push_back(c.front());
    else
      groups.push_back(std::move(c));
  }
  std::stable_sort(groups.begin(), groups.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  std::vector<std::size_t> order;
  order.reserve(g.n());
  for (const auto& ids : groups) {
    const auto part = seriate_component(g, ids);
    order.insert(order.end(), part.begin(), part.end());
  }
  std::sort(isolated.begin(), isolated.end());
  order.insert(order.end(), isolated.begin(), isolated.end());
  return order;
}

SignalCollection transform(const StaticGraph& g) {
  auto ordering = vertex_ordering(g);
  SignalCollection sig = cmds(build_distance_matrix(g.permuted(ordering)));
  sig.ordering = std::move(ordering);
  return sig;
}

void pad_components(SignalCollection& sig, std::size_t c_len) {
  if (c_len < sig.c_len) throw InvalidArgument("cannot pad to fewer components");
  if (c_len == sig.c_len) return;
  const auto old = static_cast<Eigen::Index>(sig.c_len);
  const auto c = static_cast<Eigen::Index>(c_len);
  const auto n = static_cast<Eigen::Index>(sig.n);
  Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(n, c);
  coords.leftCols(old) = sig.coords;
  Eigen::VectorXd energies = Eigen::VectorXd::Zero(c);
  energies.head(old) = sig.energies;
  Eigen::VectorXd eigenvalues = Eigen::VectorXd::Zero(c);
  eigenvalues.head(old) = sig.eigenvalues;
  sig.coords = std::move(coords);
  sig.energies = std::move(energies);
  sig.eigenvalues = std::move(eigenvalues);
  sig.c_len = c_len;
}

TemporalSignals transform_temporal(const TemporalNetwork& net) {
  TemporalSignals out;
  out.n = net.n();
  out.steps.resize(net.t_len());
  parallel_for(net.t_len(), [&](std::size_t t) { out.steps[t] = transform(net.at(t)); });
  for (const auto& s : out.steps) out.c_len = std::max(out.c_len, s.c_len);
  for (auto& s : out.steps) pad_components(s, out.c_len);
  return out;
}

Eigen::VectorXd normalization_factors(const Eigen::VectorXd& ref_energies, const Eigen::MatrixXd& x_tilde) {
  if (ref_energies.size() != x_tilde.cols()) throw InvalidArgument("component counts differ");
  Eigen::VectorXd out(ref_energies.size());
  for (Eigen::Index c = 0; c < ref_energies.size(); ++c) {
    const double num = ref_energies(c);
    const double den = x_tilde.col(c).squaredNorm();
    if (den == 0.0) {
      if (num != 0.0) throw DegenerateComponent(static_cast<std::size_t>(c));
      out(c) = 1.0;
    } else {
      out(c) = std::sqrt(num / den);
    }
  }
  return out;
}

Eigen::VectorXd normalization_factors(const SignalCollection& ref, const Eigen::MatrixXd& x_tilde) {
  if (ref.coords.rows() != x_tilde.rows()) throw InvalidArgument("vertex counts differ");
  return normalization_factors(ref.energies, x_tilde);
}

Eigen::MatrixXd weighted_distances(const Eigen::MatrixXd& x, const Eigen::VectorXd& energies, double alpha) {
  const Eigen::Index c = x.cols();
  if (energies.size() != c) throw InvalidArgument("energy vector length differs from component count");
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be >= 0");
  if ((energies.array() < 0.0).any()) throw InvalidArgument("energies must be nonnegative");
  if (!(energies.array() > 0.0).any()) throw InvalidArgument("all component energies are zero");

  Eigen::VectorXd weight = energies.array().pow(alpha).matrix();
  weight *= static_cast<double>(c) / weight.sum();

  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < c; ++k) {
        const double diff = x(i, k) - x(j, k);
        acc += weight(k) * diff * diff;
      }
      d(i, j) = d(j, i) = std::sqrt(acc);
    }
  }
  return d;
}

StaticGraph inverse_transform(const Eigen::MatrixXd& x_tilde, const Eigen::VectorXd& ref_energies,
                              std::span<const std::size_t> ordering, double alpha, std::size_t m_edges) {
  const std::size_t n = ordering.size();
  if (static_cast<std::size_t>(x_tilde.rows()) != n) throw InvalidArgument("signal rows differ from ordering length");
  if (m_edges > n * (n - 1) / 2)
    throw InvalidArgument("edge budget " + std::to_string(m_edges) + " exceeds n(n-1)/2");
  if (m_edges == 0) return StaticGraph(n);

  const Eigen::VectorXd factors = normalization_factors(ref_energies, x_tilde);
  const Eigen::MatrixXd x = x_tilde * factors.asDiagonal();
  const Eigen::MatrixXd d = weighted_distances(x, ref_energies, alpha);

  struct Pair {
    double dist;
    std::size_t a, b;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const auto [a, b] = std::minmax(ordering[p], ordering[q]);
      pairs.push_back({d(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)), a, b});
    }
  }
  auto less = [](const Pair& l, const Pair& r) { return std::tie(l.dist, l.a, l.b) < std::tie(r.dist, r.a, r.b); };
  std::partial_sort(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(m_edges), pairs.end(), less);

  std::vector<Edge> edges;
  edges.reserve(m_edges);
  for (std::size_t e = 0; e < m_edges; ++e) edges.emplace_back(pairs[e].a, pairs[e].b);
  return StaticGraph(n, edges);
}

TemporalNetwork inverse_transform_temporal(const TemporalSignals& sig, const TemporalSignals& refs, double alpha,
                                           std::span<const std::size_t> edge_counts) {
  if (sig.steps.size() != refs.steps.size() || sig.steps.size() != edge_counts.size())
    throw InvalidArgument("time lengths of signals, references and edge counts differ");
  if (sig.steps.empty()) throw InvalidArgument("no time steps to invert");
  std::vector<StaticGraph> snapshots(sig.steps.size(), StaticGraph(sig.n));
  parallel_for(sig.steps.size(), [&](std::size_t t) {
    snapshots[t] = inverse_transform(sig.steps[t].coords, refs.steps[t].energies, refs.steps[t].ordering, alpha,
                                     edge_counts[t]);
  });
  return TemporalNetwork(std::move(snapshots));
}

}  // namespace netsig
