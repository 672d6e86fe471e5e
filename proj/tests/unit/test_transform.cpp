#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netsig/error.hpp"
#include "netsig/generators.hpp"
#include "netsig/spectral.hpp"
#include "netsig/transform.hpp"
#include "oracles.hpp"

using namespace netsig;

namespace {

double max_embedding_error(const SignalCollection& s, const DistanceMatrix& d) {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.n; ++i)
    for (std::size_t j = 0; j < s.n; ++j) {
      const double e = (s.coords.row(i) - s.coords.row(j)).norm();
      worst = std::max(worst, std::abs(e - d.delta(i, j)));
    }
  return worst;
}

Eigen::MatrixXd euclid(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd d(x.rows(), x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.rows(); ++j) d(i, j) = (x.row(i) - x.row(j)).norm();
  return d;
}

// Position of each vertex in an ordering.
std::vector<std::size_t> positions(const std::vector<std::size_t>& order) {
  std::vector<std::size_t> pos(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) pos[order[p]] = p;
  return pos;
}

bool is_permutation_of_n(const std::vector<std::size_t>& order, std::size_t n) {
  auto s = order;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != i) return false;
  return s.size() == n;
}

}  // namespace

TEST_CASE("distance matrix entries") {
  const StaticGraph g(100, {{0, 1}, {5, 7}});
  const auto d = build_distance_matrix(g);
  CHECK(d.delta(0, 0) == 0.0);
  CHECK(d.delta(0, 1) == 1.0);
  CHECK(d.delta(7, 5) == 1.0);
  CHECK(d.delta(0, 2) == doctest::Approx(1.01).epsilon(1e-15));
  CHECK(d.delta.isApprox(d.delta.transpose(), 0.0));
  CHECK_THROWS_AS(build_distance_matrix(StaticGraph(1)), InvalidArgument);
}

TEST_CASE("CMDS of a connected pair") {
  const auto s = cmds(build_distance_matrix(StaticGraph(2, {{0, 1}})));
  REQUIRE(s.c_len == 1);
  CHECK(std::abs(s.coords(0, 0)) == doctest::Approx(0.5));
  CHECK(s.coords(0, 0) == doctest::Approx(-s.coords(1, 0)));
}

TEST_CASE("CMDS of an empty graph is a regular simplex") {
  const auto d = build_distance_matrix(StaticGraph(3));
  const auto s = cmds(d);
  CHECK(s.c_len == 2);
  const double d01 = (s.coords.row(0) - s.coords.row(1)).norm();
  const double d02 = (s.coords.row(0) - s.coords.row(2)).norm();
  const double d12 = (s.coords.row(1) - s.coords.row(2)).norm();
  CHECK(d01 == doctest::Approx(4.0 / 3.0));
  CHECK(d02 == doctest::Approx(d01));
  CHECK(d12 == doctest::Approx(d01));
}

TEST_CASE("CMDS structural invariants on random graphs") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t n = 5 + 9 * seed;
    const auto g = oracle::random_graph(n, 0.1 + 0.05 * static_cast<double>(seed % 6), 40 + seed);
    const auto d = build_distance_matrix(g);
    const auto s = cmds(d);
    CAPTURE(seed);
    CHECK(s.c_len <= n - 1);
    CHECK(s.coords.cols() == static_cast<Eigen::Index>(s.c_len));
    for (std::size_t c = 0; c < s.c_len; ++c) {
      CHECK(std::abs(s.coords.col(c).sum()) <= 1e-9 * std::sqrt(static_cast<double>(n) * s.energies(c)));
      CHECK(s.energies(c) == doctest::Approx(s.coords.col(c).squaredNorm()));
      if (c > 0) CHECK(s.energies(c - 1) >= s.energies(c));
      // Largest-magnitude entry of each component is positive.
      Eigen::Index arg = 0;
      s.coords.col(c).cwiseAbs().maxCoeff(&arg);
      CHECK(s.coords(arg, c) > 0.0);
    }
    if (s.dropped_eigen_mass <= 1e-9 * s.eigenvalues.sum()) CHECK(max_embedding_error(s, d) <= 1e-6);
  }
}

TEST_CASE("ordering of a scrambled path is the path or its reversal") {
  // Path 3-0-5-1-4-2 under scrambled labels.
  const std::vector<std::size_t> path{3, 0, 5, 1, 4, 2};
  std::vector<Edge> e;
  for (std::size_t p = 0; p + 1 < path.size(); ++p) e.emplace_back(path[p], path[p + 1]);
  const StaticGraph g(6, e);
  const auto order = vertex_ordering(g);
  auto reversed = path;
  std::reverse(reversed.begin(), reversed.end());
  CHECK((order == path || order == reversed));
  CHECK(oracle::arrangement_cost(oracle::dense(g), order) == oracle::best_arrangement_cost(oracle::dense(g)));
}

TEST_CASE("ordering reaches the brute-force optimum of the circular window objective") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t n = 4 + seed % 5;
    // Connected samples only.
    auto g = oracle::random_graph(n, 0.45, 900 + seed);
    std::vector<Edge> e = g.edges();
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!g.has_edge(i, i + 1) && seed % 2 == 0) e.emplace_back(i, i + 1);
    g = StaticGraph(n, e);
    const auto a = oracle::dense(g);
    if (!oracle::connected(a)) continue;
    const auto order = vertex_ordering(g);
    CAPTURE(seed);
    REQUIRE(is_permutation_of_n(order, n));
    CHECK(oracle::circular_window_score(a, order, 2) == oracle::best_circular_window_score(a, 2));
  }
}

TEST_CASE("ordering opens the cycle at its cheapest cut") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = oracle::random_graph(30, 0.2, 300 + seed);
    const auto a = oracle::dense(g);
    if (!oracle::connected(a)) continue;
    const auto order = vertex_ordering(g);
    // Every rotation and reflection of the returned cycle costs at least as much.
    const long got = oracle::arrangement_cost(a, order);
    for (std::size_t s = 0; s < order.size(); ++s) {
      std::vector<std::size_t> rot(order.size());
      for (std::size_t r = 0; r < order.size(); ++r) rot[r] = order[(s + r) % order.size()];
      CHECK(oracle::arrangement_cost(a, rot) >= got);
    }
  }
}

TEST_CASE("ring lattice is ordered along the ring") {
  const auto order = vertex_ordering(generate_static(RingLattice{4}, 100, 0));
  std::vector<std::size_t> natural(100);
  std::iota(natural.begin(), natural.end(), std::size_t{0});
  CHECK(order == natural);

  // Relabeled ring: consecutive positions are lattice neighbours.
  std::vector<std::size_t> perm(40);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < 40; ++i) std::swap(perm[i], perm[(i * 17 + 5) % 40]);
  const auto g = generate_static(RingLattice{2}, 40, 0).permuted(perm);
  const auto o = vertex_ordering(g);
  for (std::size_t p = 0; p + 1 < o.size(); ++p) CHECK(g.has_edge(o[p], o[p + 1]));
}

TEST_CASE("ordering of empty and disconnected graphs") {
  std::vector<std::size_t> id(6);
  std::iota(id.begin(), id.end(), std::size_t{0});
  CHECK(vertex_ordering(StaticGraph(6)) == id);

  // Triangle {5, 6, 7}, edge {1, 3}, isolated 0, 2, 4.
  const StaticGraph g(8, {{5, 6}, {6, 7}, {5, 7}, {1, 3}});
  const auto order = vertex_ordering(g);
  const auto pos = positions(order);
  CHECK(std::max({pos[5], pos[6], pos[7]}) == 2);
  CHECK(std::min(pos[1], pos[3]) == 3);
  CHECK(std::vector<std::size_t>(order.begin() + 5, order.end()) == std::vector<std::size_t>{0, 2, 4});
}

TEST_CASE("ordering is deterministic") {
  const auto g = oracle::random_graph(60, 0.1, 77);
  CHECK(vertex_ordering(g) == vertex_ordering(StaticGraph(60, g.edges())));
}

TEST_CASE("SBM leading components are piecewise constant over communities") {
  const auto g = generate_static(Sbm{3, 0.8, 0.05}, 100, 8);
  const auto s = transform(g);
  const auto block = block_assignment(100, 3);
  for (Eigen::Index c = 0; c < 2; ++c) {
    double mean[3] = {0, 0, 0}, count[3] = {0, 0, 0};
    for (std::size_t p = 0; p < 100; ++p) {
      const auto b = block[s.ordering[p]];
      mean[b] += s.coords(p, c);
      count[b] += 1;
    }
    for (int b = 0; b < 3; ++b) mean[b] /= count[b];
    double within = 0.0, between = 0.0;
    for (std::size_t p = 0; p < 100; ++p) within += std::pow(s.coords(p, c) - mean[block[s.ordering[p]]], 2);
    for (int b = 0; b < 3; ++b) between += count[b] * mean[b] * mean[b];
    CAPTURE(c);
    CHECK(within < between);
  }
}

TEST_CASE("ring components concentrate in a single frequency bin") {
  const auto s = transform(generate_static(RingLattice{4}, 100, 0));
  const auto e = compute_spectrum(s).energies();
  for (Eigen::Index c = 0; c < 4; ++c) CHECK(e.row(c).maxCoeff() >= 0.5 * e.row(c).sum());
}

TEST_CASE("temporal transform pads to the largest rank") {
  const auto full = generate_static(ErdosRenyi{0.5}, 12, 1);
  const StaticGraph complete = generate_static(ErdosRenyi{1.0}, 12, 0);
  const auto ts = transform_temporal(TemporalNetwork({full, complete, full}));
  const auto single_full = transform(full);
  const auto single_complete = transform(complete);
  CHECK(ts.c_len == std::max(single_full.c_len, single_complete.c_len));
  for (const auto& step : ts.steps) CHECK(step.coords.cols() == static_cast<Eigen::Index>(ts.c_len));
  CHECK(ts.steps[0].coords == ts.steps[2].coords);
  CHECK(ts.steps[0].ordering == single_full.ordering);
  const auto c1 = single_complete.c_len;
  if (c1 < ts.c_len) CHECK(ts.steps[1].coords.rightCols(ts.c_len - c1).isZero(0.0));

  const auto one = transform_temporal(TemporalNetwork({full}));
  REQUIRE(one.steps.size() == 1);
  CHECK(one.steps[0].coords == single_full.coords);
}

TEST_CASE("normalization factors") {
  const auto s = transform(generate_static(ErdosRenyi{0.3}, 20, 2));
  const auto ones = normalization_factors(s, s.coords);
  for (Eigen::Index c = 0; c < ones.size(); ++c) CHECK(ones(c) == doctest::Approx(1.0));
  const auto twos = normalization_factors(s, s.coords / 2.0);
  for (Eigen::Index c = 0; c < twos.size(); ++c) CHECK(twos(c) == doctest::Approx(2.0));

  Eigen::VectorXd ref(2);
  ref << 4.0, 0.0;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 2);
  x(0, 0) = 1.0;
  x(1, 0) = -1.0;
  const auto f = normalization_factors(ref, x);
  CHECK(f(0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(f(1) == 1.0);
  x.col(0).setZero();
  CHECK_THROWS_AS(normalization_factors(ref, x), DegenerateComponent);
}

TEST_CASE("weighted distances") {
  Eigen::MatrixXd x(2, 2);
  x << 0, 0, 1, 1;
  Eigen::VectorXd u(2);
  u << 3, 1;
  CHECK(weighted_distances(x, u, 1.0)(0, 1) == doctest::Approx(std::sqrt(2.0)));

  Eigen::MatrixXd y = Eigen::MatrixXd::Random(9, 4);
  Eigen::VectorXd v(4);
  v << 5, 3, 2, 0.5;
  CHECK(weighted_distances(y, v, 0.0) == euclid(y));
  const Eigen::VectorXd flat = Eigen::VectorXd::Constant(4, 2.5);
  CHECK(weighted_distances(y, flat, 3.0).isApprox(euclid(y), 1e-14));
}

TEST_CASE("perfect retrieval on random graphs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 2 + (seed * 37) % 120;
    const auto g = oracle::random_graph(n, 0.02 + 0.04 * static_cast<double>(seed % 10), 70 + seed);
    const auto s = transform(g);
    CAPTURE(seed);
    CHECK(inverse_transform(s.coords, s.energies, s.ordering, 0.0, edge_count(g)) == g);
  }
}

TEST_CASE("edge budget extremes") {
  const auto g = oracle::random_graph(15, 0.3, 5);
  const auto s = transform(g);
  CHECK(edge_count(inverse_transform(s.coords, s.energies, s.ordering, 1.0, 0)) == 0);
  CHECK(edge_count(inverse_transform(s.coords, s.energies, s.ordering, 1.0, 105)) == 105);
  CHECK_THROWS_AS(inverse_transform(s.coords, s.energies, s.ordering, 1.0, 106), InvalidArgument);
}

TEST_CASE("truncated SBM reconstruction keeps block density ordering") {
  const auto g = generate_static(Sbm{3, 0.8, 0.05}, 100, 12);
  const auto s = transform(g);
  const Eigen::MatrixXd x = s.coords.leftCols(20);
  const auto r = inverse_transform(x, s.energies.head(20), s.ordering, 0.0, edge_count(g));
  const auto block = block_assignment(100, 3);
  double in = 0, in_n = 0, out = 0, out_n = 0;
  for (std::size_t i = 0; i < 100; ++i)
    for (std::size_t j = i + 1; j < 100; ++j) {
      const double e = r.has_edge(i, j) ? 1.0 : 0.0;
      (block[i] == block[j] ? in : out) += e;
      (block[i] == block[j] ? in_n : out_n) += 1;
    }
  CHECK(in / in_n > out / out_n);
}

TEST_CASE("temporal round trip on the toy network") {
  auto cfg = TtnConfig::default_schedule(2);
  cfg.period_len = 3;
  cfg.n = 40;
  const auto net = generate_ttn(cfg);
  const auto sig = transform_temporal(net);
  std::vector<std::size_t> counts;
  for (const auto& g : net.snapshots()) counts.push_back(edge_count(g));
  CHECK(inverse_transform_temporal(sig, sig, 0.0, counts) == net);
}
