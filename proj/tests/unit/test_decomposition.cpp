#include <doctest.h>

#include <cmath>
#include <complex>

#include "netsig/decomposition.hpp"
#include "netsig/error.hpp"
#include "netsig/generators.hpp"
#include "netsig/rng.hpp"

using namespace netsig;

namespace {

// Itakura-Saito divergence summed elementwise, written out directly.
double is_divergence(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) s += x(i, j) / y(i, j) - std::log(x(i, j) / y(i, j)) - 1.0;
  return s;
}

Eigen::MatrixXd random_positive(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(0.1, 2.0);
  return m;
}

TemporalNetwork small_ttn(std::uint64_t seed) {
  auto cfg = TtnConfig::default_schedule(seed);
  cfg.n = 24;
  cfg.period_len = 5;
  return generate_ttn(cfg);
}

void check_non_increasing(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i)
    CHECK(trace[i] <= trace[i - 1] + 1e-8 * std::abs(trace[i - 1]));
}

}  // namespace

TEST_CASE("stacked layout puts frequency blocks of components on rows") {
  SpectrumSet s;
  s.n = 4;
  s.c_len = 2;
  s.f_len = 3;
  s.coeffs.resize(2, 3);
  for (Eigen::Index c = 0; c < 2; ++c)
    for (Eigen::Index f = 0; f < 3; ++f) s.coeffs(c, f) = {static_cast<double>(1 + c + 2 * f), 0.0};
  TemporalSpectra spec{4, 2, 3, {s}};
  const auto in = stack_spectra(spec);
  REQUIRE(in.v.rows() == 6);
  REQUIRE(in.v.cols() == 1);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t f = 0; f < 3; ++f) {
      const double e = std::pow(static_cast<double>(1 + c + 2 * f), 2);
      CHECK(in.v(static_cast<Eigen::Index>(in.row(c, f)), 0) == doctest::Approx(e + in.eps));
      CHECK(in.row(c, f) == f * 2 + c);
    }

  s.coeffs.setZero();
  const auto zero = stack_spectra(TemporalSpectra{4, 2, 3, {s, s}});
  CHECK(zero.eps > 0.0);
  CHECK((zero.v.array() == zero.eps).all());
}

TEST_CASE("toy network stacks to 5049 rows") {
  const auto spec = compute_temporal_spectra(transform_temporal(generate_ttn(TtnConfig::default_schedule(3))));
  const auto in = stack_spectra(spec);
  CHECK(spec.c_len == 99);
  CHECK(spec.f_len == 51);
  CHECK(in.v.rows() == 5049);
  CHECK(in.v.cols() == 80);
}

TEST_CASE("beta divergence matches the closed form") {
  const auto x = random_positive(4, 5, 1);
  const auto y = random_positive(4, 5, 2);
  CHECK(beta_divergence(x.array(), y.array(), 0.0) == doctest::Approx(is_divergence(x, y)).epsilon(1e-12));
  CHECK(beta_divergence(x.array(), y.array(), 2.0) == doctest::Approx(0.5 * (x - y).squaredNorm()));
  CHECK(beta_divergence(x.array(), x.array(), 0.0) == doctest::Approx(0.0));
}

TEST_CASE("objective adds the smoothness penalty") {
  const auto v = random_positive(6, 4, 3);
  const auto w = random_positive(6, 2, 4);
  const auto h = random_positive(2, 4, 5);
  const double fit = is_divergence(v, (w * h).array() + 1e-9);
  double smooth = 0.0;
  for (Eigen::Index k = 0; k < 2; ++k)
    for (Eigen::Index t = 1; t < 4; ++t) smooth += h(k, t - 1) / h(k, t) - std::log(h(k, t - 1) / h(k, t)) - 1.0;
  CHECK(nmf_objective(v, w, h, 1e-9, 0.0, 2.5) == doctest::Approx(fit + 2.5 * smooth).epsilon(1e-12));
}

TEST_CASE("rank-one input is fitted almost exactly") {
  Eigen::VectorXd w0 = random_positive(12, 1, 8).col(0);
  Eigen::VectorXd h0 = random_positive(9, 1, 9).col(0);
  const Eigen::MatrixXd v = w0 * h0.transpose();
  NmfConfig cfg;
  cfg.k = 1;
  cfg.max_iters = 300;
  cfg.tol = 0.0;
  const auto res = nmf_decompose(v, cfg);
  CHECK(res.objective_trace.back() <= 1e-6);
}

TEST_CASE("updates are monotone, nonnegative and normalized") {
  const auto v = random_positive(30, 12, 10);
  for (double gamma : {0.0, 1.0, 5.0, 50.0}) {
    NmfConfig cfg;
    cfg.k = 3;
    cfg.gamma = gamma;
    cfg.max_iters = 80;
    cfg.tol = 0.0;
    cfg.seed = 4;
    const auto res = nmf_decompose(v, cfg);
    CAPTURE(gamma);
    REQUIRE(res.objective_trace.size() == 81);
    check_non_increasing(res.objective_trace);
    CHECK((res.w.array() >= 0.0).all());
    CHECK((res.h.array() >= 0.0).all());
    for (Eigen::Index k = 0; k < 3; ++k) CHECK(res.w.col(k).sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("other beta values without smoothing stay monotone") {
  const auto v = random_positive(20, 10, 11);
  for (double beta : {0.5, 1.0, 2.0}) {
    NmfConfig cfg;
    cfg.k = 2;
    cfg.beta = beta;
    cfg.max_iters = 60;
    cfg.tol = 0.0;
    const auto res = nmf_decompose(v, cfg);
    CAPTURE(beta);
    check_non_increasing(res.objective_trace);
  }
  NmfConfig bad;
  bad.beta = 1.0;
  bad.gamma = 1.0;
  CHECK_THROWS_AS(nmf_decompose(v, bad), InvalidArgument);
  bad = NmfConfig{};
  bad.k = 0;
  CHECK_THROWS_AS(nmf_decompose(v, bad), InvalidArgument);
}

TEST_CASE("same seed gives bit-identical factors; tolerance stops early") {
  const auto v = random_positive(15, 8, 12);
  NmfConfig cfg;
  cfg.k = 2;
  cfg.gamma = 2.0;
  cfg.max_iters = 500;
  cfg.tol = 1e-3;
  cfg.seed = 77;
  const auto a = nmf_decompose(v, cfg);
  const auto b = nmf_decompose(v, cfg);
  CHECK(a.w == b.w);
  CHECK(a.h == b.h);
  CHECK(a.objective_trace == b.objective_trace);
  CHECK(a.converged);
  CHECK(a.iterations < 500);
  CHECK(a.objective_trace.size() == a.iterations + 1);
}

TEST_CASE("Wiener masks partition the spectra") {
  const auto net = small_ttn(2);
  const auto spec = compute_temporal_spectra(transform_temporal(net));
  NmfConfig cfg;
  cfg.k = 3;
  cfg.gamma = 5.0;
  cfg.max_iters = 30;
  const auto res = nmf_decompose(stack_spectra(spec), cfg);
  Eigen::MatrixXd mask_sum = Eigen::MatrixXd::Zero(res.w.rows(), res.h.cols());
  std::vector<TemporalSpectra> parts;
  for (std::size_t k = 0; k < 3; ++k) {
    mask_sum += wiener_mask(res, k);
    parts.push_back(wiener_separate(spec, res, k));
  }
  CHECK((mask_sum.array() - 1.0).abs().maxCoeff() <= 1e-12);
  for (std::size_t t = 0; t < spec.t_len(); ++t) {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(spec.c_len, spec.f_len);
    for (const auto& p : parts) sum += p.steps[t].coeffs;
    const double scale = std::max(1.0, spec.steps[t].coeffs.cwiseAbs().maxCoeff());
    CHECK((sum - spec.steps[t].coeffs).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }

  cfg.k = 1;
  const auto single = nmf_decompose(stack_spectra(spec), cfg);
  const auto whole = wiener_separate(spec, single, 0);
  for (std::size_t t = 0; t < spec.t_len(); ++t) CHECK(whole.steps[t].coeffs == spec.steps[t].coeffs);
}

TEST_CASE("reconstructing unmasked spectra recovers the network") {
  const auto net = small_ttn(3);
  const auto sig = transform_temporal(net);
  const auto spec = compute_temporal_spectra(sig);
  std::vector<std::size_t> counts;
  for (const auto& g : net.snapshots()) counts.push_back(edge_count(g));
  const auto comp = reconstruct_component(spec, sig, 0.0, counts);
  CHECK(comp.network == net);
  for (std::size_t t = 0; t < sig.steps.size(); ++t)
    CHECK((comp.signals.steps[t].coords - sig.steps[t].coords).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("aggregation is linear in the activations") {
  const auto a = generate_static(ErdosRenyi{0.3}, 10, 1);
  const auto b = generate_static(ErdosRenyi{0.3}, 10, 2);
  const TemporalNetwork net({a, b, a});
  const std::vector<double> zero{0, 0, 0};
  CHECK(aggregate_weighted(net, zero).isZero(0.0));
  const std::vector<double> hot{0, 2.5, 0};
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(10, 10);
  for (const auto& [i, j] : b.edges()) want(i, j) = want(j, i) = 2.5;
  CHECK(aggregate_weighted(net, hot) == want);

  const TemporalNetwork constant({a, a, a});
  const std::vector<double> h{1.0, 2.0, 0.5};
  Eigen::MatrixXd want_c = Eigen::MatrixXd::Zero(10, 10);
  for (const auto& [i, j] : a.edges()) want_c(i, j) = want_c(j, i) = 3.5;
  CHECK(aggregate_weighted(constant, h).isApprox(want_c, 1e-15));
  CHECK_THROWS_AS(aggregate_weighted(net, std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("single-pattern pipeline reproduces the original network") {
  const auto net = small_ttn(4);
  NmfConfig cfg;
  cfg.k = 1;
  cfg.max_iters = 20;
  const auto dec = decompose_pipeline(net, cfg, 0.0);
  REQUIRE(dec.components.size() == 1);
  CHECK(dec.components[0].network == net);
  CHECK(dec.components[0].aggregate.rows() == 24);
}

TEST_CASE("pipeline honours an edge budget override") {
  const auto net = small_ttn(5);
  NmfConfig cfg;
  cfg.k = 2;
  cfg.gamma = 5.0;
  cfg.max_iters = 20;
  std::vector<std::size_t> budget(net.t_len(), 30);
  const auto dec = decompose_pipeline(net, cfg, 1.0, budget);
  for (const auto& comp : dec.components)
    for (const auto& g : comp.network.snapshots()) CHECK(edge_count(g) == 30);
  CHECK_THROWS_AS(decompose_pipeline(net, cfg, 1.0, std::vector<std::size_t>{1, 2}), InvalidArgument);
}
