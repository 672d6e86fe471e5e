#include <doctest.h>

#include <cmath>

#include "netsig/error.hpp"
#include "netsig/generators.hpp"

using namespace netsig;

TEST_CASE("ring lattice is 4-regular") {
  const auto g = generate_static(RingLattice{4}, 100, 3);
  CHECK(edge_count(g) == 200);
  for (std::size_t i = 0; i < 100; ++i) CHECK(g.degree(i) == 4);
  CHECK(g.has_edge(0, 99));
  CHECK(g.has_edge(0, 98));
  CHECK_FALSE(g.has_edge(0, 97));
}

TEST_CASE("SBM densities within three binomial sigmas") {
  const auto g = generate_static(Sbm{3, 0.8, 0.05}, 100, 21);
  const auto block = block_assignment(100, 3);
  double in = 0, in_pairs = 0, out = 0, out_pairs = 0;
  for (std::size_t i = 0; i < 100; ++i)
    for (std::size_t j = i + 1; j < 100; ++j) {
      const double e = g.has_edge(i, j) ? 1.0 : 0.0;
      if (block[i] == block[j]) {
        in += e;
        in_pairs += 1;
      } else {
        out += e;
        out_pairs += 1;
      }
    }
  CHECK(std::abs(in / in_pairs - 0.8) <= 3.0 * std::sqrt(0.8 * 0.2 / in_pairs));
  CHECK(std::abs(out / out_pairs - 0.05) <= 3.0 * std::sqrt(0.05 * 0.95 / out_pairs));
}

TEST_CASE("block assignment puts the remainder in the last block") {
  const auto b = block_assignment(10, 3);
  CHECK(b == std::vector<std::size_t>{0, 0, 0, 1, 1, 1, 2, 2, 2, 2});
}

TEST_CASE("degenerate and noised models") {
  CHECK(edge_count(generate_static(ErdosRenyi{0.0}, 10, 1)) == 0);
  CHECK(edge_count(generate_static(ErdosRenyi{1.0}, 10, 1)) == 45);
  // Rewiring moves edges without creating or destroying them.
  CHECK(edge_count(generate_static(NoisedRing{4, 0.1}, 100, 5)) == 200);
  CHECK(generate_static(NoisedRing{4, 0.0}, 50, 5) == generate_static(RingLattice{4}, 50, 0));
  const auto rc = generate_static(RingCommunities{4, 3, 0.8}, 60, 2);
  const auto ring = generate_static(RingLattice{4}, 60, 0);
  for (const auto& [i, j] : ring.edges()) CHECK(rc.has_edge(i, j));
}

TEST_CASE("same seed gives identical graphs") {
  for (const auto& spec : {ModelSpec{ErdosRenyi{0.3}}, ModelSpec{Sbm{3, 0.8, 0.05}}, ModelSpec{NoisedRing{4, 0.2}},
                           ModelSpec{RingCommunities{4, 3, 0.8}}}) {
    CHECK(generate_static(spec, 80, 17) == generate_static(spec, 80, 17));
    CHECK_FALSE(generate_static(spec, 80, 17) == generate_static(spec, 80, 18));
  }
}

TEST_CASE("model spec strings") {
  CHECK(format_model_spec(parse_model_spec("er:p=0.4")) == "er:p=0.4");
  CHECK(format_model_spec(parse_model_spec("sbm:k=3,pw=0.8,pb=0.05")) == "sbm:k=3,pw=0.8,pb=0.05");
  CHECK(format_model_spec(parse_model_spec("ring:k=4")) == "ring:k=4");
  CHECK(format_model_spec(parse_model_spec("nring:k=4,p=0.1")) == "nring:k=4,p=0.1");
  CHECK(format_model_spec(parse_model_spec("ringcom:k=4,c=3")) == "ringcom:k=4,c=3,pw=0.8");
  CHECK(parse_model_spec_range("sbm:k=2..6").size() == 5);
  const auto rings = parse_model_spec_range("ring:k=2..8/2");
  REQUIRE(rings.size() == 4);
  CHECK(std::get<RingLattice>(rings[3]).k == 8);
  CHECK_THROWS_AS(parse_model_spec("tree:k=2"), InvalidArgument);
  CHECK_THROWS_AS(parse_model_spec("er:p=abc"), InvalidArgument);
  CHECK_THROWS_AS(parse_model_spec_range("sbm:k=6..2"), InvalidArgument);
  CHECK_THROWS_AS(parse_model_spec_range("ring:k=2..8/0"), InvalidArgument);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(generate_static(RingLattice{3}, 100, 0), InvalidArgument);
  CHECK_THROWS_AS(generate_static(RingLattice{100}, 100, 0), InvalidArgument);
  CHECK_THROWS_AS(generate_static(ErdosRenyi{1.5}, 10, 0), InvalidArgument);
  CHECK_THROWS_AS(generate_static(Sbm{0, 0.5, 0.1}, 10, 0), InvalidArgument);
  CHECK_THROWS_AS(generate_static(Sbm{11, 0.5, 0.1}, 10, 0), InvalidArgument);
}

TEST_CASE("default TTN shape and reproducibility") {
  const auto a = generate_ttn(TtnConfig::default_schedule(7));
  CHECK(a.t_len() == 80);
  CHECK(a.n() == 100);
  CHECK(a == generate_ttn(TtnConfig::default_schedule(7)));
  CHECK_FALSE(a == generate_ttn(TtnConfig::default_schedule(8)));
}

TEST_CASE("TTN deterministic limits") {
  auto cfg = TtnConfig::default_schedule(3);
  cfg.p_keep_in = cfg.p_gain_in = cfg.p_keep_out = cfg.p_gain_out = 0.0;
  const auto empty = generate_ttn(cfg);
  for (std::size_t t = 1; t < empty.t_len(); ++t) CHECK(edge_count(empty.at(t)) == 0);

  cfg.schedule = {Sbm{3, 0.8, 0.05}};
  cfg.p_keep_in = cfg.p_gain_in = 1.0;
  const auto exact = generate_ttn(cfg);
  const auto prescribed = ttn_prescribed(cfg, 0);
  for (std::size_t t = 1; t < exact.t_len(); ++t) CHECK(exact.at(t) == prescribed);
}

TEST_CASE("TTN stationary densities match the two-state chain") {
  const auto cfg = TtnConfig::default_schedule(5);
  const auto net = generate_ttn(cfg);
  // Stationary presence: gain / (gain + 1 - keep).
  const double want_in = cfg.p_gain_in / (cfg.p_gain_in + 1.0 - cfg.p_keep_in);
  const double want_out = cfg.p_gain_out / (cfg.p_gain_out + 1.0 - cfg.p_keep_out);
  CHECK(want_in == doctest::Approx(0.952).epsilon(1e-3));
  CHECK(want_out == doctest::Approx(0.048).epsilon(1e-2));
  for (std::size_t period = 0; period < cfg.schedule.size(); ++period) {
    const auto ep = ttn_prescribed(cfg, period);
    double in = 0, in_n = 0, out = 0, out_n = 0;
    for (std::size_t t = period * cfg.period_len + 15; t < (period + 1) * cfg.period_len; ++t)
      for (std::size_t i = 0; i < cfg.n; ++i)
        for (std::size_t j = i + 1; j < cfg.n; ++j) {
          const double e = net.at(t).has_edge(i, j) ? 1.0 : 0.0;
          if (ep.has_edge(i, j)) {
            in += e;
            in_n += 1;
          } else {
            out += e;
            out_n += 1;
          }
        }
    CAPTURE(period);
    CHECK(std::abs(in / in_n - want_in) <= 0.05);
    CHECK(std::abs(out / out_n - want_out) <= 0.05);
  }
}
