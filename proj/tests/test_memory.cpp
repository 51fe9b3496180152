#include <cmath>

#include "doctest.h"

#include "chronofrft/errors.hpp"
#include "chronofrft/io.hpp"
#include "chronofrft/memory.hpp"

using namespace chronofrft;

TEST_CASE("expanded time-bandwidth area") {
  CHECK(bandwidth_after_lens(110.0, 0.0).tb_prime == 110.0);
  CHECK(bandwidth_after_lens(110.0, kPi / 2.0).tb_prime == 220.0);
  CHECK(bandwidth_after_lens(110.0, -kPi / 2.0).tb_prime == 220.0);
  CHECK(bandwidth_after_lens(110.0, 2.0 * kPi / 3.0).tb_prime ==
        doctest::Approx(300.5255888325765).epsilon(1e-14));
  double prev = 0.0;
  for (double phi = 0.0; phi < kPi - 0.05; phi += 0.05) {
    const double v = bandwidth_after_lens(110.0, phi).tb_prime;
    CHECK(v > prev);
    CHECK(bandwidth_after_lens(110.0, -phi).tb_prime == v);
    prev = v;
  }
  CHECK_THROWS_AS(bandwidth_after_lens(110.0, kPi), DomainError);
  CHECK_THROWS_AS(bandwidth_after_lens(0.0, 0.1), InvalidArgument);
}

TEST_CASE("storage efficiency formula") {
  auto p = memory_preset("gem");
  CHECK(std::abs(storage_efficiency(p, 110.0) - (1.0 - std::exp(-2.0 * kPi * 85.0 / 110.0))) <= 1e-12);
  CHECK(storage_efficiency(p, 110.0) == doctest::Approx(0.9922121359382350).epsilon(1e-14));

  double prev = 0.0;
  for (double od : {1.0, 5.0, 20.0, 85.0, 400.0}) {
    p.od = od;
    const double eta = storage_efficiency(p, 110.0);
    CHECK(eta > prev);
    prev = eta;
  }
  p.od = 1e6;
  CHECK(storage_efficiency(p, 110.0) == 1.0);
  p.od = 85.0;
  CHECK(storage_efficiency(p, 300.0) < storage_efficiency(p, 110.0));
  CHECK_THROWS_AS(storage_efficiency(p, 0.0), InvalidArgument);
}

TEST_CASE("decay composition is arithmetic only") {
  auto p = memory_preset("gem-decay");
  // T Gamma with T = sqrt(TB) tau: 0.4009 at the shipped operating point.
  CHECK(p.gamma * p.time_window() == doctest::Approx(0.4008547417706318).epsilon(1e-12));
  CHECK(storage_efficiency(p, 110.0) == doctest::Approx(0.4450681638352091).epsilon(1e-12));
}

TEST_CASE("presets and validation") {
  for (const auto& name : memory_preset_names()) CHECK_NOTHROW(memory_preset(name).validate());
  CHECK_THROWS_AS(memory_preset("nope"), InvalidArgument);
  auto p = memory_preset("gem");
  p.od = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = memory_preset("gem");
  p.efficiency_override = 1.5;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);

  auto exp = memory_preset("gem-experiment");
  CHECK(exp.parasitic_d_omega == exp.compensation_d_omega);
  CHECK(exp.parasitic_d_omega > 0.0);

  auto from_json = io::memory_from_json(io::json{{"preset", "gem"}, {"od", 50.0}});
  CHECK(from_json.od == 50.0);
  CHECK(from_json.tb == 110.0);
  auto round = io::memory_from_json(io::memory_to_json(exp));
  CHECK(round.parasitic_d_omega == exp.parasitic_d_omega);
  CHECK(round.beta == exp.beta);
}

TEST_CASE("bandwidth budget") {
  auto p = memory_preset("gem");
  CHECK_NOTHROW(check_bandwidth_budget(p, make_plan(2.0 * kPi / 3.0, FrftMethod::lens_sequence, false)));
  CHECK_NOTHROW(check_bandwidth_budget(p, make_plan(-2.0 * kPi / 3.0, FrftMethod::lens_sequence, false)));
  CHECK_THROWS_AS(check_bandwidth_budget(p, make_plan(0.7 * kPi, FrftMethod::lens_sequence, false)),
                  DomainError);
  p.beta *= 0.5;
  CHECK_THROWS_AS(apply_memory_channel(hermite_gauss(0, reference_grid()), p, make_plan(kPi / 2.0)),
                  DomainError);
}

TEST_CASE("readout lens: sign flip equals inverting the time axis") {
  auto g = reference_grid();
  auto e = gaussian_pulse(g, 0.8, 1.2, 1.5);
  const double d_t = 0.6;
  auto flipped = apply_readout_lens(e, d_t);
  auto inverted = reflect(apply_temporal_lens(reflect(e), d_t));
  CHECK(l2_distance(flipped, inverted) < 1e-14);
  CHECK(l2_distance(flipped, apply_temporal_lens(e, d_t)) < 1e-14);
}

TEST_CASE("channel efficiency and ideal reduction") {
  auto g = reference_grid();
  auto e = cat_state(g, 7.0 / 4.2, 2.4 / 4.2);
  for (double phi : {kPi / 6.0, kPi / 2.0, 2.0 * kPi / 3.0}) {
    auto plan = make_plan(phi, FrftMethod::lens_sequence, false);
    auto p = memory_preset("gem-experiment");
    auto out = apply_memory_channel(e, p, plan);
    const double eta = storage_efficiency(p, bandwidth_after_lens(p.tb, phi).tb_prime);
    CHECK(std::abs(out.norm_squared() / e.norm_squared() - eta) <= 1e-9);

    p.efficiency_override = 1.0;
    auto ideal = apply_memory_channel(e, p, plan);
    CHECK(phase_aligned_distance(frft_lens_sequence(e, plan), ideal) <= 1e-6);

    p.efficiency_override = 0.33;
    CHECK(apply_memory_channel(e, p, plan).norm_squared() == doctest::Approx(0.33).epsilon(1e-9));
  }
}

TEST_CASE("uncompensated parasitic phase distorts the output") {
  auto g = reference_grid();
  auto e = hermite_gauss(3, g);
  auto plan = make_plan(kPi / 4.0, FrftMethod::lens_sequence, false);
  auto p = memory_preset("ideal");
  p.parasitic_d_omega = 0.3;
  auto out = apply_memory_channel(e, p, plan);
  CHECK(out.norm_squared() == doctest::Approx(1.0).epsilon(1e-9));
  const double fid = std::norm(overlap(frft_lens_sequence(e, plan), out));
  CHECK(fid < 0.99);
  p.compensation_d_omega = 0.3;
  CHECK(std::norm(overlap(frft_lens_sequence(e, plan), apply_memory_channel(e, p, plan))) ==
        doctest::Approx(1.0).epsilon(1e-9));
}
