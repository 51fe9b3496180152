#include <cmath>
#include <random>

#include "doctest.h"

#include "chronofrft/detection.hpp"
#include "chronofrft/errors.hpp"

using namespace chronofrft;

namespace {

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("noiseless traces are quadratures of the envelope") {
  auto g = reference_grid();
  auto e = cat_state(g, 1.0, 0.7);
  for (std::size_t j = 0; j < g.n; ++j) e.samples[j] *= std::polar(1.0, 0.3 * g.time(j));
  DetectionConfig cfg;
  auto s0 = simulate_shot(e, cfg, 0.0);
  auto s1 = simulate_shot(e, cfg, kPi / 2.0);
  for (std::size_t j = 0; j < g.n; j += 37) {
    CHECK(s0.trace[j] == doctest::Approx(e.samples[j].real()).epsilon(1e-14));
    CHECK(s1.trace[j] == doctest::Approx(e.samples[j].imag()).epsilon(1e-12));
  }
  CHECK(!s0.reference_segment.empty());
  CHECK(s0.trace.size() == g.n);
}

TEST_CASE("LO phase is recovered exactly from a noiseless reference") {
  auto g = reference_grid();
  DetectionConfig cfg;
  auto e = hermite_gauss(0, g);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-kPi, kPi);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double theta = uni(rng);
    auto shot = simulate_shot(e, cfg, theta);
    worst = std::max(worst, std::abs(std::remainder(estimate_lo_phase(shot, cfg) - theta, 2.0 * kPi)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("LO phase estimate is unbiased under reference noise") {
  auto g = reference_grid();
  DetectionConfig cfg;
  cfg.noise_sigma = 0.2;
  cfg.reference_amplitude = 5.0;  // calibrated reference; per-trial spread ~8e-3 rad
  cfg.seed = 11;
  auto e = hermite_gauss(0, g);
  double mean = 0.0;
  const int trials = 1000;
  for (int k = 0; k < trials; ++k) {
    const double theta = lo_phase_for_shot(cfg, k);
    auto shot = simulate_shot(e, cfg, theta, k);
    mean += std::remainder(estimate_lo_phase(shot, cfg) - theta, 2.0 * kPi);
  }
  CHECK(std::abs(mean / trials) <= 1e-3);
}

TEST_CASE("single noiseless shot with a beat-note carrier is exact") {
  auto g = reference_grid();
  auto e = hermite_gauss(5, g);
  for (std::size_t j = 0; j < g.n; ++j) e.samples[j] *= std::polar(1.0, -0.8 * g.time(j));
  DetectionConfig cfg = calibrated_detection(g, 1);
  cfg.noise_sigma = 0.0;
  cfg.shots = 1;
  for (double theta : {0.0, 1.0, -2.5, 3.1}) {
    auto shot = simulate_shot(e, cfg, theta);
    CHECK(l2_distance(demodulate_shot(shot, cfg), e) <= 1e-12);
    CHECK(l2_distance(recover_envelope({shot}, cfg), e) <= 1e-12);
  }
}

TEST_CASE("baseband shots need two LO phases") {
  auto g = reference_grid();
  auto e = hermite_gauss(2, g);
  DetectionConfig cfg;
  auto a = simulate_shot(e, cfg, 0.4);
  CHECK_THROWS_AS(recover_envelope({a}, cfg), DomainError);
  CHECK_THROWS_AS(demodulate_shot(a, cfg), DomainError);
  auto b = simulate_shot(e, cfg, 2.0);
  CHECK(l2_distance(recover_envelope({a, b}, cfg), e) <= 1e-12);
}

TEST_CASE("zero reference amplitude is rejected") {
  auto g = reference_grid();
  DetectionConfig cfg;
  cfg.reference_amplitude = 0.0;
  auto shot = simulate_shot(hermite_gauss(0, g), cfg, 0.3);
  CHECK_THROWS_AS(estimate_lo_phase(shot, cfg), DomainError);
  CHECK_THROWS_AS(recover_envelope({shot, shot}, cfg), DomainError);

  DetectionConfig weak;
  weak.reference_amplitude = 0.01;
  weak.noise_sigma = 1.0;
  auto noisy = simulate_shot(hermite_gauss(0, g), weak, 0.3);
  CHECK_THROWS_AS(estimate_lo_phase(noisy, weak), DomainError);
}

TEST_CASE("config validation") {
  auto g = reference_grid();
  DetectionConfig cfg;
  cfg.shots = 0;
  CHECK_THROWS_AS(cfg.validate(g), InvalidArgument);
  cfg = {};
  cfg.noise_sigma = -1.0;
  CHECK_THROWS_AS(cfg.validate(g), InvalidArgument);
  cfg = {};
  cfg.carrier = kPi / g.dt;
  CHECK_THROWS_AS(cfg.validate(g), InvalidArgument);
}

TEST_CASE("200 noisy shots recover H5") {
  auto g = reference_grid();
  auto e = hermite_gauss(5, g);
  for (double carrier : {0.0, kPi / (4.0 * g.dt)}) {
    DetectionConfig cfg;
    cfg.shots = 200;
    cfg.noise_sigma = 0.05;
    cfg.seed = 2024;
    cfg.carrier = carrier;
    auto rec = recover_envelope(simulate_shots(e, cfg), cfg);
    CHECK(std::abs(overlap(e, rec)) >= 0.99);
  }
}

TEST_CASE("recovery error falls as one over root shots") {
  auto g = reference_grid();
  auto e = hermite_gauss(3, g);
  const std::vector<double> counts{10, 40, 160, 640};
  std::vector<double> errs;
  for (double n : counts) {
    double acc = 0.0;
    const int seeds = 8;
    for (int s = 0; s < seeds; ++s) {
      DetectionConfig cfg = calibrated_detection(g, derive_seed(77, s));
      cfg.shots = static_cast<std::size_t>(n);
      acc += l2_distance(recover_envelope(simulate_shots(e, cfg), cfg), e);
    }
    errs.push_back(acc / seeds);
  }
  const double slope = log_log_slope(counts, errs);
  CHECK(std::abs(slope + 0.5) <= 0.05);
}

TEST_CASE("randomness is a function of the seed alone") {
  auto g = reference_grid();
  auto e = hermite_gauss(1, g);
  DetectionConfig cfg = calibrated_detection(g, 99);
  cfg.shots = 5;
  auto a = simulate_shots(e, cfg);
  auto b = simulate_shots(e, cfg);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].trace == b[k].trace);
    CHECK(a[k].reference_segment == b[k].reference_segment);
    CHECK(a[k].lo_phase_true == b[k].lo_phase_true);
  }
  // Shot k does not depend on how many shots were requested.
  cfg.shots = 3;
  auto c = simulate_shots(e, cfg);
  CHECK(c[2].trace == a[2].trace);
  cfg.seed = 100;
  auto d = simulate_shots(e, cfg);
  CHECK(d[0].trace != a[0].trace);
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));

  DetectionConfig drift;
  drift.lo_phase_model = LoPhaseModel::slow_drift;
  drift.drift_rate = 0.01;
  drift.seed = 5;
  CHECK(std::remainder(lo_phase_for_shot(drift, 10) - lo_phase_for_shot(drift, 0) - 0.1, 2.0 * kPi) ==
        doctest::Approx(0.0).epsilon(1e-12));
}
