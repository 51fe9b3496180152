#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "chronofrft/errors.hpp"
#include "chronofrft/frft.hpp"

using namespace chronofrft;

namespace {

const HermiteBasis& reference_basis() {
  static const HermiteBasis basis(reference_grid());
  return basis;
}

double rms_width(const SampledEnvelope& e) {
  double w = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < e.grid.n; ++j) {
    const double p = std::norm(e.samples[j]);
    w += p;
    m2 += p * e.grid.time(j) * e.grid.time(j);
  }
  return std::sqrt(m2 / w);
}

SampledEnvelope smooth_asymmetric(const TimeGrid& g) {
  auto e = zeros(g);
  for (std::size_t j = 0; j < g.n; ++j) {
    const double q = g.time(j);
    e.samples[j] = std::exp(-0.5 * (q - 0.7) * (q - 0.7)) * std::polar(1.0, 0.4 * q) +
                   Complex(0.0, 0.5) * std::exp(-(q + 1.1) * (q + 1.1));
  }
  const double n = e.norm();
  for (auto& z : e.samples) z /= n;
  return e;
}

}  // namespace

TEST_CASE("lens coefficients") {
  auto c = lens_coefficients(kPi / 3.0);
  CHECK(c.d_t == doctest::Approx(0.5773502691896258).epsilon(1e-15));
  CHECK(c.d_omega == doctest::Approx(0.8660254037844386).epsilon(1e-15));
  auto z = lens_coefficients(0.0);
  CHECK(z.d_t == 0.0);
  CHECK(z.d_omega == 0.0);
  auto neg = lens_coefficients(-kPi / 2.0);
  CHECK(neg.d_t == doctest::Approx(-1.0));
  CHECK(neg.d_omega == doctest::Approx(-1.0));
  CHECK_THROWS_AS(lens_coefficients(kPi), DomainError);
  CHECK_THROWS_AS(lens_coefficients(-kPi), DomainError);
  CHECK_THROWS_AS(make_plan(kPi, FrftMethod::lens_sequence, false), DomainError);
}

TEST_CASE("decompose_angle") {
  auto one = decompose_angle(kPi / 3.0);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == doctest::Approx(kPi / 3.0));

  auto two = decompose_angle(2.0 * kPi / 3.0);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == doctest::Approx(kPi / 3.0));
  CHECK(two[1] == doctest::Approx(kPi / 3.0));

  auto half = decompose_angle(kPi);
  REQUIRE(half.size() == 2);
  CHECK(half[0] == doctest::Approx(kPi / 2.0));

  auto wrapped = decompose_angle(-kPi);  // reduces into (-pi, pi]
  REQUIRE(wrapped.size() == 2);
  CHECK(wrapped[0] == doctest::Approx(kPi / 2.0));

  CHECK(decompose_angle(2.0 * kPi)[0] == doctest::Approx(0.0));
  CHECK(decompose_angle(5.0 * kPi / 2.0)[0] == doctest::Approx(kPi / 2.0));
  CHECK(decompose_angle(-kPi / 2.0).size() == 1);

  for (double phi : {0.3, 1.7, -2.9, 3.0, 7.5, -11.0}) {
    auto stages = decompose_angle(phi);
    double sum = 0.0;
    for (double s : stages) {
      CHECK(std::abs(s) <= kPi / 2.0 + 1e-15);
      sum += s;
    }
    CHECK(std::abs(std::remainder(sum - phi, 2.0 * kPi)) < 1e-12);
  }
}

TEST_CASE("spectral lens broadens a Gaussian by sqrt(1 + d^2)") {
  auto g = reference_grid();
  auto h0 = hermite_gauss(0, g);
  auto chirped = apply_spectral_lens(h0, 1.0);
  CHECK(rms_width(chirped) / rms_width(h0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  // The temporal lens only touches phase.
  auto tl = apply_temporal_lens(h0, 0.8);
  CHECK(rms_width(tl) == doctest::Approx(rms_width(h0)).epsilon(1e-14));
  CHECK(tl.samples[g.n / 2 + 50] == std::polar(std::abs(h0.samples[g.n / 2 + 50]),
                                               -0.4 * g.time(g.n / 2 + 50) * g.time(g.n / 2 + 50)));
  // Space-time duality: a spectral lens is a temporal lens conjugated by the Fourier transform.
  auto via_spectrum = apply_lens(h0, {LensKind::spectral, 0.6});
  auto s = to_spectrum(h0);
  for (std::size_t k = 0; k < s.grid.n; ++k) {
    s.samples[k] *= std::polar(1.0, -0.3 * s.grid.omega(k) * s.grid.omega(k));
  }
  CHECK(l2_distance(via_spectrum, from_spectrum(s)) < 1e-14);
}

TEST_CASE("lens guards reject aliasing and window overflow") {
  auto g = make_grid(256, 0.1);  // Nyquist ~31, half span 12.8
  auto h0 = hermite_gauss(0, g);
  CHECK(temporal_lens_margin(h0, 1.0) > 0.0);
  CHECK_THROWS_AS(apply_temporal_lens(h0, 10.0), DomainError);
  CHECK_THROWS_AS(apply_spectral_lens(h0, 5.0), DomainError);
  CHECK_NOTHROW(apply_spectral_lens(h0, 1.0));
  CHECK_THROWS_AS(apply_lens(h0, {LensKind::temporal, std::nan("")}), InvalidArgument);
}

TEST_CASE("H1 phase: lens and direct kernel give e^{-i phi} relative to H0") {
  auto g = reference_grid();
  auto h0 = hermite_gauss(0, g);
  auto h1 = hermite_gauss(1, g);
  for (auto method : {FrftMethod::lens_sequence, FrftMethod::direct_kernel}) {
    auto plan = make_plan(kPi / 2.0, method);
    const Complex g0 = overlap(h0, frft(h0, plan));
    const Complex g1 = overlap(h1, frft(h1, plan));
    CHECK(std::abs(g1 / g0 - Complex(0.0, -1.0)) < 1e-10);
  }
  // to_spectrum carries the opposite sign; recorded here so a flip on either side is caught.
  auto s1 = to_spectrum(h1);
  auto h1_on_omega = hermite_gauss(1, TimeGrid{s1.grid.omega_start, s1.grid.domega, s1.grid.n});
  const std::size_t k = s1.grid.n / 2 + 20;
  CHECK(std::abs(s1.samples[k] / h1_on_omega.samples[k] - Complex(0.0, 1.0)) < 1e-10);
}

TEST_CASE("pi/2 equals the reflected dense Fourier sum on n = 512") {
  const std::size_t n = 512;
  const double dt = std::sqrt(2.0 * kPi / n);  // makes the spectral grid coincide with the time grid
  auto g = make_grid(n, dt);
  for (auto& e : {cat_state(g, 2.0, 0.8), smooth_asymmetric(g)}) {
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = -g.time(j);
    SampledEnvelope want{g, oracle::dense_spectrum(e, w)};
    for (auto method : {FrftMethod::lens_sequence, FrftMethod::direct_kernel}) {
      auto got = frft(e, make_plan(kPi / 2.0, method));
      CHECK(phase_aligned_distance(want, got) < 1e-9);
    }
    CHECK(phase_aligned_distance(want, reflect(SampledEnvelope{g, to_spectrum(e).samples})) < 1e-12);
  }
}

TEST_CASE("unitarity of both methods") {
  auto g = reference_grid();
  auto e = smooth_asymmetric(g);
  for (double phi : {0.2, -0.9, kPi / 2.0, 2.0 * kPi / 3.0, kPi, 4.0}) {
    auto lens = frft_lens_sequence(e, phi);
    CHECK(std::abs(lens.norm_squared() - 1.0) < 1e-9);
    auto direct = frft_direct_kernel(e, phi, reference_basis());
    CHECK(std::abs(direct.norm_squared() - 1.0) < 1e-9);
  }
}

TEST_CASE("oracle equivalence over signed angles") {
  auto g = reference_grid();
  std::vector<SampledEnvelope> inputs;
  for (int n = 0; n <= 10; ++n) inputs.push_back(hermite_gauss(n, g));
  inputs.push_back(cat_state(g, 7.0 / 4.2, 2.4 / 4.2));
  double worst = 0.0;
  for (double base : {kPi / 6.0, kPi / 4.0, kPi / 3.0, kPi / 2.0, 2.0 * kPi / 3.0}) {
    for (double phi : {base, -base}) {
      for (const auto& e : inputs) {
        auto lens = frft_lens_sequence(e, phi);
        auto direct = frft_direct_kernel(e, phi, reference_basis());
        worst = std::max(worst, phase_aligned_distance(direct, lens));
      }
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("additivity over small signed angles") {
  auto g = reference_grid();
  const std::vector<double> angles{kPi / 6.0, -kPi / 6.0, kPi / 4.0, -kPi / 4.0, kPi / 3.0, -kPi / 3.0};
  for (const auto& e : {smooth_asymmetric(g), cat_state(g, 1.0, 0.6)}) {
    for (double a : angles) {
      for (double b : angles) {
        auto two = frft_lens_sequence(frft_lens_sequence(e, a), b);
        auto one = frft_lens_sequence(e, a + b);
        CHECK(phase_aligned_distance(one, two) <= 1e-6);
      }
    }
  }
}

TEST_CASE("inverse transform restores the input") {
  auto g = reference_grid();
  auto e = smooth_asymmetric(g);
  for (double phi : {kPi / 6.0, kPi / 2.0, 2.0 * kPi / 3.0, 2.5}) {
    auto back = frft_lens_sequence(frft_lens_sequence(e, phi), -phi);
    CHECK(phase_aligned_distance(e, back) <= 1e-9);
    auto dback = frft_direct_kernel(frft_direct_kernel(e, phi, reference_basis()), -phi,
                                    reference_basis());
    CHECK(l2_distance(e, dback) <= 1e-9);
  }
}

TEST_CASE("eigenphase law -n phi") {
  auto g = reference_grid();
  for (double phi : {kPi / 6.0, kPi / 3.0, 2.0 * kPi / 3.0, -kPi / 4.0}) {
    auto h0 = hermite_gauss(0, g);
    const double global = std::arg(overlap(h0, frft_lens_sequence(h0, phi)));
    for (int n = 1; n <= 10; ++n) {
      auto hn = hermite_gauss(n, g);
      const Complex ov = overlap(hn, frft_lens_sequence(hn, phi));
      CHECK(std::abs(ov) > 1.0 - 1e-8);
      const double dev = std::remainder(std::arg(ov) - global + n * phi, 2.0 * kPi);
      CHECK(std::abs(dev) <= 1e-3);
    }
  }
}

TEST_CASE("periodicity and parity") {
  auto g = reference_grid();
  auto e = smooth_asymmetric(g);
  CHECK(l2_distance(e, frft_direct_kernel(e, 2.0 * kPi, reference_basis())) <= 1e-9);
  CHECK(l2_distance(e, frft_lens_sequence(e, 2.0 * kPi)) <= 1e-12);

  auto h0 = hermite_gauss(0, g);
  CHECK(l2_distance(h0, frft_direct_kernel(h0, kPi, reference_basis())) <= 1e-9);
  auto cat = cat_state(g, 1.5, 0.5);
  CHECK(phase_aligned_distance(cat, frft_lens_sequence(cat, kPi)) <= 1e-9);
  // Odd inputs and generic inputs pick up the parity operator.
  CHECK(l2_distance(reflect(e), frft_direct_kernel(e, kPi, reference_basis())) <= 1e-9);
  CHECK(phase_aligned_distance(reflect(e), frft_lens_sequence(e, kPi)) <= 1e-9);
}

TEST_CASE("direct kernel refuses inputs outside the basis") {
  auto g = reference_grid();
  auto spike = zeros(g);
  spike.samples[g.n / 2] = 1.0;
  CHECK_THROWS_AS(frft_direct_kernel(spike, 0.3, reference_basis()), DomainError);
  HermiteBasis small(g, 4);
  CHECK_THROWS_AS(frft_direct_kernel(hermite_gauss(6, g), 0.3, small), DomainError);
  CHECK_NOTHROW(frft_direct_kernel(hermite_gauss(4, g), 0.3, small));
  CHECK(default_basis_size(make_grid(64, 0.1)) == 0);
  CHECK(default_basis_size(g) == 256);
}
