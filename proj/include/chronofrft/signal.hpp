#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace chronofrft {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Uniform grid of dimensionless time q = t / tau.
struct TimeGrid {
  double t_start = 0.0;
  double dt = 1.0;
  std::size_t n = 0;

  double time(std::size_t j) const { return t_start + static_cast<double>(j) * dt; }
  double t_end() const { return time(n - 1); }
  double half_span() const { return 0.5 * dt * static_cast<double>(n); }
  bool symmetric() const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// Frequency grid (values of omega * tau) conjugate to a TimeGrid.
struct SpectralGrid {
  double omega_start = 0.0;
  double domega = 1.0;
  std::size_t n = 0;
  /// Start of the time grid this spectrum was taken from; needed to invert.
  double time_origin = 0.0;

  double omega(std::size_t k) const { return omega_start + static_cast<double>(k) * domega; }

  friend bool operator==(const SpectralGrid&, const SpectralGrid&) = default;
};

struct SampledEnvelope {
  TimeGrid grid;
  std::vector<Complex> samples;

  double norm_squared() const;
  double norm() const;
};

struct SpectralEnvelope {
  SpectralGrid grid;
  std::vector<Complex> samples;

  double norm_squared() const;
  double norm() const;
};

/// Symmetric grid, t_start = -dt * n / 2. Throws InvalidArgument unless n is
/// a power of two >= 2 and dt > 0.
TimeGrid make_grid(std::size_t n, double dt);

/// n = 4096, dt = 0.02: wide enough for TB = 110 signals after the
/// 2pi/3 temporal lens with more than 2x Nyquist headroom.
TimeGrid reference_grid();

SpectralGrid spectral_grid(const TimeGrid& grid);

SampledEnvelope zeros(const TimeGrid& grid);

// Unitary continuous-kernel Fourier transform on the grid:
//   E~(w) = 1/sqrt(2 pi) * integral dq E(q) exp(+i w q)
// The frequency grid runs over [-pi/dt, pi/dt) with step 2 pi / (n dt).
SpectralEnvelope to_spectrum(const SampledEnvelope& e);
SampledEnvelope from_spectrum(const SpectralEnvelope& s);

/// Normalized Hermite-Gaussian H^G_n((q - center) / width) / sqrt(width).
/// Throws DomainError if more than 1e-8 of the norm sits in the outer 1% of
/// samples at either end of the grid.
SampledEnvelope hermite_gauss(int n, const TimeGrid& grid, double center = 0.0,
                              double width = 1.0);

/// Two Gaussian pulses of width s at +-mu, normalized including the
/// overlap term 1 + exp(-mu^2 / s^2).
SampledEnvelope cat_state(const TimeGrid& grid, double mu, double s);

/// Pure time-grid Gaussian pulse exp(-(q-center)^2 / (2 width^2)) with a
/// carrier exp(-i offset q), normalized. Used as a probe and reference.
SampledEnvelope gaussian_pulse(const TimeGrid& grid, double center, double width,
                               double offset = 0.0);

/// sum conj(a) b dt. Throws InvalidArgument on grid mismatch.
Complex overlap(const SampledEnvelope& a, const SampledEnvelope& b);

/// sqrt(sum |a - b|^2 dt).
double l2_distance(const SampledEnvelope& a, const SampledEnvelope& b);

/// Returns e multiplied by the unit phasor that maximizes |<reference, e>|,
/// i.e. removes the global phase of e relative to reference.
SampledEnvelope align_global_phase(const SampledEnvelope& reference,
                                   const SampledEnvelope& e);

/// l2_distance(reference, align_global_phase(reference, e)).
double phase_aligned_distance(const SampledEnvelope& reference, const SampledEnvelope& e);

/// Parity q -> -q on a symmetric grid (index j -> (n - j) mod n).
SampledEnvelope reflect(const SampledEnvelope& e);

SampledEnvelope scaled(const SampledEnvelope& e, Complex factor);

/// Smallest R such that the energy at |q| > R is below `tail` of the total.
double support_radius(const SampledEnvelope& e, double tail = 1e-12);
double support_radius(const SpectralEnvelope& s, double tail = 1e-12);

/// Time-bandwidth area 8 * sigma_t * sigma_w from the rms widths of |E|^2
/// and |E~|^2. Equals 4 (2n + 1) for H^G_n, the box spanned by its classical
/// turning points.
double time_bandwidth_estimate(const SampledEnvelope& e);

/// Table of normalized Hermite functions psi_k(x), k = 0..n_max, evaluated
/// by the three-term recurrence. Row k has values at every x.
std::vector<std::vector<double>> hermite_function_table(int n_max, const std::vector<double>& x);

}  // namespace chronofrft
