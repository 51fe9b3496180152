#include "chronofrft/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "chronofrft/errors.hpp"
#include "chronofrft/fft.hpp"

namespace chronofrft {
namespace {

// exp(2 pi i frac) with the argument reduced to [0, 1) first, so the phase
// stays accurate when j * k products get large.
Complex unit_phasor_turns(double turns) {
  double frac = turns - std::floor(turns);
  return std::polar(1.0, 2.0 * kPi * frac);
}

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

double sum_squares(const std::vector<Complex>& v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return acc;
}

void require_same_grid(const SampledEnvelope& a, const SampledEnvelope& b) {
  if (!(a.grid == b.grid) || a.samples.size() != b.samples.size()) {
    throw InvalidArgument("envelopes live on different time grids");
  }
}

void check_edge_truncation(const std::vector<Complex>& samples, const char* what) {
  const std::size_t n = samples.size();
  const std::size_t edge = std::max<std::size_t>(1, n / 100);
  double total = sum_squares(samples);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DomainError(std::string(what) + ": envelope vanishes or overflows on this grid");
  }
  double outer = 0.0;
  for (std::size_t j = 0; j < edge; ++j) {
    outer += std::norm(samples[j]) + std::norm(samples[n - 1 - j]);
  }
  if (outer > 1e-8 * total) {
    throw DomainError(std::string(what) + ": support does not fit the grid (" +
                      std::to_string(outer / total) + " of the norm in the outer 1%)");
  }
}

void normalize_in_place(SampledEnvelope& e) {
  double nrm = e.norm();
  for (auto& z : e.samples) z /= nrm;
}

double radius_from_pairs(std::vector<std::pair<double, double>> pos_energy, double tail) {
  double total = 0.0;
  for (const auto& [r, w] : pos_energy) total += w;
  if (total <= 0.0) return 0.0;
  std::sort(pos_energy.begin(), pos_energy.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  double outside = 0.0;
  for (const auto& [r, w] : pos_energy) {
    outside += w;
    if (outside > tail * total) return r;
  }
  return 0.0;
}

}  // namespace

bool TimeGrid::symmetric() const {
  return std::abs(t_start + half_span()) <= 1e-12 * std::max(1.0, half_span());
}

double SampledEnvelope::norm_squared() const { return sum_squares(samples) * grid.dt; }
double SampledEnvelope::norm() const { return std::sqrt(norm_squared()); }
double SpectralEnvelope::norm_squared() const { return sum_squares(samples) * grid.domega; }
double SpectralEnvelope::norm() const { return std::sqrt(norm_squared()); }

TimeGrid make_grid(std::size_t n, double dt) {
  if (!is_power_of_two(n)) {
    throw InvalidArgument("grid size must be a power of two >= 2, got " + std::to_string(n));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgument("grid step must be positive");
  }
  return TimeGrid{-dt * static_cast<double>(n) / 2.0, dt, n};
}

TimeGrid reference_grid() { return make_grid(4096, 0.02); }

SpectralGrid spectral_grid(const TimeGrid& grid) {
  const double domega = 2.0 * kPi / (static_cast<double>(grid.n) * grid.dt);
  return SpectralGrid{-kPi / grid.dt, domega, grid.n, grid.t_start};
}

SampledEnvelope zeros(const TimeGrid& grid) {
  return SampledEnvelope{grid, std::vector<Complex>(grid.n)};
}

SpectralEnvelope to_spectrum(const SampledEnvelope& e) {
  const TimeGrid& g = e.grid;
  const std::size_t n = g.n;
  SpectralEnvelope out{spectral_grid(g), e.samples};
  for (std::size_t j = 1; j < n; j += 2) out.samples[j] = -out.samples[j];
  fft::transform(out.samples, fft::Direction::backward);

  // exp(i w0 t0) exp(i k dw t0) with w0 = -pi/dt, dw t0 = 2 pi t0 / (n dt).
  const double origin_turns = -0.5 * g.t_start / g.dt;
  const double step_turns = g.t_start / (static_cast<double>(n) * g.dt);
  const double scale = g.dt / std::sqrt(2.0 * kPi);
  for (std::size_t k = 0; k < n; ++k) {
    double turns = origin_turns + static_cast<double>(k) * step_turns;
    out.samples[k] *= scale * unit_phasor_turns(turns);
  }
  return out;
}

SampledEnvelope from_spectrum(const SpectralEnvelope& s) {
  const SpectralGrid& sg = s.grid;
  const std::size_t n = sg.n;
  const double dt = 2.0 * kPi / (static_cast<double>(n) * sg.domega);
  const double t0 = sg.time_origin;
  SampledEnvelope out{TimeGrid{t0, dt, n}, s.samples};

  const double step_turns = t0 / (static_cast<double>(n) * dt);
  for (std::size_t k = 0; k < n; ++k) {
    out.samples[k] *= unit_phasor_turns(-static_cast<double>(k) * step_turns);
  }
  fft::transform(out.samples, fft::Direction::forward);
  const Complex global = unit_phasor_turns(0.5 * t0 / dt) * (sg.domega / std::sqrt(2.0 * kPi));
  for (std::size_t j = 0; j < n; ++j) {
    out.samples[j] *= (j % 2 == 0) ? global : -global;
  }
  return out;
}

std::vector<std::vector<double>> hermite_function_table(int n_max, const std::vector<double>& x) {
  if (n_max < 0) throw InvalidArgument("mode index must be non-negative");
  const std::size_t m = x.size();
  std::vector<std::vector<double>> table(static_cast<std::size_t>(n_max) + 1,
                                         std::vector<double>(m));
  const double c0 = std::pow(kPi, -0.25);
  for (std::size_t j = 0; j < m; ++j) table[0][j] = c0 * std::exp(-0.5 * x[j] * x[j]);
  if (n_max >= 1) {
    for (std::size_t j = 0; j < m; ++j) table[1][j] = std::sqrt(2.0) * x[j] * table[0][j];
  }
  for (int k = 1; k < n_max; ++k) {
    const double a = std::sqrt(2.0 / (k + 1.0));
    const double b = std::sqrt(k / (k + 1.0));
    auto& next = table[k + 1];
    const auto& cur = table[k];
    const auto& prev = table[k - 1];
    for (std::size_t j = 0; j < m; ++j) next[j] = a * x[j] * cur[j] - b * prev[j];
  }
  return table;
}

SampledEnvelope hermite_gauss(int n, const TimeGrid& grid, double center, double width) {
  if (n < 0) throw InvalidArgument("Hermite-Gaussian mode index must be >= 0");
  if (!(width > 0.0)) throw InvalidArgument("Hermite-Gaussian width must be positive");
  std::vector<double> x(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) x[j] = (grid.time(j) - center) / width;
  auto table = hermite_function_table(n, x);
  SampledEnvelope e = zeros(grid);
  const double amp = 1.0 / std::sqrt(width);
  for (std::size_t j = 0; j < grid.n; ++j) e.samples[j] = amp * table[n][j];
  check_edge_truncation(e.samples, "hermite_gauss");
  normalize_in_place(e);
  return e;
}

SampledEnvelope cat_state(const TimeGrid& grid, double mu, double s) {
  if (!(s > 0.0)) throw InvalidArgument("cat_state width must be positive");
  if (!std::isfinite(mu)) throw InvalidArgument("cat_state separation must be finite");
  const double norm =
      std::sqrt(2.0 * std::sqrt(kPi) * s * (1.0 + std::exp(-mu * mu / (s * s))));
  SampledEnvelope e = zeros(grid);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double q = grid.time(j);
    const double a = (q - mu) / s;
    const double b = (q + mu) / s;
    e.samples[j] = (std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b)) / norm;
  }
  check_edge_truncation(e.samples, "cat_state");
  normalize_in_place(e);
  return e;
}

SampledEnvelope gaussian_pulse(const TimeGrid& grid, double center, double width, double offset) {
  if (!(width > 0.0)) throw InvalidArgument("pulse width must be positive");
  SampledEnvelope e = zeros(grid);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double q = grid.time(j);
    const double a = (q - center) / width;
    e.samples[j] = std::exp(-0.5 * a * a) * std::polar(1.0, -offset * q);
  }
  check_edge_truncation(e.samples, "gaussian_pulse");
  normalize_in_place(e);
  return e;
}

Complex overlap(const SampledEnvelope& a, const SampledEnvelope& b) {
  require_same_grid(a, b);
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < a.samples.size(); ++j) acc += std::conj(a.samples[j]) * b.samples[j];
  return acc * a.grid.dt;
}

double l2_distance(const SampledEnvelope& a, const SampledEnvelope& b) {
  require_same_grid(a, b);
  double acc = 0.0;
  for (std::size_t j = 0; j < a.samples.size(); ++j) acc += std::norm(a.samples[j] - b.samples[j]);
  return std::sqrt(acc * a.grid.dt);
}

SampledEnvelope align_global_phase(const SampledEnvelope& reference, const SampledEnvelope& e) {
  Complex ov = overlap(reference, e);
  if (std::abs(ov) == 0.0) return e;
  return scaled(e, std::conj(ov) / std::abs(ov));
}

double phase_aligned_distance(const SampledEnvelope& reference, const SampledEnvelope& e) {
  return l2_distance(reference, align_global_phase(reference, e));
}

SampledEnvelope reflect(const SampledEnvelope& e) {
  if (!e.grid.symmetric()) throw InvalidArgument("reflect requires a grid symmetric about 0");
  SampledEnvelope out = e;
  const std::size_t n = e.grid.n;
  for (std::size_t j = 0; j < n; ++j) out.samples[j] = e.samples[(n - j) % n];
  return out;
}

SampledEnvelope scaled(const SampledEnvelope& e, Complex factor) {
  SampledEnvelope out = e;
  for (auto& z : out.samples) z *= factor;
  return out;
}

double support_radius(const SampledEnvelope& e, double tail) {
  std::vector<std::pair<double, double>> pe(e.samples.size());
  for (std::size_t j = 0; j < pe.size(); ++j) {
    pe[j] = {std::abs(e.grid.time(j)), std::norm(e.samples[j])};
  }
  return radius_from_pairs(std::move(pe), tail);
}

double support_radius(const SpectralEnvelope& s, double tail) {
  std::vector<std::pair<double, double>> pe(s.samples.size());
  for (std::size_t k = 0; k < pe.size(); ++k) {
    pe[k] = {std::abs(s.grid.omega(k)), std::norm(s.samples[k])};
  }
  return radius_from_pairs(std::move(pe), tail);
}

namespace {

template <typename Axis>
double rms_width(const std::vector<Complex>& v, Axis axis) {
  double w = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double p = std::norm(v[j]);
    const double x = axis(j);
    w += p;
    m1 += p * x;
    m2 += p * x * x;
  }
  if (w <= 0.0) return 0.0;
  m1 /= w;
  return std::sqrt(std::max(0.0, m2 / w - m1 * m1));
}

}  // namespace

double time_bandwidth_estimate(const SampledEnvelope& e) {
  const double st = rms_width(e.samples, [&](std::size_t j) { return e.grid.time(j); });
  SpectralEnvelope s = to_spectrum(e);
  const double sw = rms_width(s.samples, [&](std::size_t k) { return s.grid.omega(k); });
  return 8.0 * st * sw;
}

}  // namespace chronofrft
