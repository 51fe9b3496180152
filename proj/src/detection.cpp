#include "chronofrft/detection.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "chronofrft/errors.hpp"

namespace chronofrft {
namespace {

constexpr std::uint64_t kLoPhaseStream = 0x4c4f5048ULL;  // "LOPH"

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(derive_seed(seed, stream));
}

std::size_t reference_samples(const TimeGrid& grid, const DetectionConfig& cfg) {
  if (cfg.reference_length > 0) return cfg.reference_length;
  return std::max<std::size_t>(64, static_cast<std::size_t>(
                                       std::ceil(16.0 * cfg.reference_width / grid.dt)));
}

// 2 * [band (0, 2 carrier) of z] * exp(+i carrier q)
SampledEnvelope demodulate(SampledEnvelope z, double carrier) {
  SpectralEnvelope s = to_spectrum(z);
  for (std::size_t k = 0; k < s.samples.size(); ++k) {
    const double w = s.grid.omega(k);
    if (!(w > 0.0 && w < 2.0 * carrier)) s.samples[k] = Complex{};
  }
  SampledEnvelope out = from_spectrum(s);
  for (std::size_t j = 0; j < out.samples.size(); ++j) {
    out.samples[j] *= 2.0 * std::polar(1.0, carrier * out.grid.time(j));
  }
  return out;
}

}  // namespace

void DetectionConfig::validate(const TimeGrid& grid) const {
  if (shots < 1) throw InvalidArgument("detection needs at least one shot");
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise sigma must be non-negative");
  if (!(carrier >= 0.0)) throw InvalidArgument("beat-note carrier must be non-negative");
  if (carrier > kPi / (2.0 * grid.dt) * (1.0 + 1e-12)) {
    throw InvalidArgument("beat-note carrier exceeds pi / (2 dt); the sidebands would alias");
  }
  if (!(reference_width > 0.0)) throw InvalidArgument("reference width must be positive");
  if (!(reference_amplitude >= 0.0)) throw InvalidArgument("reference amplitude must be >= 0");
}

DetectionConfig calibrated_detection(const TimeGrid& grid, std::uint64_t seed) {
  DetectionConfig cfg;
  cfg.shots = 200;
  cfg.seed = seed;
  cfg.carrier = kPi / (4.0 * grid.dt);
  cfg.reference_amplitude = 5.0;
  // Single-shot overlap noise scales as sigma * sqrt(dt); keep it grid-independent.
  cfg.noise_sigma = 0.9 * std::sqrt(0.02 / grid.dt);
  return cfg;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

TimeGrid reference_window(const TimeGrid& grid, const DetectionConfig& cfg) {
  const std::size_t n = reference_samples(grid, cfg);
  return TimeGrid{-0.5 * grid.dt * static_cast<double>(n), grid.dt, n};
}

std::vector<Complex> reference_field(const TimeGrid& grid, const DetectionConfig& cfg) {
  const TimeGrid win = reference_window(grid, cfg);
  std::vector<Complex> r(win.n);
  if (cfg.reference_amplitude == 0.0) return r;
  SampledEnvelope pulse = gaussian_pulse(win, 0.0, cfg.reference_width, cfg.reference_offset);
  for (std::size_t j = 0; j < win.n; ++j) {
    r[j] = cfg.reference_amplitude * pulse.samples[j] * std::polar(1.0, -cfg.carrier * win.time(j));
  }
  return r;
}

double lo_phase_for_shot(const DetectionConfig& cfg, std::size_t shot_index) {
  std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
  if (cfg.lo_phase_model == LoPhaseModel::slow_drift) {
    auto rng = stream_rng(cfg.seed ^ kLoPhaseStream, 0);
    const double theta0 = uni(rng);
    return std::fmod(theta0 + cfg.drift_rate * static_cast<double>(shot_index), 2.0 * kPi);
  }
  auto rng = stream_rng(cfg.seed ^ kLoPhaseStream, shot_index + 1);
  return uni(rng);
}

HomodyneShot simulate_shot(const SampledEnvelope& e, const DetectionConfig& cfg, double lo_phase,
                           std::size_t shot_index) {
  cfg.validate(e.grid);
  auto rng = stream_rng(cfg.seed, shot_index);
  std::normal_distribution<double> noise(0.0, 1.0);
  const bool noisy = cfg.noise_sigma > 0.0;

  HomodyneShot shot;
  shot.grid = e.grid;
  shot.lo_phase_true = lo_phase;
  shot.trace.resize(e.grid.n);
  const Complex lo = std::polar(1.0, -lo_phase);
  for (std::size_t j = 0; j < e.grid.n; ++j) {
    const Complex beat = std::polar(1.0, -cfg.carrier * e.grid.time(j));
    double x = (e.samples[j] * beat * lo).real();
    if (noisy) x += cfg.noise_sigma * noise(rng);
    shot.trace[j] = x;
  }
  const auto ref = reference_field(e.grid, cfg);
  shot.reference_segment.resize(ref.size());
  for (std::size_t j = 0; j < ref.size(); ++j) {
    double y = (ref[j] * lo).real();
    if (noisy) y += cfg.noise_sigma * noise(rng);
    shot.reference_segment[j] = y;
  }
  return shot;
}

std::vector<HomodyneShot> simulate_shots(const SampledEnvelope& e, const DetectionConfig& cfg) {
  cfg.validate(e.grid);
  std::vector<HomodyneShot> shots;
  shots.reserve(cfg.shots);
  for (std::size_t k = 0; k < cfg.shots; ++k) {
    shots.push_back(simulate_shot(e, cfg, lo_phase_for_shot(cfg, k), k));
  }
  return shots;
}

double estimate_lo_phase(const HomodyneShot& shot, const DetectionConfig& cfg) {
  const auto ref = reference_field(shot.grid, cfg);
  if (ref.size() != shot.reference_segment.size()) {
    throw InvalidArgument("reference segment length does not match the configured window");
  }
  // y = a cos(theta) + b sin(theta), a = Re r, b = Im r.
  double aa = 0.0, bb = 0.0, ab = 0.0, ya = 0.0, yb = 0.0;
  for (std::size_t j = 0; j < ref.size(); ++j) {
    const double a = ref[j].real(), b = ref[j].imag(), y = shot.reference_segment[j];
    aa += a * a;
    bb += b * b;
    ab += a * b;
    ya += y * a;
    yb += y * b;
  }
  const double tr = aa + bb;
  const double det = aa * bb - ab * ab;
  if (!(tr > 0.0) || det <= 1e-12 * tr * tr) {
    throw DomainError("reference pulse is degenerate; LO phase cannot be fitted");
  }
  const double lambda_min = 0.5 * tr - std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  const double floor = 9.0 * cfg.noise_sigma * cfg.noise_sigma;
  if (lambda_min <= floor) {
    throw DomainError("reference pulse power is below the noise floor");
  }
  const double c = (bb * ya - ab * yb) / det;
  const double s = (aa * yb - ab * ya) / det;
  return std::atan2(s, c);
}

SampledEnvelope demodulate_shot(const HomodyneShot& shot, const DetectionConfig& cfg) {
  if (!(cfg.carrier > 0.0)) {
    throw DomainError("a single-quadrature shot has no complex estimate; set a beat-note carrier");
  }
  const double theta = estimate_lo_phase(shot, cfg);
  SampledEnvelope z = zeros(shot.grid);
  const Complex rot = std::polar(1.0, theta);
  for (std::size_t j = 0; j < shot.trace.size(); ++j) z.samples[j] = shot.trace[j] * rot;
  return demodulate(std::move(z), cfg.carrier);
}

SampledEnvelope recover_envelope(const std::vector<HomodyneShot>& shots,
                                 const DetectionConfig& cfg) {
  if (shots.empty()) throw InvalidArgument("recover_envelope needs at least one shot");
  const TimeGrid grid = shots.front().grid;
  cfg.validate(grid);
  for (const auto& s : shots) {
    if (!(s.grid == grid) || s.trace.size() != grid.n) {
      throw InvalidArgument("shots were recorded on different grids");
    }
  }
  const std::size_t n = grid.n;
  const double inv = 1.0 / static_cast<double>(shots.size());

  if (cfg.carrier > 0.0) {
    SampledEnvelope z = zeros(grid);
    for (const auto& s : shots) {
      const Complex rot = std::polar(inv, estimate_lo_phase(s, cfg));
      for (std::size_t j = 0; j < n; ++j) z.samples[j] += s.trace[j] * rot;
    }
    return demodulate(std::move(z), cfg.carrier);
  }

  double cc = 0.0, ss = 0.0, cs = 0.0;
  std::vector<double> xc(n, 0.0), xs(n, 0.0);
  for (const auto& s : shots) {
    const double theta = estimate_lo_phase(s, cfg);
    const double c = std::cos(theta), sn = std::sin(theta);
    cc += c * c;
    ss += sn * sn;
    cs += c * sn;
    for (std::size_t j = 0; j < n; ++j) {
      xc[j] += s.trace[j] * c;
      xs[j] += s.trace[j] * sn;
    }
  }
  const double det = cc * ss - cs * cs;
  const double m = static_cast<double>(shots.size());
  if (det <= 1e-9 * m * m) {
    throw DomainError("single-quadrature shots need at least two distinct LO phases");
  }
  SampledEnvelope out = zeros(grid);
  for (std::size_t j = 0; j < n; ++j) {
    const double re = (ss * xc[j] - cs * xs[j]) / det;
    const double im = (cc * xs[j] - cs * xc[j]) / det;
    out.samples[j] = {re, im};
  }
  return out;
}

}  // namespace chronofrft
