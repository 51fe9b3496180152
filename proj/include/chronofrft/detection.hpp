#pragma once

#include <cstdint>
#include <vector>

#include "chronofrft/signal.hpp"

namespace chronofrft {

enum class LoPhaseModel { uniform_random, slow_drift };

struct DetectionConfig {
  std::size_t shots = 200;
  /// Standard deviation of the additive shot noise per trace sample.
  double noise_sigma = 0.0;
  LoPhaseModel lo_phase_model = LoPhaseModel::uniform_random;
  /// LO phase step per shot for slow_drift, radians.
  double drift_rate = 0.0;
  std::uint64_t seed = 0;
  /// Beat-note offset between signal and LO in units of 1/tau. Zero means
  /// each shot records a single quadrature; positive values let a single
  /// trace carry both quadratures. Must not exceed pi / (2 dt).
  double carrier = 0.0;
  double reference_amplitude = 1.0;
  double reference_width = 1.0;
  /// Frequency offset of the reference pulse, so that its two quadratures
  /// are independent even without a carrier.
  double reference_offset = 4.0;
  /// Samples in the trailing reference window; 0 picks 16 widths.
  std::size_t reference_length = 0;

  void validate(const TimeGrid& grid) const;
};

/// Preset used by the reproduction runs: beat note at a quarter of Nyquist,
/// strong reference, and shot noise set so the single-shot overlap phase of
/// the H^G modes after the 2pi/3 memory channel scatters by about 0.2 rad.
DetectionConfig calibrated_detection(const TimeGrid& grid, std::uint64_t seed);

struct HomodyneShot {
  TimeGrid grid;
  std::vector<double> trace;
  double lo_phase_true = 0.0;
  /// Trace of the trailing reference pulse on its own window (same dt).
  std::vector<double> reference_segment;
};

/// Deterministic per-stream seed (splitmix64 of seed and stream index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// The window the reference pulse is recorded on: same dt, centered at 0.
TimeGrid reference_window(const TimeGrid& grid, const DetectionConfig& cfg);

/// Reference field as seen by the detector before the LO phase, including
/// the beat-note carrier.
std::vector<Complex> reference_field(const TimeGrid& grid, const DetectionConfig& cfg);

/// LO phase of shot k under the configured model.
double lo_phase_for_shot(const DetectionConfig& cfg, std::size_t shot_index);

/// trace = Re[e(q) exp(-i carrier q) exp(-i lo_phase)] + N(0, sigma^2).
/// Noise is drawn from the substream (cfg.seed, shot_index).
HomodyneShot simulate_shot(const SampledEnvelope& e, const DetectionConfig& cfg, double lo_phase,
                           std::size_t shot_index = 0);

std::vector<HomodyneShot> simulate_shots(const SampledEnvelope& e, const DetectionConfig& cfg);

/// Least-squares fit of the reference segment against the two quadratures
/// of the known reference. Throws DomainError when the reference is
/// degenerate or its power is below the noise floor.
double estimate_lo_phase(const HomodyneShot& shot, const DetectionConfig& cfg);

/// Complex envelope from a single beat-note shot (requires carrier > 0).
SampledEnvelope demodulate_shot(const HomodyneShot& shot, const DetectionConfig& cfg);

/// Removes each shot's estimated LO phase and averages. With a carrier the
/// phase-corrected traces are averaged and demodulated; without one the two
/// quadratures are solved per sample by least squares across shots, which
/// needs at least two distinct LO phases.
SampledEnvelope recover_envelope(const std::vector<HomodyneShot>& shots,
                                 const DetectionConfig& cfg);

}  // namespace chronofrft
