#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chronofrft/detection.hpp"
#include "chronofrft/frft.hpp"
#include "chronofrft/memory.hpp"
#include "chronofrft/signal.hpp"

namespace chronofrft {

/// F_n = <H^G_n, out> for n = 0..n_max, with the basis centered at `center`
/// and scaled by `width`.
std::vector<Complex> decompose(const SampledEnvelope& out, double center, double width, int n_max);

/// F[n][m]: projection mode n (row), input mode m (column).
struct OverlapMatrix {
  int n_max = 0;
  double phi = 0.0;
  std::vector<Complex> coeffs;

  std::size_t size() const { return static_cast<std::size_t>(n_max) + 1; }
  Complex at(std::size_t n, std::size_t m) const { return coeffs[n * size() + m]; }
  Complex& at(std::size_t n, std::size_t m) { return coeffs[n * size() + m]; }
  /// |F[n][m]|^2, the bar height in a transition histogram.
  double fidelity(std::size_t n, std::size_t m) const { return std::norm(at(n, m)); }
  double column_power(std::size_t m) const;
  double off_diagonal_power(std::size_t m) const;
};

enum class PipelineKind { ideal, memory_channel, full_with_detection };

struct PipelineConfig {
  PipelineKind kind = PipelineKind::ideal;
  TimeGrid grid = reference_grid();
  MemoryParams memory = memory_preset("gem-experiment");
  DetectionConfig detection;
  /// Split angles beyond pi/2 in the ideal pipeline. Memory pipelines store
  /// once, so they use a single stage whenever |phi| < pi.
  bool split_stages = true;
  double center = 0.0;
  double width = 1.0;
};

/// 4 (2 n_max + 1): the area spanned by the turning points of H^G_{n_max}.
double required_time_bandwidth(int n_max);

FrftPlan pipeline_plan(double phi, const PipelineConfig& cfg);

/// Sends one envelope through the configured pipeline. `stream` selects the
/// detection substream so separate inputs get independent noise.
SampledEnvelope run_pipeline(const SampledEnvelope& input, double phi, const PipelineConfig& cfg,
                             std::uint64_t stream = 0);

/// Runs H^G_0..H^G_{n_max} through the pipeline and decomposes each output.
OverlapMatrix transition_matrix(double phi, const PipelineConfig& cfg, int n_max);

struct ModePhase {
  int n = 0;
  double phase = 0.0;
};

std::vector<ModePhase> diagonal_phases(const OverlapMatrix& m);

/// phase(n) = phi0 + n * slope; measured FrFT angle is -slope.
struct AngleFit {
  double phi0 = 0.0;
  double slope = 0.0;
  double sigma_phi0 = 0.0;
  double sigma_slope = 0.0;
  std::vector<double> residuals;

  double measured_angle() const { return -slope; }
};

/// Sorts by mode index and removes 2 pi jumps between neighbours. Throws
/// DomainError when a step sits at +-pi and the direction is ambiguous.
std::vector<ModePhase> unwrap_phases(std::vector<ModePhase> phases);

/// Least-squares line through the unwrapped phases; needs >= 3 modes.
AngleFit fit_angle(std::vector<ModePhase> phases);

struct PhaseHistogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  double circular_mean = 0.0;
  /// Mean resultant length R.
  double resultant_length = 0.0;
  /// sqrt(-2 ln R).
  double circular_std = 0.0;
};

/// Bins arg(F) over [-pi, pi).
PhaseHistogram phase_histogram(std::span<const Complex> values, std::size_t bins);

}  // namespace chronofrft
