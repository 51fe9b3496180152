#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chronofrft/frft.hpp"
#include "chronofrft/signal.hpp"

namespace chronofrft {

enum class DecayModel { formula_only, formula_times_exp_decay };

/// Gradient-echo memory operating point. Lens powers are dimensionless,
/// physical quantities are SI.
struct MemoryParams {
  double od = 85.0;
  /// Coherence decay rate induced by the coupling beam, Hz.
  double gamma = 9.1e3;
  double tau_seconds = 4.2e-6;
  /// Magnetic gradient expressed as frequency shift per length, rad/s per m.
  double beta = 0.0;
  double length = 0.01;
  /// Time-bandwidth area of the input signal before the temporal lens.
  double tb = 110.0;
  /// Quadratic spectral phase the storage adds on its own.
  double parasitic_d_omega = 0.0;
  /// Frequency lens applied to cancel it.
  double compensation_d_omega = 0.0;
  DecayModel decay_model = DecayModel::formula_only;
  /// Bypasses the efficiency formula (e.g. to pin a measured value).
  std::optional<double> efficiency_override;

  /// Throws InvalidArgument on non-physical values.
  void validate() const;
  /// Time window T = sqrt(tb) tau, seconds.
  double time_window() const;
};

/// Named operating points:
///   "gem"            - OD 85, Gamma 9.1 kHz, tau 4.2 us, TB 110, L 10 mm, beta
///                      matched to the 2pi/3 bandwidth, no parasitic phase.
///   "gem-experiment" - as "gem" with a 0.15 parasitic spectral phase and exact
///                      compensation.
///   "gem-decay"      - as "gem" with the exp(-2 Gamma T) decay factor.
///   "ideal"          - as "gem" with efficiency pinned to 1.
MemoryParams memory_preset(std::string_view name);
std::vector<std::string> memory_preset_names();

struct BandwidthBudget {
  double tb = 0.0;
  double phi = 0.0;
  double tb_prime = 0.0;
};

/// TB' = TB (1 + |tan(phi/2)|). tb > 0, phi in (-pi, pi).
BandwidthBudget bandwidth_after_lens(double tb, double phi);

/// eta = 1 - exp(-2 pi OD / TB'), times exp(-2 Gamma T) under the decay model.
double storage_efficiency(const MemoryParams& p, double tb_prime);

/// Stored bandwidth B' = sqrt(tb) / tau * (1 + |tan(phi/2)|), rad/s.
double stored_bandwidth(const MemoryParams& p, double phi);

/// Largest stage angle of a plan by magnitude; the one that sets TB'.
double widest_stage_angle(const FrftPlan& plan);

/// Throws DomainError unless beta * L >= B' for the plan's widest stage.
void check_bandwidth_budget(const MemoryParams& p, const FrftPlan& plan);

/// Efficiency the channel applies for this plan (override or formula).
double channel_efficiency(const MemoryParams& p, const FrftPlan& plan);

/// Read-out temporal lens. The coupling detuning runs at -d_t / tau^2 during
/// read-out because the echo leaves on a reversed time axis; in the signal
/// frame this is the same exp(-i d_t q^2 / 2) lens as at write-in.
SampledEnvelope apply_readout_lens(const SampledEnvelope& e, double d_t);

/// Write-in chirp, spectral phase (programmed + parasitic - compensation),
/// sqrt(eta) loss, read-out chirp; one pass per plan stage, with the
/// parasitic phase and the loss applied once per storage.
SampledEnvelope apply_memory_channel(const SampledEnvelope& e, const MemoryParams& p,
                                     const FrftPlan& plan);

}  // namespace chronofrft
