#include "chronofrft/memory.hpp"

#include <algorithm>
#include <cmath>

#include "chronofrft/errors.hpp"

namespace chronofrft {
namespace {

// tan(phi/2) through the half-angle identity; std::tan(pi/4) lands one ulp
// below 1, which would make TB' at phi = pi/2 miss 2 TB.
double half_angle_tangent(double phi) {
  const double s = std::sin(phi), c = std::cos(phi);
  return std::abs(phi) <= 0.5 * kPi ? s / (1.0 + c) : (1.0 - c) / s;
}

MemoryParams base_gem() {
  MemoryParams p;
  p.od = 85.0;
  p.gamma = 9.1e3;
  p.tau_seconds = 4.2e-6;
  p.tb = 110.0;
  p.length = 0.01;
  // beta L = B' at the largest angle used in the experiment (2 pi / 3).
  p.beta = std::sqrt(p.tb) / p.tau_seconds * (1.0 + half_angle_tangent(2.0 * kPi / 3.0)) / p.length;
  return p;
}

}  // namespace

void MemoryParams::validate() const {
  if (!(od > 0.0)) throw InvalidArgument("optical density must be positive");
  if (!(gamma >= 0.0)) throw InvalidArgument("decay rate must be non-negative");
  if (!(tau_seconds > 0.0)) throw InvalidArgument("time unit tau must be positive");
  if (!(length > 0.0)) throw InvalidArgument("cloud length must be positive");
  if (!(tb > 0.0)) throw InvalidArgument("time-bandwidth area must be positive");
  if (!(beta >= 0.0)) throw InvalidArgument("gradient must be non-negative");
  if (!std::isfinite(parasitic_d_omega) || !std::isfinite(compensation_d_omega)) {
    throw InvalidArgument("spectral phase strengths must be finite");
  }
  if (efficiency_override && !(*efficiency_override > 0.0 && *efficiency_override <= 1.0)) {
    throw InvalidArgument("efficiency override must lie in (0, 1]");
  }
}

double MemoryParams::time_window() const { return std::sqrt(tb) * tau_seconds; }

MemoryParams memory_preset(std::string_view name) {
  MemoryParams p = base_gem();
  if (name == "gem") return p;
  if (name == "gem-experiment") {
    p.parasitic_d_omega = 0.15;
    p.compensation_d_omega = 0.15;
    return p;
  }
  if (name == "gem-decay") {
    p.decay_model = DecayModel::formula_times_exp_decay;
    return p;
  }
  if (name == "ideal") {
    p.efficiency_override = 1.0;
    return p;
  }
  throw InvalidArgument("unknown memory preset '" + std::string(name) + "'");
}

std::vector<std::string> memory_preset_names() {
  return {"gem", "gem-experiment", "gem-decay", "ideal"};
}

BandwidthBudget bandwidth_after_lens(double tb, double phi) {
  if (!(tb > 0.0)) throw InvalidArgument("time-bandwidth area must be positive");
  if (!std::isfinite(phi) || std::abs(phi) >= kPi) {
    throw DomainError("bandwidth expansion is defined for phi in (-pi, pi)");
  }
  return {tb, phi, tb * (1.0 + std::abs(half_angle_tangent(phi)))};
}

double storage_efficiency(const MemoryParams& p, double tb_prime) {
  if (!(tb_prime > 0.0)) throw InvalidArgument("TB' must be positive");
  double eta = -std::expm1(-2.0 * kPi * p.od / tb_prime);
  if (p.decay_model == DecayModel::formula_times_exp_decay) {
    eta *= std::exp(-2.0 * p.gamma * p.time_window());
  }
  return eta;
}

double stored_bandwidth(const MemoryParams& p, double phi) {
  return std::sqrt(p.tb) / p.tau_seconds * (1.0 + std::abs(half_angle_tangent(phi)));
}

double widest_stage_angle(const FrftPlan& plan) {
  double widest = 0.0;
  for (const auto& st : plan.stages) {
    if (std::abs(st.phi) > std::abs(widest)) widest = st.phi;
  }
  return widest;
}

void check_bandwidth_budget(const MemoryParams& p, const FrftPlan& plan) {
  const double phi = widest_stage_angle(plan);
  const double need = stored_bandwidth(p, phi);
  const double have = p.beta * p.length;
  if (have < need * (1.0 - 1e-12)) {
    throw DomainError("memory bandwidth beta*L = " + std::to_string(have) +
                      " rad/s is below the stored bandwidth B' = " + std::to_string(need) +
                      " rad/s for phi = " + std::to_string(phi));
  }
}

double channel_efficiency(const MemoryParams& p, const FrftPlan& plan) {
  if (p.efficiency_override) return *p.efficiency_override;
  return storage_efficiency(p, bandwidth_after_lens(p.tb, widest_stage_angle(plan)).tb_prime);
}

SampledEnvelope apply_readout_lens(const SampledEnvelope& e, double d_t) {
  const double lab_rate = -d_t;
  return apply_temporal_lens(e, -lab_rate);
}

SampledEnvelope apply_memory_channel(const SampledEnvelope& e, const MemoryParams& p,
                                     const FrftPlan& plan) {
  p.validate();
  check_bandwidth_budget(p, plan);
  const double amplitude = std::sqrt(channel_efficiency(p, plan));

  SampledEnvelope out = e;
  bool first = true;
  for (const auto& st : plan.stages) {
    out = apply_temporal_lens(out, st.d_t);
    double spectral = st.d_omega;
    if (first) spectral += p.parasitic_d_omega - p.compensation_d_omega;
    out = apply_spectral_lens(out, spectral);
    if (first) out = scaled(out, amplitude);
    out = apply_readout_lens(out, st.d_t);
    first = false;
  }
  if (plan.stages.empty()) out = scaled(out, amplitude);
  return out;
}

}  // namespace chronofrft
