#include "chronofrft/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chronofrft/errors.hpp"

namespace chronofrft {

std::vector<Complex> decompose(const SampledEnvelope& out, double center, double width, int n_max) {
  if (n_max < 0) throw InvalidArgument("n_max must be non-negative");
  std::vector<Complex> f;
  f.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    f.push_back(overlap(hermite_gauss(n, out.grid, center, width), out));
  }
  return f;
}

double OverlapMatrix::column_power(std::size_t m) const {
  double acc = 0.0;
  for (std::size_t n = 0; n < size(); ++n) acc += fidelity(n, m);
  return acc;
}

double OverlapMatrix::off_diagonal_power(std::size_t m) const {
  return column_power(m) - fidelity(m, m);
}

double required_time_bandwidth(int n_max) { return 4.0 * (2.0 * n_max + 1.0); }

FrftPlan pipeline_plan(double phi, const PipelineConfig& cfg) {
  if (cfg.kind == PipelineKind::ideal) {
    return make_plan(phi, FrftMethod::lens_sequence, cfg.split_stages);
  }
  const bool single = std::abs(phi) < kPi;
  return make_plan(phi, FrftMethod::lens_sequence, !single);
}

SampledEnvelope run_pipeline(const SampledEnvelope& input, double phi, const PipelineConfig& cfg,
                             std::uint64_t stream) {
  const FrftPlan plan = pipeline_plan(phi, cfg);
  if (cfg.kind == PipelineKind::ideal) return frft_lens_sequence(input, plan);
  SampledEnvelope out = apply_memory_channel(input, cfg.memory, plan);
  if (cfg.kind == PipelineKind::memory_channel) return out;
  DetectionConfig det = cfg.detection;
  det.seed = derive_seed(cfg.detection.seed, stream);
  return recover_envelope(simulate_shots(out, det), det);
}

OverlapMatrix transition_matrix(double phi, const PipelineConfig& cfg, int n_max) {
  if (n_max < 0) throw InvalidArgument("n_max must be non-negative");
  if (cfg.kind != PipelineKind::ideal && required_time_bandwidth(n_max) > cfg.memory.tb) {
    throw DomainError("modes up to n = " + std::to_string(n_max) + " need TB >= " +
                      std::to_string(required_time_bandwidth(n_max)) + ", memory stores " +
                      std::to_string(cfg.memory.tb));
  }
  OverlapMatrix mat;
  mat.n_max = n_max;
  mat.phi = phi;
  mat.coeffs.assign(mat.size() * mat.size(), Complex{});
  std::vector<SampledEnvelope> basis;
  for (int n = 0; n <= n_max; ++n) basis.push_back(hermite_gauss(n, cfg.grid, cfg.center, cfg.width));
  for (int m = 0; m <= n_max; ++m) {
    SampledEnvelope out = run_pipeline(basis[m], phi, cfg, static_cast<std::uint64_t>(m));
    for (int n = 0; n <= n_max; ++n) mat.at(n, m) = overlap(basis[n], out);
  }
  return mat;
}

std::vector<ModePhase> diagonal_phases(const OverlapMatrix& m) {
  std::vector<ModePhase> out;
  for (std::size_t n = 0; n < m.size(); ++n) {
    out.push_back({static_cast<int>(n), std::arg(m.at(n, n))});
  }
  return out;
}

std::vector<ModePhase> unwrap_phases(std::vector<ModePhase> phases) {
  std::sort(phases.begin(), phases.end(),
            [](const ModePhase& a, const ModePhase& b) { return a.n < b.n; });
  for (std::size_t i = 1; i < phases.size(); ++i) {
    if (phases[i].n == phases[i - 1].n) throw InvalidArgument("duplicate mode index in phase list");
    double step = phases[i].phase - phases[i - 1].phase;
    step -= 2.0 * kPi * std::round(step / (2.0 * kPi));
    if (std::abs(step) > kPi - 1e-9) {
      throw DomainError("phase step between modes " + std::to_string(phases[i - 1].n) + " and " +
                        std::to_string(phases[i].n) + " is ambiguous (|step| = pi)");
    }
    phases[i].phase = phases[i - 1].phase + step;
  }
  return phases;
}

AngleFit fit_angle(std::vector<ModePhase> phases) {
  if (phases.size() < 3) throw InvalidArgument("angle fit needs at least 3 modes");
  auto u = unwrap_phases(std::move(phases));
  const double m = static_cast<double>(u.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& p : u) {
    sx += p.n;
    sy += p.phase;
  }
  const double xbar = sx / m, ybar = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : u) {
    sxx += (p.n - xbar) * (p.n - xbar);
    sxy += (p.n - xbar) * (p.phase - ybar);
  }
  AngleFit fit;
  fit.slope = sxy / sxx;
  fit.phi0 = ybar - fit.slope * xbar;
  double ssr = 0.0;
  for (const auto& p : u) {
    const double r = p.phase - (fit.phi0 + fit.slope * p.n);
    fit.residuals.push_back(r);
    ssr += r * r;
  }
  const double s2 = ssr / (m - 2.0);
  fit.sigma_slope = std::sqrt(s2 / sxx);
  fit.sigma_phi0 = std::sqrt(s2 * (1.0 / m + xbar * xbar / sxx));
  return fit;
}

PhaseHistogram phase_histogram(std::span<const Complex> values, std::size_t bins) {
  if (values.empty()) throw InvalidArgument("phase histogram needs at least one value");
  if (bins == 0) throw InvalidArgument("phase histogram needs at least one bin");
  PhaseHistogram h;
  h.counts.assign(bins, 0);
  for (std::size_t b = 0; b <= bins; ++b) {
    h.edges.push_back(-kPi + 2.0 * kPi * static_cast<double>(b) / static_cast<double>(bins));
  }
  Complex resultant{};
  for (const Complex& v : values) {
    const double a = std::arg(v);
    auto b = static_cast<std::size_t>(std::floor((a + kPi) / (2.0 * kPi) * static_cast<double>(bins)));
    h.counts[std::min(b, bins - 1)] += 1;
    const double mag = std::abs(v);
    if (mag > 0.0) resultant += v / mag;
  }
  resultant /= static_cast<double>(values.size());
  h.resultant_length = std::abs(resultant);
  h.circular_mean = std::arg(resultant);
  h.circular_std = std::sqrt(-2.0 * std::log(std::max(h.resultant_length, 1e-300)));
  return h;
}

}  // namespace chronofrft
