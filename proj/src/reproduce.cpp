#include "chronofrft/reproduce.hpp"

#include <cmath>
#include <cstdio>

#include "chronofrft/detection.hpp"
#include "chronofrft/memory.hpp"

namespace chronofrft {

PipelineConfig reproduction_pipeline(const ReproduceOptions& opts, PipelineKind kind) {
  PipelineConfig cfg;
  cfg.kind = kind;
  cfg.grid = opts.grid;
  cfg.memory = memory_preset(opts.memory_preset);
  cfg.detection = calibrated_detection(opts.grid, opts.seed);
  cfg.detection.shots = opts.shots;
  return cfg;
}

std::vector<Table1Row> reproduce_table1(const ReproduceOptions& opts) {
  const PipelineConfig ideal = reproduction_pipeline(opts, PipelineKind::ideal);
  PipelineConfig full = reproduction_pipeline(opts, PipelineKind::full_with_detection);
  std::vector<Table1Row> rows;
  for (std::size_t i = 0; i < kTable1Angles.size(); ++i) {
    const double phi = kTable1Angles[i];
    Table1Row row;
    row.set_angle = phi;
    row.hardware_angle = kTable1HardwarePi[i] * kPi;
    row.ideal = fit_angle(diagonal_phases(transition_matrix(phi, ideal, opts.n_max)));
    full.detection.seed = derive_seed(opts.seed, 100 + i);
    row.full = fit_angle(diagonal_phases(transition_matrix(phi, full, opts.n_max)));
    row.tb_prime = bandwidth_after_lens(full.memory.tb, phi).tb_prime;
    row.efficiency = channel_efficiency(full.memory, pipeline_plan(phi, full));
    rows.push_back(row);
  }
  return rows;
}

std::string format_table1(const std::vector<Table1Row>& rows) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-8s %-12s %-22s %-12s %-10s %-10s %-8s %-7s %s\n", "set/pi",
                "ideal/pi", "simulated/pi (1 sigma)", "dphi [rad]", "dphi/pi", "hardware",
                "TB'", "eta", "|dphi|<0.033pi");
  out += buf;
  for (const auto& r : rows) {
    const double dev = r.full_deviation();
    std::snprintf(buf, sizeof buf, "%-8.4f %-12.6f %.4f +- %-12.4f %-12.5f %-10.5f %-10.3f %-8.2f %-7.3f %s\n",
                  r.set_angle / kPi, r.ideal.measured_angle() / kPi, r.full.measured_angle() / kPi,
                  r.full.sigma_slope / kPi, dev, dev / kPi, r.hardware_angle / kPi, r.tb_prime,
                  r.efficiency, std::abs(dev) <= kAngleBoundPi * kPi ? "yes" : "no");
    out += buf;
  }
  out += "sigma is the 1-sigma slope error; multiply by 5 for 5-sigma error bars.\n";
  return out;
}

nlohmann::json table1_to_json(const std::vector<Table1Row>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"set_angle", r.set_angle},
                   {"ideal_measured", r.ideal.measured_angle()},
                   {"ideal_deviation", r.ideal_deviation()},
                   {"measured", r.full.measured_angle()},
                   {"sigma", r.full.sigma_slope},
                   {"deviation", r.full_deviation()},
                   {"deviation_pi", r.full_deviation() / kPi},
                   {"within_bound", std::abs(r.full_deviation()) <= kAngleBoundPi * kPi},
                   {"hardware_measured", r.hardware_angle},
                   {"tb_prime", r.tb_prime},
                   {"efficiency", r.efficiency},
                   {"phi0", r.full.phi0},
                   {"residuals", r.full.residuals}});
  }
  return {{"rows", arr}, {"bound_pi", kAngleBoundPi}};
}

std::vector<Fig2Panel> reproduce_fig2(const ReproduceOptions& opts, double half_extent) {
  const SampledEnvelope cat = cat_state(opts.grid, kCatMu, kCatWidth);
  const WignerMap input_map = wigner_square(cat, half_extent);
  PipelineConfig full = reproduction_pipeline(opts, PipelineKind::full_with_detection);
  std::vector<Fig2Panel> panels;
  for (std::size_t i = 0; i < kFig2Angles.size(); ++i) {
    const double phi = kFig2Angles[i];
    Fig2Panel p;
    p.phi = phi;
    const SampledEnvelope ideal = frft_lens_sequence(cat, phi);
    p.ideal = wigner_square(ideal, half_extent);
    p.rotated_input = rotate_map(input_map, phi);
    p.covariance_l2 = map_l2_difference(p.ideal, p.rotated_input);
    const SampledEnvelope measured = run_pipeline(cat, phi, full, 200 + i);
    p.channel = wigner_square(measured, half_extent);
    p.channel_map_fidelity = map_fidelity(p.channel, p.ideal);
    p.channel_state_fidelity = state_fidelity(measured, ideal);
    panels.push_back(std::move(p));
  }
  return panels;
}

std::vector<Fig3Panel> reproduce_fig3(const ReproduceOptions& opts) {
  const PipelineConfig ideal = reproduction_pipeline(opts, PipelineKind::ideal);
  PipelineConfig full = reproduction_pipeline(opts, PipelineKind::full_with_detection);
  std::vector<Fig3Panel> panels;
  for (std::size_t i = 0; i < kFig3Angles.size(); ++i) {
    full.detection.seed = derive_seed(opts.seed, 300 + i);
    panels.push_back({kFig3Angles[i], transition_matrix(kFig3Angles[i], ideal, opts.n_max),
                      transition_matrix(kFig3Angles[i], full, opts.n_max)});
  }
  return panels;
}

Fig4Result reproduce_fig4(const ReproduceOptions& opts, std::size_t bins) {
  Fig4Result res;
  res.phi = 2.0 * kPi / 3.0;
  const PipelineConfig mem = reproduction_pipeline(opts, PipelineKind::memory_channel);
  const FrftPlan plan = pipeline_plan(res.phi, mem);
  double scatter = 0.0;
  for (int n = 0; n <= opts.n_max; ++n) {
    const SampledEnvelope mode = hermite_gauss(n, opts.grid);
    const SampledEnvelope out = apply_memory_channel(mode, mem.memory, plan);
    const Complex expected = overlap(mode, out);
    const Complex unit = std::conj(expected) / std::abs(expected);
    DetectionConfig det = mem.detection;
    det.seed = derive_seed(opts.seed, 400 + static_cast<std::uint64_t>(n));
    std::vector<Complex> values;
    for (const auto& shot : simulate_shots(out, det)) {
      values.push_back(overlap(mode, demodulate_shot(shot, det)) * unit);
    }
    res.histograms.push_back(phase_histogram(values, bins));
    scatter += res.histograms.back().circular_std;
    res.shot_overlaps.push_back(std::move(values));
  }
  res.mean_scatter = scatter / static_cast<double>(opts.n_max + 1);
  return res;
}

}  // namespace chronofrft
