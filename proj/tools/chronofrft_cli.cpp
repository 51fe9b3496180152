// chronofrft command-line front end.
//
// Exit codes: 0 ok, 2 usage, 3 numeric guard / domain, 4 I/O.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chronofrft/analysis.hpp"
#include "chronofrft/detection.hpp"
#include "chronofrft/errors.hpp"
#include "chronofrft/frft.hpp"
#include "chronofrft/io.hpp"
#include "chronofrft/memory.hpp"
#include "chronofrft/reproduce.hpp"
#include "chronofrft/wigner.hpp"

namespace fs = std::filesystem;
using namespace chronofrft;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Accepts plain radians or multiples of pi: "0.5", "pi", "-pi/3", "2pi/3", "0.25pi".
double parse_angle(const std::string& text) {
  static const std::regex pi_form(R"(^\s*([+-]?)(\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$)",
                                  std::regex::icase);
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    double v = kPi;
    if (m[2].length() > 0) v *= std::stod(m[2]);
    if (m[3].length() > 0) v /= std::stod(m[3]);
    return m[1] == "-" ? -v : v;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("cannot parse angle '" + text + "' (use radians or forms like 2pi/3)");
}

io::Format output_format(const std::string& flag, const fs::path& out) {
  if (!flag.empty()) return io::parse_format(flag);
  const auto ext = out.extension().string();
  if (ext == ".bin") return io::Format::bin;
  if (ext == ".json") return io::Format::json;
  return io::Format::csv;
}

void ensure_parent(const fs::path& p) {
  const auto dir = p.parent_path();
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& p, const std::string& text) {
  ensure_parent(p);
  io::atomic_write(p, text);
}

std::string num(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

// Grid and unit options shared by generating commands.
struct GridOpts {
  std::size_t n = 4096;
  double dt = 0.02;
  bool si = false;
  double tau_seconds = 4.2e-6;

  void add(CLI::App* app) {
    app->add_option("--grid-n", n, "number of samples (power of two)")->capture_default_str();
    app->add_option("--dt", dt, "sample step (tau units, or seconds with --si)")->capture_default_str();
    app->add_flag("--si", si, "read times in seconds and frequencies in rad/s");
    app->add_option("--tau-seconds", tau_seconds, "time unit tau in seconds")->capture_default_str();
  }
  double time(double v) const { return si ? v / tau_seconds : v; }
  TimeGrid grid() const { return make_grid(n, time(dt)); }
};

struct MemoryOpts {
  std::string preset = "gem-experiment";
  std::string config;

  void add(CLI::App* app) {
    app->add_option("--memory-preset", preset, "gem | gem-experiment | gem-decay | ideal")
        ->capture_default_str();
    app->add_option("--config", config, "JSON memory config (may name a preset and override fields)");
  }
  MemoryParams params() const {
    return config.empty() ? memory_preset(preset) : io::load_memory_params(config);
  }
};

PipelineKind parse_pipeline(const std::string& s) {
  if (s == "ideal") return PipelineKind::ideal;
  if (s == "memory") return PipelineKind::memory_channel;
  if (s == "full") return PipelineKind::full_with_detection;
  throw UsageError("unknown pipeline '" + s + "'");
}

void require_seed(const std::optional<std::uint64_t>& seed, const std::string& what) {
  if (!seed) throw UsageError(what + " is stochastic and needs an explicit --seed");
}

// ---- generate -------------------------------------------------------------

struct GenerateCmd {
  std::string kind;
  int n = 0;
  double center = 0.0, width = 1.0, mu = kCatMu, s = kCatWidth, offset = 0.0;
  GridOpts grid;
  std::string out, format;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("generate", "write a test envelope");
    c->add_option("kind", kind, "hermite | cat | gaussian")
        ->required()
        ->check(CLI::IsMember({"hermite", "cat", "gaussian"}));
    c->add_option("--n", n, "Hermite-Gaussian order");
    c->add_option("--center", center, "pulse center");
    c->add_option("--width", width, "mode or pulse width");
    c->add_option("--mu", mu, "cat half separation")->capture_default_str();
    c->add_option("--s", s, "cat lobe width")->capture_default_str();
    c->add_option("--offset", offset, "gaussian carrier offset (rad per tau)");
    grid.add(c);
    c->add_option("-o,--out", out, "output file")->required();
    c->add_option("--format", format, "csv | bin | json (default from extension)");
    c->callback([this] { run(); });
  }

  void run() {
    if (n < 0) throw UsageError("--n must be non-negative");
    const TimeGrid g = grid.grid();
    SampledEnvelope e;
    if (kind == "hermite") {
      e = hermite_gauss(n, g, grid.time(center), grid.time(width));
    } else if (kind == "cat") {
      e = cat_state(g, grid.time(mu), grid.time(s));
    } else {
      const double off = grid.si ? offset * grid.tau_seconds : offset;
      e = gaussian_pulse(g, grid.time(center), grid.time(width), off);
    }
    ensure_parent(out);
    io::write_envelope(out, e, output_format(format, out), grid.tau_seconds);
    std::cout << "wrote " << out << "\n"
              << "norm " << num(e.norm(), 12) << "\n"
              << "time-bandwidth estimate " << num(time_bandwidth_estimate(e)) << "\n";
  }
};

// ---- frft -----------------------------------------------------------------

struct FrftCmd {
  std::string in, out, format, phi_text, method = "lens", pipeline = "ideal", report;
  bool single_stage = false;
  std::optional<std::uint64_t> seed;
  std::size_t shots = 200;
  MemoryOpts memory;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("frft", "apply a fractional Fourier transform or pipeline");
    c->add_option("-i,--in", in, "input envelope")->required();
    c->add_option("--phi", phi_text, "angle in radians or as a multiple of pi (2pi/3)")->required();
    c->add_option("--method", method, "lens | direct")->check(CLI::IsMember({"lens", "direct"}));
    c->add_option("--pipeline", pipeline, "ideal | memory | full")
        ->check(CLI::IsMember({"ideal", "memory", "full"}));
    c->add_flag("--single-stage", single_stage, "do not split |phi| > pi/2 into stages");
    c->add_option("--seed", seed, "RNG seed (required for --pipeline full)");
    c->add_option("--shots", shots, "homodyne shots for --pipeline full")->capture_default_str();
    memory.add(c);
    c->add_option("-o,--out", out, "output envelope")->required();
    c->add_option("--format", format, "csv | bin | json");
    c->add_option("--report", report, "also write the report as JSON");
    c->callback([this] { run(); });
  }

  void run() {
    const double phi = parse_angle(phi_text);
    const auto kind = parse_pipeline(pipeline);
    if (kind == PipelineKind::full_with_detection) require_seed(seed, "--pipeline full");
    if (method == "direct" && kind != PipelineKind::ideal) {
      throw UsageError("--method direct applies to the ideal pipeline only");
    }
    const auto file = io::read_envelope(in);
    const SampledEnvelope& e = file.envelope;

    PipelineConfig cfg;
    cfg.kind = kind;
    cfg.grid = e.grid;
    cfg.memory = memory.params();
    cfg.split_stages = !single_stage;
    cfg.detection = calibrated_detection(e.grid, seed.value_or(0));
    cfg.detection.shots = shots;

    FrftPlan plan = pipeline_plan(phi, cfg);
    if (method == "direct") plan.method = FrftMethod::direct_kernel;

    json rep;
    rep["phi"] = phi;
    rep["pipeline"] = pipeline;
    rep["plan"] = io::plan_to_json(plan);
    std::cout << "phi " << num(phi, 10) << " (" << num(phi / kPi, 6) << " pi), " << plan.stages.size()
              << " stage(s), method " << method << "\n";

    const double widest = widest_stage_angle(plan);
    const double tbp = bandwidth_after_lens(cfg.memory.tb, widest).tb_prime;
    const double eta = channel_efficiency(cfg.memory, plan);
    const double need = stored_bandwidth(cfg.memory, widest);
    const double have = cfg.memory.beta * cfg.memory.length;
    rep["tb"] = cfg.memory.tb;
    rep["tb_prime"] = tbp;
    rep["efficiency"] = eta;
    rep["stored_bandwidth"] = need;
    rep["memory_bandwidth"] = have;
    rep["budget_ok"] = have >= need * (1.0 - 1e-12);
    std::cout << "TB' " << num(tbp, 8) << " (TB " << num(cfg.memory.tb) << ")\n"
              << "eta " << num(eta, 8) << "\n"
              << "bandwidth budget beta*L = " << num(have) << " rad/s vs B' = " << num(need)
              << " rad/s: " << (rep["budget_ok"].get<bool>() ? "ok" : "VIOLATED") << "\n";

    json margins = json::array();
    for (const auto& st : plan.stages) {
      const double mt = temporal_lens_margin(e, st.d_t);
      const double ms = spectral_lens_margin(e, st.d_omega);
      margins.push_back({{"temporal", mt}, {"spectral", ms}});
      std::cout << "stage phi " << num(st.phi) << ": d_t " << num(st.d_t) << ", d_omega " << num(st.d_omega)
                << ", guard margins (input) temporal " << num(mt) << ", spectral " << num(ms) << "\n";
    }
    rep["guard_margins"] = margins;

    SampledEnvelope result = plan.method == FrftMethod::direct_kernel ? frft_direct_kernel(e, phi)
                                                                      : run_pipeline(e, phi, cfg, 0);
    rep["output_norm_squared"] = result.norm_squared();
    std::cout << "output norm^2 " << num(result.norm_squared(), 10) << "\n";

    ensure_parent(out);
    io::write_envelope(out, result, output_format(format, out), file.tau_seconds);
    if (!report.empty()) write_text(report, rep.dump(2) + "\n");
    std::cout << "wrote " << out << "\n";
  }
};

// ---- wigner ---------------------------------------------------------------

std::string map_to_json_text(const WignerMap& w) {
  json j = {{"t_start", w.time_axis.start}, {"dt", w.time_axis.step}, {"n_t", w.time_axis.count},
            {"w_start", w.freq_axis.start}, {"dw", w.freq_axis.step}, {"n_w", w.freq_axis.count},
            {"values", w.values}};
  return j.dump() + "\n";
}

void write_map(const fs::path& out, const WignerMap& w, io::Format fmt) {
  ensure_parent(out);
  switch (fmt) {
    case io::Format::csv:
      io::atomic_write(out, io::map_to_csv(w));
      break;
    case io::Format::bin:
      io::atomic_write(out, io::map_to_binary(w));
      break;
    case io::Format::json:
      io::atomic_write(out, map_to_json_text(w));
      break;
  }
}

struct WignerCmd {
  std::string in, out, format, compare;
  double extent = 0.0;
  std::size_t pad = 2, max_bins = 512;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("wigner", "compute the chronocyclic Wigner map of an envelope");
    c->add_option("-i,--in", in, "input envelope")->required();
    c->add_option("--extent", extent, "crop to the square |t|, |w| <= extent (0 = full map)");
    c->add_option("--pad", pad, "lag zero-padding factor (power of two)")->capture_default_str();
    c->add_option("--max-bins", max_bins, "bin the exported map to at most this many rows/columns")
        ->capture_default_str();
    c->add_option("--compare", compare, "second envelope: print map and state fidelity");
    c->add_option("-o,--out", out, "output map")->required();
    c->add_option("--format", format, "csv | bin | json");
    c->callback([this] { run(); });
  }

  void run() {
    const auto e = io::read_envelope(in).envelope;
    WignerOptions opts;
    opts.pad_factor = pad;
    if (extent > 0.0) opts.t_min = opts.w_min = -extent, opts.t_max = opts.w_max = extent;
    const WignerMap w = wigner(e, opts);
    std::cout << "map " << w.time_axis.count << " x " << w.freq_axis.count << ", integral "
              << num(w.integral(), 10) << ", imaginary residue " << num(w.imag_residue, 3) << "\n";
    if (!compare.empty()) {
      const auto other = io::read_envelope(compare).envelope;
      const WignerMap w2 = wigner(other, opts);
      std::cout << "map fidelity (normalized cross-correlation) " << num(map_fidelity(w, w2), 10) << "\n"
                << "state fidelity |<a|b>|^2 " << num(state_fidelity(e, other), 10) << "\n";
    }
    write_map(out, bin_map(w, max_bins, max_bins), output_format(format, out));
    std::cout << "wrote " << out << "\n";
  }
};

// ---- detect ---------------------------------------------------------------

struct DetectCmd {
  std::string in, bundle_out, bundle_in, recover_out, format, config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> shots;
  std::optional<double> noise_sigma, carrier;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("detect", "simulate homodyne shots and recover the envelope");
    c->add_option("-i,--in", in, "signal envelope to measure");
    c->add_option("--bundle", bundle_in, "recover from an existing shot bundle instead");
    c->add_option("--seed", seed, "RNG seed (required when simulating)");
    c->add_option("--shots", shots, "number of shots (calibrated default 200)");
    c->add_option("--noise-sigma", noise_sigma, "per-sample shot noise");
    c->add_option("--carrier", carrier, "beat-note carrier in rad per tau (0 = baseband)");
    c->add_option("--config", config, "JSON detection config");
    c->add_option("--out-dir", bundle_out, "write the shot bundle here");
    c->add_option("--recover-out", recover_out, "write the recovered envelope here");
    c->add_option("--format", format, "csv | bin | json for --recover-out");
    c->callback([this] { run(); });
  }

  void run() {
    if (in.empty() == bundle_in.empty()) throw UsageError("give exactly one of --in or --bundle");
    std::vector<HomodyneShot> shot_list;
    DetectionConfig cfg;
    std::optional<SampledEnvelope> truth;
    if (!bundle_in.empty()) {
      std::tie(shot_list, cfg) = io::read_shot_bundle(bundle_in);
    } else {
      require_seed(seed, "detect");
      if (bundle_out.empty() && recover_out.empty()) {
        throw UsageError("nothing to write: give --out-dir and/or --recover-out");
      }
      truth = io::read_envelope(in).envelope;
      cfg = calibrated_detection(truth->grid, *seed);
      if (!config.empty()) {
        try {
          cfg = io::detection_from_json(json::parse(io::read_file(config)));
        } catch (const json::exception& e) {
          throw IoError("cannot parse detection config: " + std::string(e.what()));
        }
        cfg.seed = *seed;
      }
      if (shots) cfg.shots = *shots;
      if (noise_sigma) cfg.noise_sigma = *noise_sigma;
      if (carrier) cfg.carrier = *carrier;
      shot_list = simulate_shots(*truth, cfg);
      if (!bundle_out.empty()) {
        io::write_shot_bundle(bundle_out, shot_list, cfg);
        std::cout << "wrote " << shot_list.size() << " shots to " << bundle_out << "\n";
      }
    }
    if (!recover_out.empty()) {
      const SampledEnvelope rec = recover_envelope(shot_list, cfg);
      if (truth) {
        std::cout << "recovery |<e|rec>| " << num(std::abs(overlap(*truth, rec)), 8) << ", L2 error "
                  << num(l2_distance(*truth, rec), 6) << "\n";
      }
      ensure_parent(recover_out);
      io::write_envelope(recover_out, rec, output_format(format, recover_out), 4.2e-6);
      std::cout << "wrote " << recover_out << "\n";
    }
  }
};

// ---- decompose ------------------------------------------------------------

struct DecomposeCmd {
  std::string in, out, format;
  int n_max = 10;
  double center = 0.0, width = 1.0;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("decompose", "project an envelope onto Hermite-Gaussian modes");
    c->add_option("-i,--in", in, "input envelope")->required();
    c->add_option("--n-max", n_max, "highest mode")->capture_default_str();
    c->add_option("--center", center, "basis center");
    c->add_option("--width", width, "basis width");
    c->add_option("-o,--out", out, "output coefficients (csv or json)")->required();
    c->add_option("--format", format, "csv | json");
    c->callback([this] { run(); });
  }

  void run() {
    if (n_max < 0) throw UsageError("--n-max must be non-negative");
    const auto e = io::read_envelope(in).envelope;
    const auto f = decompose(e, center, width, n_max);
    double captured = 0.0;
    for (const auto& z : f) captured += std::norm(z);
    const auto fmt = output_format(format, out);
    std::string text;
    if (fmt == io::Format::json) {
      json re = json::array(), im = json::array();
      for (const auto& z : f) re.push_back(z.real()), im.push_back(z.imag());
      text = json{{"n_max", n_max}, {"center", center}, {"width", width}, {"re", re}, {"im", im}}.dump(2) + "\n";
    } else if (fmt == io::Format::csv) {
      text = "n,re,im,magnitude2,phase\n";
      char buf[160];
      for (std::size_t n = 0; n < f.size(); ++n) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", n, f[n].real(), f[n].imag(),
                      std::norm(f[n]), std::arg(f[n]));
        text += buf;
      }
    } else {
      throw UsageError("decompose writes csv or json");
    }
    write_text(out, text);
    std::cout << "captured norm^2 " << num(captured, 10) << " of " << num(e.norm_squared(), 10) << "\n"
              << "wrote " << out << "\n";
  }
};

// ---- fit ------------------------------------------------------------------

std::vector<ModePhase> read_phase_csv(const fs::path& p) {
  // Accepts "n,phase" rows, or a matrix export "n,m,re,im,..." (diagonal is used).
  std::istringstream is(io::read_file(p));
  std::string line;
  std::vector<ModePhase> out;
  bool matrix = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!std::isdigit(static_cast<unsigned char>(line[0])) && line[0] != '-') {
      matrix = line.rfind("n,m,", 0) == 0;
      continue;
    }
    std::vector<double> cols;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        cols.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("malformed phase row: " + line);
      }
    }
    if (matrix) {
      if (cols.size() < 4) throw IoError("malformed matrix row: " + line);
      if (cols[0] == cols[1]) out.push_back({static_cast<int>(cols[0]), std::atan2(cols[3], cols[2])});
    } else {
      if (cols.size() < 2) throw IoError("malformed phase row: " + line);
      out.push_back({static_cast<int>(cols[0]), cols[1]});
    }
  }
  return out;
}

struct FitCmd {
  std::string phases_in, phi_text, pipeline = "ideal", out, matrix_out;
  std::optional<std::uint64_t> seed;
  int n_max = 10;
  std::size_t shots = 200;
  GridOpts grid;
  MemoryOpts memory;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("fit", "fit phase = phi0 + n dphi/dn to diagonal overlaps");
    c->add_option("--phases", phases_in, "CSV of n,phase or a matrix export");
    c->add_option("--phi", phi_text, "instead: compute the transition matrix at this angle");
    c->add_option("--pipeline", pipeline, "ideal | memory | full")
        ->check(CLI::IsMember({"ideal", "memory", "full"}));
    c->add_option("--seed", seed, "RNG seed (required for --pipeline full)");
    c->add_option("--n-max", n_max, "highest mode")->capture_default_str();
    c->add_option("--shots", shots, "homodyne shots for --pipeline full")->capture_default_str();
    grid.add(c);
    memory.add(c);
    c->add_option("--matrix-out", matrix_out, "write the transition matrix (csv or json)");
    c->add_option("-o,--out", out, "fit result JSON")->required();
    c->callback([this] { run(); });
  }

  void run() {
    if (phases_in.empty() == phi_text.empty()) throw UsageError("give exactly one of --phases or --phi");
    std::vector<ModePhase> phases;
    json extra = json::object();
    if (!phases_in.empty()) {
      phases = read_phase_csv(phases_in);
    } else {
      const double phi = parse_angle(phi_text);
      PipelineConfig cfg;
      cfg.kind = parse_pipeline(pipeline);
      if (cfg.kind == PipelineKind::full_with_detection) require_seed(seed, "--pipeline full");
      cfg.grid = grid.grid();
      cfg.memory = memory.params();
      cfg.detection = calibrated_detection(cfg.grid, seed.value_or(0));
      cfg.detection.shots = shots;
      const auto m = transition_matrix(phi, cfg, n_max);
      phases = diagonal_phases(m);
      extra["set_angle"] = phi;
      if (!matrix_out.empty()) {
        const auto fmt = output_format("", matrix_out);
        write_text(matrix_out, fmt == io::Format::json ? io::matrix_to_json(m).dump(2) + "\n" : io::matrix_to_csv(m));
        std::cout << "wrote " << matrix_out << "\n";
      }
    }
    const AngleFit fit = fit_angle(phases);
    json j = io::fit_to_json(fit);
    j.update(extra);
    write_text(out, j.dump(2) + "\n");
    std::cout << "measured angle " << num(fit.measured_angle(), 10) << " rad (" << num(fit.measured_angle() / kPi, 6)
              << " pi) +- " << num(fit.sigma_slope, 3) << " (1 sigma)\n"
              << "wrote " << out << "\n";
  }
};

// ---- reproduce ------------------------------------------------------------

struct ReproduceCmd {
  std::string target, out_dir, format = "bin";
  std::optional<std::uint64_t> seed;
  int n_max = 10;
  std::size_t shots = 200;
  std::string preset = "gem-experiment";
  GridOpts grid;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("reproduce", "regenerate the table and figure data sets");
    c->add_option("target", target, "table1 | fig2 | fig3 | fig4")
        ->required()
        ->check(CLI::IsMember({"table1", "fig2", "fig3", "fig4"}));
    c->add_option("--seed", seed, "RNG seed (required)");
    c->add_option("--out-dir", out_dir, "output directory")->required();
    c->add_option("--n-max", n_max, "highest mode")->capture_default_str();
    c->add_option("--shots", shots, "homodyne shots per measurement")->capture_default_str();
    c->add_option("--memory-preset", preset, "memory preset")->capture_default_str();
    c->add_option("--format", format, "map format for fig2: csv | bin | json")->capture_default_str();
    grid.add(c);
    c->callback([this] { run(); });
  }

  void run() {
    require_seed(seed, "reproduce");
    ReproduceOptions opts;
    opts.grid = grid.grid();
    opts.seed = *seed;
    opts.n_max = n_max;
    opts.shots = shots;
    opts.memory_preset = preset;
    memory_preset(preset);  // validate the name before the long run
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    if (target == "table1") {
      const auto rows = reproduce_table1(opts);
      const std::string text = format_table1(rows);
      write_text(dir / "table1.txt", text);
      json j = table1_to_json(rows);
      j["seed"] = *seed;
      write_text(dir / "table1.json", j.dump(2) + "\n");
      std::cout << text;
    } else if (target == "fig2") {
      const auto panels = reproduce_fig2(opts);
      const auto fmt = io::parse_format(format);
      const std::string ext = format;
      json summary = json::array();
      for (std::size_t i = 0; i < panels.size(); ++i) {
        const auto& p = panels[i];
        const std::string stem = "fig2_phi" + std::to_string(i);
        write_map(dir / (stem + "_ideal." + ext), bin_map(p.ideal), fmt);
        write_map(dir / (stem + "_channel." + ext), bin_map(p.channel), fmt);
        write_map(dir / (stem + "_rotated_input." + ext), bin_map(p.rotated_input), fmt);
        summary.push_back({{"phi", p.phi},
                           {"rotation_covariance_l2", p.covariance_l2},
                           {"channel_map_fidelity", p.channel_map_fidelity},
                           {"channel_state_fidelity", p.channel_state_fidelity}});
        std::printf("phi %.4f pi: rotation covariance L2 %.3e, channel map fidelity %.4f, state fidelity %.4f\n",
                    p.phi / kPi, p.covariance_l2, p.channel_map_fidelity, p.channel_state_fidelity);
      }
      write_text(dir / "fig2_summary.json", json{{"seed", *seed}, {"panels", summary}}.dump(2) + "\n");
    } else if (target == "fig3") {
      const auto panels = reproduce_fig3(opts);
      json summary = json::array();
      for (std::size_t i = 0; i < panels.size(); ++i) {
        const auto& p = panels[i];
        const std::string stem = "fig3_phi" + std::to_string(i);
        write_text(dir / (stem + "_ideal.csv"), io::matrix_to_csv(p.ideal));
        write_text(dir / (stem + "_measured.csv"), io::matrix_to_csv(p.measured));
        double leak = 0.0;
        for (std::size_t m = 0; m < p.measured.size(); ++m) leak += p.measured.off_diagonal_power(m);
        leak /= static_cast<double>(p.measured.size());
        const auto fit = fit_angle(diagonal_phases(p.measured));
        summary.push_back({{"phi", p.phi}, {"mean_off_diagonal_power", leak}, {"fit", io::fit_to_json(fit)}});
        std::printf("phi %.4f pi: measured %.4f pi, mean off-diagonal power %.3e\n", p.phi / kPi,
                    fit.measured_angle() / kPi, leak);
      }
      write_text(dir / "fig3_summary.json", json{{"seed", *seed}, {"panels", summary}}.dump(2) + "\n");
    } else {
      const auto res = reproduce_fig4(opts);
      std::string csv = "n,bin_lo,bin_hi,count\n";
      json modes = json::array();
      for (std::size_t n = 0; n < res.histograms.size(); ++n) {
        const auto& h = res.histograms[n];
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
          char buf[128];
          std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%zu\n", n, h.edges[b], h.edges[b + 1], h.counts[b]);
          csv += buf;
        }
        modes.push_back({{"n", n}, {"circular_mean", h.circular_mean}, {"circular_std", h.circular_std},
                         {"resultant_length", h.resultant_length}});
      }
      write_text(dir / "fig4_histograms.csv", csv);
      write_text(dir / "fig4_summary.json",
                 json{{"seed", *seed}, {"phi", res.phi}, {"mean_scatter", res.mean_scatter}, {"modes", modes}}
                         .dump(2) + "\n");
      std::printf("phi %.4f pi: mean phase scatter %.3f rad over %zu modes\n", res.phi / kPi, res.mean_scatter,
                  res.histograms.size());
    }
    std::cout << "wrote " << target << " data to " << dir.string() << "\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chronofrft: fractional Fourier transforms of pulse envelopes"};
  app.require_subcommand(1);
  GenerateCmd generate;
  FrftCmd frft_cmd;
  WignerCmd wigner_cmd;
  DetectCmd detect;
  DecomposeCmd decompose_cmd;
  FitCmd fit;
  ReproduceCmd reproduce;
  generate.add(app);
  frft_cmd.add(app);
  wigner_cmd.add(app);
  detect.add(app);
  decompose_cmd.add(app);
  fit.add(app);
  reproduce.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "numeric guard: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "I/O error: malformed JSON input: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
