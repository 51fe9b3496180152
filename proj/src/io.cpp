#include "chronofrft/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "chronofrft/errors.hpp"

namespace chronofrft::io {
namespace fs = std::filesystem;

namespace {

void append_f64(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  char buf[8];
  std::memcpy(buf, &bits, 8);
  out.append(buf, 8);
}

double read_f64(const char* p) {
  std::uint64_t bits;
  std::memcpy(&bits, p, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  return std::bit_cast<double>(bits);
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Splits "header-json\npayload". Returns the parsed header and payload offset.
std::pair<json, std::size_t> split_header(std::string_view bytes) {
  const auto nl = bytes.find('\n');
  if (nl == std::string_view::npos) throw IoError("binary file has no header line");
  json header;
  try {
    header = json::parse(bytes.substr(0, nl));
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed binary header: ") + e.what());
  }
  return {header, nl + 1};
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "bin") return Format::bin;
  if (name == "json") return Format::json;
  throw InvalidArgument("unknown format '" + std::string(name) + "' (csv|bin|json)");
}

void atomic_write(const fs::path& path, std::string_view bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string envelope_to_csv(const SampledEnvelope& e, double tau_seconds) {
  std::string out = "# chronofrft envelope n=" + std::to_string(e.grid.n) + " dt=" +
                    fmt17(e.grid.dt) + " t_start=" + fmt17(e.grid.t_start) +
                    " tau_seconds=" + fmt17(tau_seconds) + "\n";
  out += "t,re,im\n";
  for (std::size_t j = 0; j < e.grid.n; ++j) {
    out += fmt17(e.grid.time(j)) + "," + fmt17(e.samples[j].real()) + "," +
           fmt17(e.samples[j].imag()) + "\n";
  }
  return out;
}

std::string envelope_to_binary(const SampledEnvelope& e, double tau_seconds) {
  json header = {{"format", "chronofrft.envelope"}, {"version", 1},
                 {"n", e.grid.n},                  {"dt", e.grid.dt},
                 {"t_start", e.grid.t_start},      {"tau_seconds", tau_seconds},
                 {"payload", "complex128le"}};
  std::string out = header.dump() + "\n";
  out.reserve(out.size() + 16 * e.samples.size());
  for (const auto& z : e.samples) {
    append_f64(out, z.real());
    append_f64(out, z.imag());
  }
  return out;
}

EnvelopeFile envelope_from_csv(std::string_view text) {
  EnvelopeFile f;
  std::istringstream is{std::string(text)};
  std::string line;
  std::vector<double> t;
  std::vector<Complex> s;
  double header_dt = 0.0, header_t0 = 0.0;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const double val = std::stod(tok.substr(eq + 1));
        if (key == "dt") header_dt = val, have_header = true;
        if (key == "t_start") header_t0 = val;
        if (key == "tau_seconds") f.tau_seconds = val;
      }
      continue;
    }
    if (line.rfind("t,", 0) == 0) continue;
    double a, b, c;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3) {
      throw IoError("malformed envelope CSV row: " + line);
    }
    t.push_back(a);
    s.emplace_back(b, c);
  }
  if (s.size() < 2) throw IoError("envelope CSV holds fewer than two samples");
  f.envelope.grid = have_header ? TimeGrid{header_t0, header_dt, s.size()}
                                : TimeGrid{t.front(), t[1] - t[0], s.size()};
  f.envelope.samples = std::move(s);
  return f;
}

EnvelopeFile envelope_from_binary(std::string_view bytes) {
  auto [h, off] = split_header(bytes);
  if (h.value("format", "") != "chronofrft.envelope") throw IoError("not an envelope file");
  EnvelopeFile f;
  const auto n = h.at("n").get<std::size_t>();
  f.envelope.grid = TimeGrid{h.at("t_start").get<double>(), h.at("dt").get<double>(), n};
  f.tau_seconds = h.at("tau_seconds").get<double>();
  if (bytes.size() < off + 16 * n) throw IoError("envelope payload is truncated");
  f.envelope.samples.resize(n);
  const char* p = bytes.data() + off;
  for (std::size_t j = 0; j < n; ++j, p += 16) {
    f.envelope.samples[j] = {read_f64(p), read_f64(p + 8)};
  }
  return f;
}

EnvelopeFile envelope_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed JSON envelope: ") + e.what());
  }
  EnvelopeFile f;
  const auto n = j.at("n").get<std::size_t>();
  f.envelope.grid = TimeGrid{j.at("t_start").get<double>(), j.at("dt").get<double>(), n};
  f.tau_seconds = get_or(j, "tau_seconds", f.tau_seconds);
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != n || im.size() != n) throw IoError("JSON envelope has the wrong sample count");
  f.envelope.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) f.envelope.samples[k] = {re[k].get<double>(), im[k].get<double>()};
  return f;
}

EnvelopeFile read_envelope(const fs::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.empty() || bytes[0] != '{') return envelope_from_csv(bytes);
  // Binary files open with a one-line header carrying a format tag; JSON envelopes do not.
  const auto nl = bytes.find('\n');
  if (nl != std::string::npos && nl + 1 < bytes.size()) {
    const json header = json::parse(std::string_view(bytes).substr(0, nl), nullptr, false);
    if (!header.is_discarded() && header.contains("format")) return envelope_from_binary(bytes);
  }
  return envelope_from_json(bytes);
}

void write_envelope(const fs::path& path, const SampledEnvelope& e, Format format,
                    double tau_seconds) {
  switch (format) {
    case Format::csv:
      atomic_write(path, envelope_to_csv(e, tau_seconds));
      return;
    case Format::bin:
      atomic_write(path, envelope_to_binary(e, tau_seconds));
      return;
    case Format::json: {
      json j = {{"n", e.grid.n}, {"dt", e.grid.dt}, {"t_start", e.grid.t_start},
                {"tau_seconds", tau_seconds}};
      json re = json::array(), im = json::array();
      for (const auto& z : e.samples) {
        re.push_back(z.real());
        im.push_back(z.imag());
      }
      j["re"] = std::move(re);
      j["im"] = std::move(im);
      atomic_write(path, j.dump() + "\n");
      return;
    }
  }
}

std::string map_to_csv(const WignerMap& w) {
  std::string out = "t,w,W\n";
  for (std::size_t i = 0; i < w.time_axis.count; ++i) {
    for (std::size_t j = 0; j < w.freq_axis.count; ++j) {
      out += fmt17(w.time_axis.at(i)) + "," + fmt17(w.freq_axis.at(j)) + "," + fmt17(w.at(i, j)) +
             "\n";
    }
  }
  return out;
}

std::string map_to_binary(const WignerMap& w) {
  json header = {{"format", "chronofrft.wigner"},   {"version", 1},
                 {"t_start", w.time_axis.start},    {"dt", w.time_axis.step},
                 {"n_t", w.time_axis.count},        {"w_start", w.freq_axis.start},
                 {"dw", w.freq_axis.step},          {"n_w", w.freq_axis.count}};
  std::string out = header.dump() + "\n";
  for (double v : w.values) append_f64(out, v);
  return out;
}

WignerMap map_from_binary(std::string_view bytes) {
  auto [h, off] = split_header(bytes);
  if (h.value("format", "") != "chronofrft.wigner") throw IoError("not a Wigner map file");
  WignerMap w;
  w.time_axis = Axis{h.at("t_start").get<double>(), h.at("dt").get<double>(),
                     h.at("n_t").get<std::size_t>()};
  w.freq_axis = Axis{h.at("w_start").get<double>(), h.at("dw").get<double>(),
                     h.at("n_w").get<std::size_t>()};
  const std::size_t count = w.time_axis.count * w.freq_axis.count;
  if (bytes.size() < off + 8 * count) throw IoError("Wigner payload is truncated");
  w.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) w.values[i] = read_f64(bytes.data() + off + 8 * i);
  return w;
}

json plan_to_json(const FrftPlan& plan) {
  json stages = json::array();
  for (const auto& st : plan.stages) {
    stages.push_back({{"phi", st.phi}, {"d_t", st.d_t}, {"d_omega", st.d_omega}});
  }
  return {{"phi", plan.phi},
          {"stages", stages},
          {"method", plan.method == FrftMethod::lens_sequence ? "lens_sequence" : "direct_kernel"}};
}

FrftPlan plan_from_json(const json& j) {
  FrftPlan plan;
  plan.phi = j.at("phi").get<double>();
  const auto method = j.value("method", std::string("lens_sequence"));
  if (method == "lens_sequence") {
    plan.method = FrftMethod::lens_sequence;
  } else if (method == "direct_kernel") {
    plan.method = FrftMethod::direct_kernel;
  } else {
    throw InvalidArgument("unknown FrFT method '" + method + "'");
  }
  for (const auto& st : j.at("stages")) {
    LensStage s;
    s.d_t = st.at("d_t").get<double>();
    s.d_omega = st.at("d_omega").get<double>();
    s.phi = st.contains("phi") ? st.at("phi").get<double>() : 2.0 * std::atan(s.d_t);
    plan.stages.push_back(s);
  }
  return plan;
}

json memory_to_json(const MemoryParams& p) {
  json j = {{"od", p.od},
            {"gamma", p.gamma},
            {"tau_seconds", p.tau_seconds},
            {"beta", p.beta},
            {"length", p.length},
            {"tb", p.tb},
            {"parasitic_d_omega", p.parasitic_d_omega},
            {"compensation_d_omega", p.compensation_d_omega},
            {"decay_model", p.decay_model == DecayModel::formula_only ? "formula_only"
                                                                      : "formula_times_exp_decay"}};
  if (p.efficiency_override) j["efficiency_override"] = *p.efficiency_override;
  return j;
}

MemoryParams memory_from_json(const json& j) {
  MemoryParams p = memory_preset(j.value("preset", std::string("gem")));
  p.od = get_or(j, "od", p.od);
  p.gamma = get_or(j, "gamma", p.gamma);
  p.tau_seconds = get_or(j, "tau_seconds", p.tau_seconds);
  p.beta = get_or(j, "beta", p.beta);
  p.length = get_or(j, "length", p.length);
  p.tb = get_or(j, "tb", p.tb);
  p.parasitic_d_omega = get_or(j, "parasitic_d_omega", p.parasitic_d_omega);
  p.compensation_d_omega = get_or(j, "compensation_d_omega", p.compensation_d_omega);
  if (j.contains("decay_model")) {
    const auto m = j.at("decay_model").get<std::string>();
    if (m == "formula_only") {
      p.decay_model = DecayModel::formula_only;
    } else if (m == "formula_times_exp_decay") {
      p.decay_model = DecayModel::formula_times_exp_decay;
    } else {
      throw InvalidArgument("unknown decay model '" + m + "'");
    }
  }
  if (j.contains("efficiency_override") && !j.at("efficiency_override").is_null()) {
    p.efficiency_override = j.at("efficiency_override").get<double>();
  }
  p.validate();
  return p;
}

MemoryParams load_memory_params(const fs::path& path) {
  try {
    return memory_from_json(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    throw IoError("cannot parse memory config " + path.string() + ": " + e.what());
  }
}

json detection_to_json(const DetectionConfig& cfg) {
  return {{"shots", cfg.shots},
          {"seed", cfg.seed},
          {"noise_sigma", cfg.noise_sigma},
          {"lo_phase_model",
           cfg.lo_phase_model == LoPhaseModel::uniform_random ? "uniform_random" : "slow_drift"},
          {"drift_rate", cfg.drift_rate},
          {"carrier", cfg.carrier},
          {"reference_amplitude", cfg.reference_amplitude},
          {"reference_width", cfg.reference_width},
          {"reference_offset", cfg.reference_offset},
          {"reference_length", cfg.reference_length}};
}

DetectionConfig detection_from_json(const json& j) {
  DetectionConfig cfg;
  cfg.shots = get_or(j, "shots", cfg.shots);
  cfg.seed = get_or(j, "seed", cfg.seed);
  cfg.noise_sigma = get_or(j, "noise_sigma", cfg.noise_sigma);
  const auto model = j.value("lo_phase_model", std::string("uniform_random"));
  if (model == "uniform_random") {
    cfg.lo_phase_model = LoPhaseModel::uniform_random;
  } else if (model == "slow_drift") {
    cfg.lo_phase_model = LoPhaseModel::slow_drift;
  } else {
    throw InvalidArgument("unknown LO phase model '" + model + "'");
  }
  cfg.drift_rate = get_or(j, "drift_rate", cfg.drift_rate);
  cfg.carrier = get_or(j, "carrier", cfg.carrier);
  cfg.reference_amplitude = get_or(j, "reference_amplitude", cfg.reference_amplitude);
  cfg.reference_width = get_or(j, "reference_width", cfg.reference_width);
  cfg.reference_offset = get_or(j, "reference_offset", cfg.reference_offset);
  cfg.reference_length = get_or(j, "reference_length", cfg.reference_length);
  return cfg;
}

void write_shot_bundle(const fs::path& dir, const std::vector<HomodyneShot>& shots,
                       const DetectionConfig& cfg) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::string payload;
  json phases = json::array();
  for (const auto& s : shots) {
    SampledEnvelope trace{s.grid, std::vector<Complex>(s.trace.begin(), s.trace.end())};
    const TimeGrid win{-0.5 * s.grid.dt * static_cast<double>(s.reference_segment.size()),
                       s.grid.dt, s.reference_segment.size()};
    SampledEnvelope ref{win, std::vector<Complex>(s.reference_segment.begin(),
                                                  s.reference_segment.end())};
    payload += envelope_to_binary(trace, 0.0);
    payload += envelope_to_binary(ref, 0.0);
    phases.push_back(s.lo_phase_true);
  }
  json manifest = detection_to_json(cfg);
  manifest["format"] = "chronofrft.shots";
  manifest["version"] = 1;
  manifest["shots"] = shots.size();
  manifest["payload"] = "shots.bin";
  manifest["lo_phase_true"] = phases;
  atomic_write(dir / "shots.bin", payload);
  atomic_write(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::pair<std::vector<HomodyneShot>, DetectionConfig> read_shot_bundle(const fs::path& dir) {
  json manifest;
  try {
    manifest = json::parse(read_file(dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw IoError(std::string("cannot parse shot manifest: ") + e.what());
  }
  DetectionConfig cfg = detection_from_json(manifest);
  const std::string payload = read_file(dir / manifest.value("payload", std::string("shots.bin")));
  const auto& phases = manifest.at("lo_phase_true");
  std::vector<HomodyneShot> shots;
  std::string_view rest(payload);
  auto next_record = [&rest]() {
    EnvelopeFile f = envelope_from_binary(rest);
    const auto nl = rest.find('\n');
    rest.remove_prefix(nl + 1 + 16 * f.envelope.grid.n);
    return f.envelope;
  };
  for (std::size_t k = 0; k < manifest.at("shots").get<std::size_t>(); ++k) {
    SampledEnvelope trace = next_record();
    SampledEnvelope ref = next_record();
    HomodyneShot s;
    s.grid = trace.grid;
    s.lo_phase_true = phases.at(k).get<double>();
    for (const auto& z : trace.samples) s.trace.push_back(z.real());
    for (const auto& z : ref.samples) s.reference_segment.push_back(z.real());
    shots.push_back(std::move(s));
  }
  cfg.shots = shots.size();
  return {std::move(shots), cfg};
}

std::string matrix_to_csv(const OverlapMatrix& m) {
  std::string out = "n,m,re,im,magnitude2,phase\n";
  for (std::size_t n = 0; n < m.size(); ++n) {
    for (std::size_t k = 0; k < m.size(); ++k) {
      const Complex f = m.at(n, k);
      out += std::to_string(n) + "," + std::to_string(k) + "," + fmt17(f.real()) + "," +
             fmt17(f.imag()) + "," + fmt17(std::norm(f)) + "," + fmt17(std::arg(f)) + "\n";
    }
  }
  return out;
}

json matrix_to_json(const OverlapMatrix& m) {
  json re = json::array(), im = json::array();
  for (std::size_t n = 0; n < m.size(); ++n) {
    json rr = json::array(), ii = json::array();
    for (std::size_t k = 0; k < m.size(); ++k) {
      rr.push_back(m.at(n, k).real());
      ii.push_back(m.at(n, k).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"phi", m.phi}, {"n_max", m.n_max}, {"re", re}, {"im", im}};
}

json fit_to_json(const AngleFit& fit) {
  return {{"phi0", fit.phi0},
          {"slope", fit.slope},
          {"measured_angle", fit.measured_angle()},
          {"sigma_phi0", fit.sigma_phi0},
          {"sigma_slope", fit.sigma_slope},
          {"residuals", fit.residuals}};
}

}  // namespace chronofrft::io
