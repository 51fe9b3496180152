#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "chronofrft/analysis.hpp"
#include "chronofrft/detection.hpp"
#include "chronofrft/frft.hpp"
#include "chronofrft/memory.hpp"
#include "chronofrft/signal.hpp"
#include "chronofrft/wigner.hpp"

namespace chronofrft::io {

using json = nlohmann::json;

enum class Format { csv, bin, json };

Format parse_format(std::string_view name);

/// Writes to a sibling temp file and renames it into place.
void atomic_write(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

// Envelope formats.
//   CSV:    "# chronofrft envelope n=.. dt=.. t_start=.. tau_seconds=.." then
//           "t,re,im" rows.
//   Binary: one JSON header line {"format":"chronofrft.envelope","version":1,
//           "n","dt","t_start","tau_seconds","payload":"complex128le"} + '\n',
//           followed by n (re, im) pairs of little-endian float64.
struct EnvelopeFile {
  SampledEnvelope envelope;
  double tau_seconds = 4.2e-6;
};

std::string envelope_to_csv(const SampledEnvelope& e, double tau_seconds);
std::string envelope_to_binary(const SampledEnvelope& e, double tau_seconds);
EnvelopeFile envelope_from_csv(std::string_view text);
EnvelopeFile envelope_from_binary(std::string_view bytes);
EnvelopeFile envelope_from_json(std::string_view text);
/// Detects the binary header, falls back to CSV.
EnvelopeFile read_envelope(const std::filesystem::path& path);
void write_envelope(const std::filesystem::path& path, const SampledEnvelope& e, Format format,
                    double tau_seconds);

// Wigner maps.
//   CSV:    "t,w,W" rows.
//   Binary: JSON header line {"format":"chronofrft.wigner","version":1,"t_start",
//           "dt","n_t","w_start","dw","n_w"} + '\n', then n_t * n_w
//           little-endian float64, row-major (time rows).
std::string map_to_csv(const WignerMap& w);
std::string map_to_binary(const WignerMap& w);
WignerMap map_from_binary(std::string_view bytes);

json plan_to_json(const FrftPlan& plan);
FrftPlan plan_from_json(const json& j);

json memory_to_json(const MemoryParams& p);
/// Accepts {"preset": name, ...overrides} or a full parameter object.
MemoryParams memory_from_json(const json& j);
MemoryParams load_memory_params(const std::filesystem::path& path);

json detection_to_json(const DetectionConfig& cfg);
DetectionConfig detection_from_json(const json& j);

/// manifest.json plus shots.bin holding, per shot, the trace and then the
/// reference segment as binary envelope records (imaginary parts zero).
void write_shot_bundle(const std::filesystem::path& dir, const std::vector<HomodyneShot>& shots,
                       const DetectionConfig& cfg);
std::pair<std::vector<HomodyneShot>, DetectionConfig> read_shot_bundle(
    const std::filesystem::path& dir);

/// Rows "n,m,re,im,magnitude2,phase".
std::string matrix_to_csv(const OverlapMatrix& m);
json matrix_to_json(const OverlapMatrix& m);
json fit_to_json(const AngleFit& fit);

}  // namespace chronofrft::io
