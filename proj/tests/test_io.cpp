#include <unistd.h>

#include <filesystem>

#include "doctest.h"

#include "chronofrft/errors.hpp"
#include "chronofrft/io.hpp"

using namespace chronofrft;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("chronofrft_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("envelope round trips in every format") {
  auto g = make_grid(256, 0.1);
  auto e = gaussian_pulse(g, 0.3, 1.1, 2.0);
  for (auto fmt : {io::Format::csv, io::Format::bin, io::Format::json}) {
    auto path = scratch("env_" + std::to_string(static_cast<int>(fmt)));
    io::write_envelope(path, e, fmt, 4.2e-6);
    auto back = io::read_envelope(path);
    CHECK(back.envelope.grid == g);
    CHECK(back.envelope.samples == e.samples);
    CHECK(back.tau_seconds == 4.2e-6);
    CHECK(!fs::exists(path.string() + ".tmp"));
  }
  CHECK(io::parse_format("bin") == io::Format::bin);
  CHECK_THROWS_AS(io::parse_format("toml"), InvalidArgument);
}

TEST_CASE("malformed inputs raise IoError") {
  CHECK_THROWS_AS(io::envelope_from_csv("t,re,im\n0,1\n"), IoError);
  CHECK_THROWS_AS(io::envelope_from_binary("{\"format\":\"chronofrft.envelope\",\"n\":4,\"dt\":1,"
                                           "\"t_start\":0,\"tau_seconds\":1}\nabc"),
                  IoError);
  CHECK_THROWS_AS(io::read_envelope(scratch("missing_file")), IoError);
  CHECK_THROWS_AS(io::atomic_write("/nonexistent-dir/x", "data"), IoError);
}

TEST_CASE("Wigner map binary round trip") {
  auto g = make_grid(128, 0.1);
  auto w = wigner(hermite_gauss(1, g));
  auto back = io::map_from_binary(io::map_to_binary(w));
  CHECK(back.values == w.values);
  CHECK(back.time_axis.count == w.time_axis.count);
  CHECK(back.freq_axis.step == w.freq_axis.step);
  const auto csv = io::map_to_csv(w);
  CHECK(csv.rfind("t,w,W\n", 0) == 0);
}

TEST_CASE("plan, memory and detection JSON") {
  auto plan = make_plan(2.0 * kPi / 3.0);
  auto pj = io::plan_to_json(plan);
  CHECK(pj["stages"].size() == 2);
  auto back = io::plan_from_json(pj);
  CHECK(back.stages.size() == 2);
  CHECK(back.stages[0].d_t == plan.stages[0].d_t);
  CHECK(back.stages[1].phi == doctest::Approx(kPi / 3.0));

  auto path = scratch("mem.json");
  io::atomic_write(path, R"({"preset": "gem-decay", "od": 40, "efficiency_override": 0.33})");
  auto p = io::load_memory_params(path);
  CHECK(p.od == 40.0);
  CHECK(p.decay_model == DecayModel::formula_times_exp_decay);
  CHECK(*p.efficiency_override == 0.33);
  io::atomic_write(path, "{not json");
  CHECK_THROWS_AS(io::load_memory_params(path), IoError);
  CHECK_THROWS_AS(io::memory_from_json(io::json{{"preset", "gem"}, {"od", -1.0}}), InvalidArgument);

  DetectionConfig cfg = calibrated_detection(reference_grid(), 17);
  cfg.lo_phase_model = LoPhaseModel::slow_drift;
  cfg.drift_rate = 0.02;
  auto d = io::detection_from_json(io::detection_to_json(cfg));
  CHECK(d.seed == 17);
  CHECK(d.carrier == cfg.carrier);
  CHECK(d.noise_sigma == cfg.noise_sigma);
  CHECK(d.lo_phase_model == LoPhaseModel::slow_drift);
}

TEST_CASE("shot bundle round trip") {
  auto g = make_grid(512, 0.05);
  DetectionConfig cfg = calibrated_detection(g, 4);
  cfg.shots = 6;
  auto shots = simulate_shots(hermite_gauss(2, g), cfg);
  auto dir = scratch("bundle");
  io::write_shot_bundle(dir, shots, cfg);
  auto [back, bcfg] = io::read_shot_bundle(dir);
  REQUIRE(back.size() == shots.size());
  for (std::size_t k = 0; k < shots.size(); ++k) {
    CHECK(back[k].trace == shots[k].trace);
    CHECK(back[k].reference_segment == shots[k].reference_segment);
    CHECK(back[k].lo_phase_true == shots[k].lo_phase_true);
    CHECK(back[k].grid == g);
  }
  CHECK(bcfg.seed == 4);
  CHECK(l2_distance(recover_envelope(back, bcfg), recover_envelope(shots, cfg)) == 0.0);
}

TEST_CASE("matrix and fit exports") {
  OverlapMatrix m;
  m.n_max = 1;
  m.coeffs = {Complex(1, 0), Complex(0, 0.5), Complex(0, 0), Complex(-1, 0)};
  const auto csv = io::matrix_to_csv(m);
  CHECK(csv.rfind("n,m,re,im,magnitude2,phase\n", 0) == 0);
  CHECK(csv.find("0,1,0,0.5,0.25,1.5707963267948966") != std::string::npos);
  auto j = io::matrix_to_json(m);
  CHECK(j["im"][0][1] == 0.5);
  AngleFit f;
  f.slope = -0.5;
  CHECK(io::fit_to_json(f)["measured_angle"] == 0.5);
}
