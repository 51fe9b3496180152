#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "chronofrft/analysis.hpp"
#include "chronofrft/detection.hpp"
#include "chronofrft/errors.hpp"
#include "chronofrft/frft.hpp"
#include "chronofrft/memory.hpp"
#include "chronofrft/reproduce.hpp"
#include "chronofrft/wigner.hpp"

namespace py = pybind11;
using namespace chronofrft;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

CArray to_numpy(const std::vector<Complex>& v) {
  CArray a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

SampledEnvelope from_numpy(const TimeGrid& g, const CArray& a) {
  if (a.ndim() != 1 || static_cast<std::size_t>(a.shape(0)) != g.n) {
    throw InvalidArgument("samples must be a 1-d array with one entry per grid point");
  }
  return {g, std::vector<Complex>(a.data(), a.data() + a.shape(0))};
}

py::array_t<double> axis_values(const Axis& ax) {
  py::array_t<double> a(static_cast<py::ssize_t>(ax.count));
  for (std::size_t i = 0; i < ax.count; ++i) a.mutable_data()[i] = ax.at(i);
  return a;
}

PipelineKind pipeline_kind(const std::string& s) {
  if (s == "ideal") return PipelineKind::ideal;
  if (s == "memory") return PipelineKind::memory_channel;
  if (s == "full") return PipelineKind::full_with_detection;
  throw InvalidArgument("pipeline must be 'ideal', 'memory' or 'full'");
}

py::dict fit_dict(const AngleFit& f) {
  py::dict d;
  d["phi0"] = f.phi0;
  d["slope"] = f.slope;
  d["measured_angle"] = f.measured_angle();
  d["sigma_phi0"] = f.sigma_phi0;
  d["sigma_slope"] = f.sigma_slope;
  d["residuals"] = f.residuals;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core of chronofrft";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<TimeGrid>(m, "TimeGrid")
      .def(py::init<double, double, std::size_t>(), py::arg("t_start"), py::arg("dt"), py::arg("n"))
      .def_readonly("t_start", &TimeGrid::t_start)
      .def_readonly("dt", &TimeGrid::dt)
      .def_readonly("n", &TimeGrid::n)
      .def("times", [](const TimeGrid& g) {
        py::array_t<double> a(static_cast<py::ssize_t>(g.n));
        for (std::size_t j = 0; j < g.n; ++j) a.mutable_data()[j] = g.time(j);
        return a;
      })
      .def("__eq__", [](const TimeGrid& a, const TimeGrid& b) { return a == b; })
      .def("__repr__", [](const TimeGrid& g) {
        return "TimeGrid(t_start=" + std::to_string(g.t_start) + ", dt=" + std::to_string(g.dt) +
               ", n=" + std::to_string(g.n) + ")";
      });

  py::class_<SampledEnvelope>(m, "Envelope")
      .def(py::init(&from_numpy), py::arg("grid"), py::arg("samples"))
      .def_readonly("grid", &SampledEnvelope::grid)
      .def_property_readonly("samples", [](const SampledEnvelope& e) { return to_numpy(e.samples); })
      .def("norm", &SampledEnvelope::norm)
      .def("norm_squared", &SampledEnvelope::norm_squared);

  py::class_<WignerMap>(m, "WignerMap")
      .def_property_readonly("t", [](const WignerMap& w) { return axis_values(w.time_axis); })
      .def_property_readonly("w", [](const WignerMap& w) { return axis_values(w.freq_axis); })
      .def_property_readonly("values", [](const WignerMap& w) {
        py::array_t<double> a({static_cast<py::ssize_t>(w.time_axis.count),
                               static_cast<py::ssize_t>(w.freq_axis.count)});
        std::copy(w.values.begin(), w.values.end(), a.mutable_data());
        return a;
      })
      .def_readonly("imag_residue", &WignerMap::imag_residue)
      .def("integral", &WignerMap::integral);

  m.def("make_grid", &make_grid, py::arg("n"), py::arg("dt"));
  m.def("reference_grid", &reference_grid);
  m.def("hermite_gauss", &hermite_gauss, py::arg("n"), py::arg("grid"), py::arg("center") = 0.0,
        py::arg("width") = 1.0);
  m.def("cat_state", &cat_state, py::arg("grid"), py::arg("mu"), py::arg("s"));
  m.def("gaussian_pulse", &gaussian_pulse, py::arg("grid"), py::arg("center"), py::arg("width"),
        py::arg("offset") = 0.0);
  m.def("overlap", &overlap, py::arg("a"), py::arg("b"));
  m.def(
      "to_spectrum",
      [](const SampledEnvelope& e) {
        const SpectralEnvelope s = to_spectrum(e);
        py::array_t<double> w(static_cast<py::ssize_t>(s.grid.n));
        for (std::size_t k = 0; k < s.grid.n; ++k) w.mutable_data()[k] = s.grid.omega(k);
        return py::make_tuple(w, to_numpy(s.samples));
      },
      py::arg("e"), "Returns (omega, spectrum).");

  m.def(
      "frft",
      [](const SampledEnvelope& e, double phi, const std::string& method, bool split) {
        if (method == "direct") return frft_direct_kernel(e, phi);
        if (method != "lens") throw InvalidArgument("method must be 'lens' or 'direct'");
        return frft_lens_sequence(e, phi, split);
      },
      py::arg("e"), py::arg("phi"), py::arg("method") = "lens", py::arg("split") = true);

  m.def(
      "wigner",
      [](const SampledEnvelope& e, std::optional<double> extent, std::size_t pad) {
        if (extent) return wigner_square(e, *extent, pad);
        WignerOptions opts;
        opts.pad_factor = pad;
        return wigner(e, opts);
      },
      py::arg("e"), py::arg("extent") = py::none(), py::arg("pad") = 1);
  m.def("rotate_map", &rotate_map, py::arg("map"), py::arg("phi"));
  m.def("map_fidelity", &map_fidelity, py::arg("a"), py::arg("b"));
  m.def("state_fidelity", &state_fidelity, py::arg("a"), py::arg("b"));

  m.def("memory_preset_names", &memory_preset_names);
  m.def(
      "bandwidth_after_lens", [](double tb, double phi) { return bandwidth_after_lens(tb, phi).tb_prime; },
      py::arg("tb"), py::arg("phi"));
  m.def(
      "storage_efficiency",
      [](double od, double tb_prime, const std::string& preset) {
        MemoryParams p = memory_preset(preset);
        p.od = od;
        return storage_efficiency(p, tb_prime);
      },
      py::arg("od"), py::arg("tb_prime"), py::arg("preset") = "gem");
  m.def(
      "memory_channel",
      [](const SampledEnvelope& e, double phi, const std::string& preset) {
        PipelineConfig cfg;
        cfg.kind = PipelineKind::memory_channel;
        return apply_memory_channel(e, memory_preset(preset), pipeline_plan(phi, cfg));
      },
      py::arg("e"), py::arg("phi"), py::arg("preset") = "gem-experiment");

  m.def(
      "detect",
      [](const SampledEnvelope& e, std::uint64_t seed, std::size_t shots, std::optional<double> noise_sigma) {
        DetectionConfig cfg = calibrated_detection(e.grid, seed);
        cfg.shots = shots;
        if (noise_sigma) cfg.noise_sigma = *noise_sigma;
        return recover_envelope(simulate_shots(e, cfg), cfg);
      },
      py::arg("e"), py::arg("seed"), py::arg("shots") = 200, py::arg("noise_sigma") = py::none(),
      "Simulate calibrated homodyne shots and return the recovered envelope.");

  m.def(
      "decompose",
      [](const SampledEnvelope& e, int n_max, double center, double width) {
        return to_numpy(decompose(e, center, width, n_max));
      },
      py::arg("e"), py::arg("n_max") = 10, py::arg("center") = 0.0, py::arg("width") = 1.0);

  m.def(
      "transition_matrix",
      [](double phi, const std::string& pipeline, int n_max, std::optional<std::uint64_t> seed,
         const std::string& preset, std::optional<TimeGrid> grid) {
        PipelineConfig cfg;
        cfg.kind = pipeline_kind(pipeline);
        if (cfg.kind == PipelineKind::full_with_detection && !seed) {
          throw InvalidArgument("the full pipeline is stochastic; pass seed=");
        }
        if (grid) cfg.grid = *grid;
        cfg.memory = memory_preset(preset);
        cfg.detection = calibrated_detection(cfg.grid, seed.value_or(0));
        const OverlapMatrix mat = transition_matrix(phi, cfg, n_max);
        CArray a({static_cast<py::ssize_t>(mat.size()), static_cast<py::ssize_t>(mat.size())});
        std::copy(mat.coeffs.begin(), mat.coeffs.end(), a.mutable_data());
        return a;
      },
      py::arg("phi"), py::arg("pipeline") = "ideal", py::arg("n_max") = 10, py::arg("seed") = py::none(),
      py::arg("preset") = "gem-experiment", py::arg("grid") = py::none());

  m.def(
      "fit_angle",
      [](const std::vector<int>& n, const std::vector<double>& phase) {
        if (n.size() != phase.size()) throw InvalidArgument("n and phase must have equal length");
        std::vector<ModePhase> pts;
        for (std::size_t i = 0; i < n.size(); ++i) pts.push_back({n[i], phase[i]});
        return fit_dict(fit_angle(pts));
      },
      py::arg("n"), py::arg("phase"));

  m.def(
      "reproduce_table1",
      [](std::uint64_t seed, std::size_t shots) {
        ReproduceOptions opts;
        opts.seed = seed;
        opts.shots = shots;
        py::list rows;
        for (const auto& r : reproduce_table1(opts)) {
          py::dict d;
          d["set_angle"] = r.set_angle;
          d["ideal"] = r.ideal.measured_angle();
          d["measured"] = r.full.measured_angle();
          d["sigma"] = r.full.sigma_slope;
          d["deviation"] = r.full_deviation();
          d["hardware"] = r.hardware_angle;
          d["tb_prime"] = r.tb_prime;
          d["efficiency"] = r.efficiency;
          rows.append(d);
        }
        return rows;
      },
      py::arg("seed"), py::arg("shots") = 200);
}
