// Python bindings for the rbo core: parameter types, state constructors,
// propagation, observables, spectra, trapping analysis, and scenario runs.
#include <pybind11/pybind11.h>
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rbo/dynamics.hpp"
#include "rbo/io.hpp"
#include "rbo/observables.hpp"
#include "rbo/scenario.hpp"
#include "rbo/spectra.hpp"
#include "rbo/states.hpp"
#include "rbo/trapping.hpp"
#include "rbo/units.hpp"

namespace py = pybind11;
using namespace rbo;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rabi-Bloch oscillation simulator for driven two-level "
              "tight-binding chains";

    py::register_exception<ConfigError>(m, "RboConfigError");
    py::register_exception<NumericsError>(m, "RboNumericsError");
    py::register_exception<IoError>(m, "RboIoError");

    py::enum_<Band>(m, "Band")
        .value("excited", Band::Excited)
        .value("ground", Band::Ground);
    py::enum_<ModelVariant>(m, "ModelVariant")
        .value("full", ModelVariant::Full)
        .value("simplified", ModelVariant::Simplified)
        .value("rwa", ModelVariant::Rwa);
    py::enum_<Window>(m, "Window")
        .value("hann", Window::Hann)
        .value("rect", Window::Rect);
    py::enum_<SeriesKind>(m, "SeriesKind")
        .value("inversion", SeriesKind::Inversion)
        .value("tunnel", SeriesKind::TunnelCurrent)
        .value("dipole", SeriesKind::DipoleCurrent)
        .value("population", SeriesKind::Population);
    py::enum_<InitialKind>(m, "InitialKind")
        .value("gaussian", InitialKind::Gaussian)
        .value("trapped", InitialKind::Trapped);

    py::class_<ChainParams>(m, "ChainParams")
        .def(py::init<>())
        .def_readwrite("n_sites", &ChainParams::n_sites)
        .def_readwrite("delta_eps", &ChainParams::delta_eps)
        .def_readwrite("t_a", &ChainParams::t_a)
        .def_readwrite("t_b", &ChainParams::t_b)
        .def_readwrite("mu_a", &ChainParams::mu_a)
        .def_readwrite("mu_b", &ChainParams::mu_b)
        .def_readwrite("s_a", &ChainParams::s_a)
        .def_readwrite("s_b", &ChainParams::s_b)
        .def_readwrite("lattice_const_nm", &ChainParams::lattice_const_nm)
        .def("validate", &ChainParams::validate);

    py::class_<DriveParams>(m, "DriveParams")
        .def(py::init<>())
        .def_readwrite("omega_B", &DriveParams::omega_B)
        .def_readwrite("omega_R", &DriveParams::omega_R)
        .def_readwrite("nu", &DriveParams::nu)
        .def_readwrite("K", &DriveParams::K)
        .def_readwrite("phi", &DriveParams::phi)
        .def_readwrite("eta_a", &DriveParams::eta_a)
        .def_readwrite("eta_b", &DriveParams::eta_b)
        .def("validate", &DriveParams::validate);

    py::class_<WaveState>(m, "WaveState")
        .def(py::init<int, double>(), py::arg("n_sites"), py::arg("tau") = 0.0)
        .def_readwrite("a", &WaveState::a)
        .def_readwrite("b", &WaveState::b)
        .def_readwrite("tau", &WaveState::tau)
        .def_property_readonly("n_sites", &WaveState::n_sites)
        .def("norm", &WaveState::norm);

    m.def("gaussian_packet", &gaussian_packet, py::arg("chain"),
          py::arg("center"), py::arg("width_sites"), py::arg("momentum") = 0.0,
          py::arg("band") = Band::Excited);
    m.def("trapped_packet", &trapped_packet, py::arg("chain"),
          py::arg("center"), py::arg("width_sites"), py::arg("momentum") = 0.0);
    m.def("normalize", &normalize);
    m.def("omega_b_from_physical", &omega_b_from_physical,
          py::arg("lattice_const_nm"), py::arg("e_dc_kv_cm"), py::arg("gap_ev"));

    m.def("rhs", &rhs, py::arg("state"), py::arg("tau"), py::arg("chain"),
          py::arg("drive"), py::arg("variant"));
    m.def("step_rk4", &step_rk4, py::arg("state"), py::arg("tau"),
          py::arg("d_tau"), py::arg("chain"), py::arg("drive"),
          py::arg("variant"));

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("states", &Trajectory::states)
        .def_readonly("tau0", &Trajectory::tau0)
        .def_readonly("d_tau", &Trajectory::d_tau)
        .def_readonly("record_every", &Trajectory::record_every)
        .def_readonly("max_norm_drift", &Trajectory::max_norm_drift)
        .def_readonly("max_edge_leakage", &Trajectory::max_edge_leakage)
        .def("tau_grid", &Trajectory::tau_grid)
        .def("record_spacing", &Trajectory::record_spacing);

    m.def("propagate", &propagate, py::arg("state0"), py::arg("tau_end"),
          py::arg("d_tau"), py::arg("chain"), py::arg("drive"),
          py::arg("variant"), py::arg("record_every") = 1);
    m.def("oracle_propagate", &oracle_propagate, py::arg("state0"),
          py::arg("tau_end"), py::arg("n_substeps"), py::arg("chain"),
          py::arg("drive"), py::arg("variant"));

    py::class_<SiteSeries>(m, "SiteSeries")
        .def_readonly("values", &SiteSeries::values)
        .def_readonly("tau", &SiteSeries::tau)
        .def_readonly("kind", &SiteSeries::kind);

    m.def("inversion_density", &inversion_density);
    m.def("tunneling_current_two_point", &tunneling_current_two_point);
    m.def("tunneling_current_symmetrized", &tunneling_current_symmetrized);
    m.def("dipole_current", &dipole_current);
    m.def("population_density", &population_density);

    py::class_<Diagnostics>(m, "Diagnostics")
        .def_readonly("total_norm", &Diagnostics::total_norm)
        .def_readonly("pop_a", &Diagnostics::pop_a)
        .def_readonly("pop_b", &Diagnostics::pop_b)
        .def_readonly("centroid", &Diagnostics::centroid)
        .def_readonly("edge_leakage", &Diagnostics::edge_leakage);
    m.def("diagnostics", &diagnostics);

    py::class_<ProbeSpec>(m, "ProbeSpec")
        .def_static("sum", &ProbeSpec::sum)
        .def_static("at", &ProbeSpec::at, py::arg("site"))
        .def("label", &ProbeSpec::label);

    py::class_<TimeSeriesRecord>(m, "TimeSeriesRecord")
        .def(py::init<>())
        .def_readwrite("tau0", &TimeSeriesRecord::tau0)
        .def_readwrite("d_tau", &TimeSeriesRecord::d_tau)
        .def_readwrite("values", &TimeSeriesRecord::values)
        .def_readwrite("kind", &TimeSeriesRecord::kind)
        .def_readwrite("probe", &TimeSeriesRecord::probe);

    py::class_<Peak>(m, "Peak")
        .def_readonly("frequency", &Peak::frequency)
        .def_readonly("amplitude", &Peak::amplitude);

    py::class_<Spectrum>(m, "Spectrum")
        .def_readonly("freq", &Spectrum::freq)
        .def_readonly("amplitude", &Spectrum::amplitude)
        .def_readonly("peaks", &Spectrum::peaks)
        .def_readonly("resolution", &Spectrum::resolution)
        .def_readonly("dc_amplitude", &Spectrum::dc_amplitude);

    m.def("record_series", &record_series, py::arg("trajectory"),
          py::arg("kind"), py::arg("probe"));
    m.def("amplitude_spectrum", &amplitude_spectrum, py::arg("series"),
          py::arg("window") = Window::Hann, py::arg("zero_pad_factor") = 4);
    m.def("find_peaks", &find_peaks, py::arg("spectrum"),
          py::arg("rel_threshold") = 0.05);
    m.def("predicted_lines", &predicted_lines, py::arg("regime"),
          py::arg("kind"), py::arg("drive"), py::arg("order") = 3);
    m.def("matches_peak", &matches_peak, py::arg("spectrum"),
          py::arg("frequency"), py::arg("max_bins"));

    py::class_<TrappingAnalysis>(m, "TrappingAnalysis")
        .def_readonly("ratio", &TrappingAnalysis::ratio)
        .def_readonly("trapped", &TrappingAnalysis::trapped)
        .def_readonly("ha", &TrappingAnalysis::ha)
        .def_readonly("margin", &TrappingAnalysis::margin);

    m.def("dispersion_determinant", &dispersion_determinant, py::arg("ha"),
          py::arg("ka"), py::arg("omega_R"), py::arg("t_a"), py::arg("t_b"));
    m.def("eigen_wavenumber", &eigen_wavenumber, py::arg("omega_R"),
          py::arg("t_a"), py::arg("t_b"));
    m.def("steady_state", &steady_state, py::arg("chain"), py::arg("ha"));

    py::class_<InitialSpec>(m, "InitialSpec")
        .def_readwrite("kind", &InitialSpec::kind)
        .def_readwrite("center", &InitialSpec::center)
        .def_readwrite("width", &InitialSpec::width)
        .def_readwrite("momentum", &InitialSpec::momentum)
        .def_readwrite("band", &InitialSpec::band);
    py::class_<RunSpec>(m, "RunSpec")
        .def_readwrite("tau_end", &RunSpec::tau_end)  // None = auto
        .def_readwrite("d_tau", &RunSpec::d_tau)
        .def_readwrite("record_every", &RunSpec::record_every)
        .def_readwrite("probes", &RunSpec::probes)
        .def_readwrite("variant", &RunSpec::variant)
        .def_readwrite("grid_every", &RunSpec::grid_every);
    py::class_<AnalysisSpec>(m, "AnalysisSpec")
        .def_readwrite("window", &AnalysisSpec::window)
        .def_readwrite("zero_pad", &AnalysisSpec::zero_pad)
        .def_readwrite("threshold", &AnalysisSpec::threshold);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("name", &ScenarioConfig::name)
        .def_readwrite("chain", &ScenarioConfig::chain)
        .def_readwrite("drive", &ScenarioConfig::drive)
        .def_readwrite("initial", &ScenarioConfig::initial)
        .def_readwrite("run", &ScenarioConfig::run)
        .def_readwrite("analysis", &ScenarioConfig::analysis)
        .def("effective_tau_end", &ScenarioConfig::effective_tau_end)
        .def("validate", &ScenarioConfig::validate);

    m.def("preset", &preset, py::arg("id"));
    m.def("preset_ids", &preset_ids);
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("serialize_config", &serialize_config, py::arg("config"));
    m.def("initial_state", &initial_state, py::arg("config"));

    py::class_<FileRecord>(m, "FileRecord")
        .def_readonly("bytes", &FileRecord::bytes)
        .def_readonly("fnv1a64", &FileRecord::fnv1a64);
    py::class_<RunManifest>(m, "RunManifest")
        .def_readonly("version", &RunManifest::version)
        .def_readonly("config_echo", &RunManifest::config_echo)
        .def_readonly("tau_start", &RunManifest::tau_start)
        .def_readonly("tau_end", &RunManifest::tau_end)
        .def_readonly("n_steps", &RunManifest::n_steps)
        .def_readonly("max_norm_drift", &RunManifest::max_norm_drift)
        .def_readonly("max_edge_leakage", &RunManifest::max_edge_leakage)
        .def_readonly("edge_leakage_warning",
                      &RunManifest::edge_leakage_warning)
        .def_readonly("outputs", &RunManifest::outputs);
    py::class_<RunResult>(m, "RunResult")
        .def_readonly("manifest", &RunResult::manifest)
        .def_readonly("series", &RunResult::series)
        .def_readonly("spectra", &RunResult::spectra);

    m.def("run_scenario", &run_scenario, py::arg("config"), py::arg("out_dir"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<RwaProbeMetrics>(m, "RwaProbeMetrics")
        .def_readonly("site", &RwaProbeMetrics::site)
        .def_readonly("rms_difference", &RwaProbeMetrics::rms_difference)
        .def_readonly("peak_freq_full", &RwaProbeMetrics::peak_freq_full)
        .def_readonly("peak_freq_rwa", &RwaProbeMetrics::peak_freq_rwa);
    py::class_<RwaComparison>(m, "RwaComparison")
        .def_readonly("probes", &RwaComparison::probes)
        .def_readonly("bin_width", &RwaComparison::bin_width);
    m.def("compare_rwa", &compare_rwa, py::arg("config"), py::arg("out_dir"),
          py::call_guard<py::gil_scoped_release>());
    m.def("sweep", &sweep, py::arg("config"), py::arg("key"), py::arg("start"),
          py::arg("stop"), py::arg("steps"), py::arg("out_root"),
          py::arg("n_workers") = 0, py::call_guard<py::gil_scoped_release>());

    m.attr("__version__") = "0.1.0";
}
