// rbo — Rabi-Bloch oscillation simulator CLI
#include "rbo/io.hpp"
#include "rbo/scenario.hpp"
#include "rbo/units.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

namespace fs = std::filesystem;

namespace {

// Exit codes: 0 ok, 2 config error, 3 numerical abort, 4 I/O error.
enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3, kIoError = 4 };

fs::path output_root() {
    if (const char* env = std::getenv("RBO_OUT_DIR")) return fs::path(env);
    return fs::path("rbo_out");
}

fs::path resolve_out_dir(const std::string& out_flag,
                         const std::string& run_name) {
    if (!out_flag.empty()) return fs::path(out_flag);
    return output_root() / run_name;
}

rbo::ScenarioConfig load_config(const std::string& config_path,
                                const std::string& preset_id) {
    if (!preset_id.empty() && !config_path.empty())
        throw rbo::ConfigError("give either a config file or --preset, not both");
    if (!preset_id.empty()) return rbo::preset(preset_id);
    if (config_path.empty())
        throw rbo::ConfigError("a config file or --preset is required");
    return rbo::parse_config_file(config_path);
}

std::string run_name_for(const rbo::ScenarioConfig& config,
                         const std::string& config_path,
                         const std::string& preset_id) {
    if (!preset_id.empty()) return "preset_" + preset_id;
    if (!config_path.empty()) return fs::path(config_path).stem().string();
    return config.name;
}

struct SweepRange {
    std::string key;
    double start = 0.0, stop = 0.0;
    int steps = 0;
};

SweepRange parse_vary(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw rbo::ConfigError("--vary expects key=start:stop:steps");
    SweepRange range;
    range.key = text.substr(0, eq);
    const std::string rest = text.substr(eq + 1);
    const auto c1 = rest.find(':');
    const auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw rbo::ConfigError("--vary expects key=start:stop:steps");
    try {
        range.start = std::stod(rest.substr(0, c1));
        range.stop = std::stod(rest.substr(c1 + 1, c2 - c1 - 1));
        range.steps = std::stoi(rest.substr(c2 + 1));
    } catch (const std::exception&) {
        throw rbo::ConfigError("cannot parse --vary range '" + text + "'");
    }
    if (range.steps < 1) throw rbo::ConfigError("--vary needs steps >= 1");
    return range;
}

void print_presets() {
    std::cout << "id         description\n";
    std::cout << "a          dc tilt only: Bloch oscillations\n";
    std::cout << "b          resonant ac, k = 0: Rabi oscillations\n";
    std::cout << "c          resonant ac, oblique (Ka = -0.624): Rabi waves\n";
    std::cout << "d          dc + ac, k = 0: Rabi-Bloch oscillations\n";
    std::cout << "e          dc + ac, oblique, t_a = t_b: multiplet spectra\n";
    std::cout << "f          dc + ac, k = 0, t_b = 0: suppressed ground-state "
                 "tunneling\n";
    std::cout << "f-oblique  variant of f with Ka = -0.624\n";
    std::cout << "i          trapped packet, dc only\n";
    std::cout << "ii         trapped packet, resonant ac, k = 0 (trapping)\n";
    std::cout << "iii        trapped packet, dc + ac (trapping breakdown)\n";
    std::cout << "iv         trapped packet, resonant ac, oblique\n";
    std::cout << "v          trapped packet, dc + ac, oblique\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rabi-Bloch oscillation simulator for driven two-level "
                 "tight-binding chains"};
    app.require_subcommand(1);

    auto* cmd_presets =
        app.add_subcommand("presets", "list the built-in regime presets");

    std::string sim_config, sim_preset, sim_out;
    auto* cmd_sim = app.add_subcommand(
        "simulate", "propagate a scenario and write grids/series/spectra");
    cmd_sim->add_option("config", sim_config, "config file (key = value)");
    cmd_sim->add_option("--preset", sim_preset, "built-in preset id");
    cmd_sim->add_option("--out", sim_out, "output directory");

    std::string spec_file, spec_window = "hann", spec_out;
    int spec_pad = 4;
    double spec_threshold = 0.05;
    auto* cmd_spec = app.add_subcommand(
        "spectrum", "amplitude spectrum + peaks of a two-column series file");
    cmd_spec->add_option("series", spec_file, "two-column series file")
        ->required();
    cmd_spec->add_option("--window", spec_window, "hann|rect");
    cmd_spec->add_option("--zero-pad", spec_pad, "zero padding factor");
    cmd_spec->add_option("--threshold", spec_threshold,
                         "relative peak threshold in (0,1]");
    cmd_spec->add_option("--out", spec_out, "output directory");

    std::string rwa_config, rwa_preset, rwa_out;
    auto* cmd_rwa = app.add_subcommand(
        "compare-rwa", "run full vs RWA variants and report differences");
    cmd_rwa->add_option("config", rwa_config, "config file");
    cmd_rwa->add_option("--preset", rwa_preset, "built-in preset id");
    cmd_rwa->add_option("--out", rwa_out, "output directory");

    std::string sweep_config, sweep_vary, sweep_out;
    int sweep_workers = 0;
    auto* cmd_sweep = app.add_subcommand(
        "sweep", "fan a scenario over a parameter range");
    cmd_sweep->add_option("config", sweep_config, "config file")->required();
    cmd_sweep->add_option("--vary", sweep_vary, "key=start:stop:steps")
        ->required();
    cmd_sweep->add_option("--out", sweep_out, "output root directory");
    cmd_sweep->add_option("--workers", sweep_workers,
                          "worker threads (default: hardware)");

    double conv_a = 0.0, conv_edc = 0.0, conv_gap = 0.0;
    auto* cmd_conv = app.add_subcommand(
        "convert", "dimensionless Bloch frequency from physical parameters");
    cmd_conv->add_option("--a", conv_a, "lattice constant in nm")->required();
    cmd_conv->add_option("--edc", conv_edc, "dc field in kV/cm")->required();
    cmd_conv->add_option("--gap", conv_gap, "transition energy in eV")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (cmd_presets->parsed()) {
            print_presets();
        } else if (cmd_sim->parsed()) {
            const auto config = load_config(sim_config, sim_preset);
            const auto out =
                resolve_out_dir(sim_out, run_name_for(config, sim_config, sim_preset));
            const auto result = rbo::run_scenario(config, out);
            std::cout << "wrote " << result.manifest.outputs.size() + 1
                      << " files to " << out.string() << "\n";
            std::cout << "max norm drift " << result.manifest.max_norm_drift
                      << ", max edge leakage "
                      << result.manifest.max_edge_leakage << "\n";
        } else if (cmd_spec->parsed()) {
            const auto series = rbo::read_series(spec_file);
            auto spectrum = rbo::amplitude_spectrum(
                series, rbo::window_from_string(spec_window), spec_pad);
            spectrum.peaks = rbo::find_peaks(spectrum, spec_threshold);
            const fs::path in_path(spec_file);
            const fs::path dir =
                spec_out.empty() ? in_path.parent_path() : fs::path(spec_out);
            if (!dir.empty()) fs::create_directories(dir);
            const std::string stem = in_path.stem().string();
            rbo::write_spectrum(dir / (stem + ".spectrum.txt"), spectrum);
            rbo::write_peaks(dir / (stem + ".peaks.txt"), spectrum);
            std::cout << "bin width " << spectrum.resolution << ", dc "
                      << spectrum.dc_amplitude << "\n";
            for (const auto& p : spectrum.peaks)
                std::cout << "peak " << p.frequency << " amplitude "
                          << p.amplitude << "\n";
        } else if (cmd_rwa->parsed()) {
            const auto config = load_config(rwa_config, rwa_preset);
            const auto out = resolve_out_dir(
                rwa_out, "rwa_" + run_name_for(config, rwa_config, rwa_preset));
            const auto cmp = rbo::compare_rwa(config, out);
            for (const auto& m : cmp.probes)
                std::cout << "site " << m.site << ": rms diff "
                          << m.rms_difference << ", dominant line full "
                          << m.peak_freq_full << " vs rwa " << m.peak_freq_rwa
                          << "\n";
        } else if (cmd_sweep->parsed()) {
            const auto config = rbo::parse_config_file(sweep_config);
            const auto range = parse_vary(sweep_vary);
            const auto out = resolve_out_dir(
                sweep_out, "sweep_" + fs::path(sweep_config).stem().string());
            rbo::sweep(config, range.key, range.start, range.stop, range.steps,
                       out, sweep_workers);
            std::cout << "swept " << range.key << " over " << range.steps
                      << " points into " << out.string() << "\n";
        } else if (cmd_conv->parsed()) {
            std::cout << rbo::omega_b_from_physical(conv_a, conv_edc, conv_gap)
                      << "\n";
        }
    } catch (const rbo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const rbo::NumericsError& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return kNumericalError;
    } catch (const rbo::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIoError;
    }
    return kOk;
}
