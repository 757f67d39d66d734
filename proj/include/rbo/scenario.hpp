// scenario.hpp — regime presets, config parsing, batch execution
#pragma once

#include "rbo/dynamics.hpp"
#include "rbo/spectra.hpp"
#include "rbo/types.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rbo {

enum class InitialKind { Gaussian, Trapped };

struct InitialSpec {
    InitialKind kind = InitialKind::Gaussian;
    double center = 80.0;
    double width = 20.0;     // sites
    double momentum = 0.0;   // per-site phase advance h*a
    Band band = Band::Excited;
};

struct RunSpec {
    std::optional<double> tau_end;  // unset = regime-dependent default
    double d_tau = 0.01;
    int record_every = 5;
    std::vector<int> probes = {40, 60, 80};
    ModelVariant variant = ModelVariant::Simplified;
    int grid_every = 0;             // 0 = auto (cap grids near 4096 rows)
};

struct AnalysisSpec {
    Window window = Window::Hann;
    int zero_pad = 4;
    double threshold = 0.05;
};

struct ScenarioConfig {
    std::string name = "custom";
    ChainParams chain;
    DriveParams drive;
    InitialSpec initial;
    RunSpec run;
    AnalysisSpec analysis;

    double effective_tau_end() const;
    int effective_grid_every() const;
    void validate() const;  // throws ConfigError on violated invariants
};

// Fully populated configuration for one of the regime presets
// a..f (Gaussian packet) / i..v (trapped packet) / f-oblique.
ScenarioConfig preset(const std::string& id);
std::vector<std::string> preset_ids();

// key = value per line, '#' comments. Keys are ScenarioConfig field paths
// ("drive.omega_B"); unambiguous leaf names ("omega_B") are accepted too.
// A "preset = <id>" line seeds the config and must precede any override.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig parse_config_file(const std::filesystem::path& path);

// Canonical echo of a config in the same key = value grammar.
std::string serialize_config(const ScenarioConfig& config);

// Construct the initial state requested by the config.
WaveState initial_state(const ScenarioConfig& config);

struct FileRecord {
    std::uintmax_t bytes = 0;
    std::string fnv1a64;  // hex checksum
};

struct RunManifest {
    std::string version;
    std::string config_echo;
    double tau_start = 0.0;
    double tau_end = 0.0;
    long long n_steps = 0;
    double max_norm_drift = 0.0;
    double max_edge_leakage = 0.0;
    bool edge_leakage_warning = false;
    std::map<std::string, FileRecord> outputs;
};

struct RunResult {
    RunManifest manifest;
    // In-memory copies of the per-probe series and their spectra, keyed by
    // "<kind>_<probe>" (e.g. "inversion_site80").
    std::map<std::string, TimeSeriesRecord> series;
    std::map<std::string, Spectrum> spectra;
};

// Propagate, record, analyze and write spacetime grids, per-probe series,
// spectra with peak sidecars, and manifest.json under out_dir.
RunResult run_scenario(const ScenarioConfig& config,
                       const std::filesystem::path& out_dir);

struct RwaProbeMetrics {
    int site = 0;
    double rms_difference = 0.0;       // normalized to the full-model RMS
    double peak_freq_full = 0.0;       // dominant inversion-spectrum line
    double peak_freq_rwa = 0.0;
};

struct RwaComparison {
    std::vector<RwaProbeMetrics> probes;
    double bin_width = 0.0;
};

// Run the full and RWA variants from the identical initial state and write
// paired inversion traces plus difference metrics.
RwaComparison compare_rwa(const ScenarioConfig& config,
                          const std::filesystem::path& out_dir);

// Fan independent runs over a parameter range; each point lands in its own
// subdirectory of out_root. `steps` >= 1 points spanning [start, stop].
void sweep(const ScenarioConfig& base, const std::string& key, double start,
           double stop, int steps, const std::filesystem::path& out_root,
           int n_workers = 0);

}  // namespace rbo
