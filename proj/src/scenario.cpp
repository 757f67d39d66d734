#include "rbo/scenario.hpp"

#include "rbo/io.hpp"
#include "rbo/states.hpp"
#include "rbo/trapping.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace rbo {

namespace {

constexpr double kEdgeLeakageWarn = 1e-6;
constexpr int kGridRowCap = 4096;
constexpr const char* kVersion = "0.1.0";

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_complex(const Complex& z) {
    if (z.imag() == 0.0) return format_double(z.real());
    char buf[72];
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

std::string to_string(InitialKind kind) {
    return kind == InitialKind::Gaussian ? "gaussian" : "trapped";
}

InitialKind initial_kind_from_string(const std::string& s) {
    if (s == "gaussian") return InitialKind::Gaussian;
    if (s == "trapped") return InitialKind::Trapped;
    throw ConfigError("unknown initial kind '" + s +
                      "' (expected gaussian|trapped)");
}

}  // namespace

double ScenarioConfig::effective_tau_end() const {
    if (run.tau_end.has_value()) return *run.tau_end;
    // >= 2 Bloch periods when tilted, else >= several Rabi cycles.
    if (drive.omega_B > 0.0) return 2.5 * (2.0 * M_PI / drive.omega_B);
    if (drive.omega_R > 0.0) return 10.0 * (2.0 * M_PI / drive.omega_R);
    return 1000.0;
}

int ScenarioConfig::effective_grid_every() const {
    if (run.grid_every > 0) return run.grid_every;
    const long long n_steps = std::llround(effective_tau_end() / run.d_tau);
    const long long n_records = n_steps / run.record_every + 1;
    return static_cast<int>(std::max<long long>(
        1, (n_records + kGridRowCap - 1) / kGridRowCap));
}

void ScenarioConfig::validate() const {
    try {
        chain.validate();
        drive.validate();
    } catch (const ConfigError&) {
        throw;
    }
    if (!(initial.width > 0.0))
        throw ConfigError("initial.width must be positive");
    if (!(initial.center >= 0.0) || initial.center >= chain.n_sites)
        throw ConfigError("initial.center must lie inside the chain");
    if (!std::isfinite(initial.momentum))
        throw ConfigError("initial.momentum must be finite");
    if (run.tau_end.has_value() &&
        (!(*run.tau_end >= 0.0) || !std::isfinite(*run.tau_end)))
        throw ConfigError("run.tau_end must be >= 0");
    if (!(run.d_tau > 0.0))
        throw ConfigError("run.d_tau must be positive");
    if (run.d_tau * std::abs(drive.nu) > 0.125)
        throw ConfigError("run.d_tau too coarse: require d_tau*nu <= 0.125");
    if (run.record_every < 1)
        throw ConfigError("run.record_every must be >= 1");
    if (run.grid_every < 0)
        throw ConfigError("run.grid_every must be >= 0");
    for (int p : run.probes)
        if (p < 0 || p >= chain.n_sites)
            throw ConfigError("probe site " + std::to_string(p) +
                              " out of range");
    // Optical (dipole) lines live near nu; the record grid must resolve them.
    if (drive.omega_R != 0.0 && drive.nu > 0.0) {
        const double nyquist = M_PI / (run.record_every * run.d_tau);
        if (!(nyquist > 1.2 * drive.nu))
            throw ConfigError(
                "record grid too coarse for dipole spectra: require "
                "pi/(record_every*d_tau) > 1.2*nu");
    }
    if (analysis.zero_pad < 1)
        throw ConfigError("analysis.zero_pad must be >= 1");
    if (!(analysis.threshold > 0.0) || analysis.threshold > 1.0)
        throw ConfigError("analysis.threshold must lie in (0, 1]");
}

namespace {

void check_preset_invariants(const ScenarioConfig& c) {
    auto fail = [&](const std::string& what) {
        throw ConfigError("preset " + c.name + " violates its invariant: " +
                          what);
    };
    const std::string& id = c.name;
    if (id == "a" && c.drive.omega_R != 0.0) fail("omega_R must be 0");
    if ((id == "b" || id == "c") && c.drive.omega_B != 0.0)
        fail("omega_B must be 0");
    if ((id == "b" || id == "d" || id == "f") && c.drive.K != 0.0)
        fail("K must be 0");
    if ((id == "c" || id == "e" || id == "f-oblique") && c.drive.K == 0.0)
        fail("K must be nonzero");
    if (id == "e" && c.chain.t_a != c.chain.t_b) fail("t_a must equal t_b");
    if ((id == "f" || id == "f-oblique") && c.chain.t_b != 0.0)
        fail("t_b must vanish");
    if ((id == "ii" || id == "iv") && c.drive.omega_B != 0.0)
        fail("omega_B must be 0");
    if (id == "i" && c.drive.omega_R != 0.0) fail("omega_R must be 0");
}

}  // namespace

ScenarioConfig preset(const std::string& id) {
    ScenarioConfig c;
    c.name = id;

    const double omega_b = 3.9e-3;
    const double omega_r = 2.5e-2;
    const double oblique_k = -0.624;

    const bool trapped_family = (id == "i" || id == "ii" || id == "iii" ||
                                 id == "iv" || id == "v");
    if (trapped_family) {
        c.chain.t_a = 3.5e-2;
        c.chain.t_b = 3.5e-3;
        c.initial.kind = InitialKind::Trapped;
        // All trapped runs start from the same packet: the Gaussian analog
        // of the trapped state for the ac amplitude above.
        c.initial.momentum =
            eigen_wavenumber(omega_r, c.chain.t_a.real(), c.chain.t_b.real())
                .ha;
        c.run.variant = ModelVariant::Rwa;
        if (id == "i") {
            c.drive.omega_B = omega_b;
        } else if (id == "ii") {
            c.drive.omega_R = omega_r;
        } else if (id == "iii") {
            c.drive.omega_B = omega_b;
            c.drive.omega_R = omega_r;
        } else if (id == "iv") {
            c.drive.omega_R = omega_r;
            c.drive.K = oblique_k;
        } else {
            c.drive.omega_B = omega_b;
            c.drive.omega_R = omega_r;
            c.drive.K = oblique_k;
        }
    } else if (id == "a") {
        c.drive.omega_B = omega_b;
    } else if (id == "b") {
        c.drive.omega_R = omega_r;
    } else if (id == "c") {
        c.drive.omega_R = omega_r;
        c.drive.K = oblique_k;
    } else if (id == "d") {
        c.drive.omega_B = omega_b;
        c.drive.omega_R = omega_r;
    } else if (id == "e") {
        c.drive.omega_B = omega_b;
        c.drive.omega_R = omega_r;
        c.drive.K = oblique_k;
    } else if (id == "f" || id == "f-oblique") {
        c.drive.omega_B = omega_b;
        c.drive.omega_R = omega_r;
        c.chain.t_b = 0.0;
        if (id == "f-oblique") c.drive.K = oblique_k;
    } else {
        throw ConfigError("unknown preset '" + id + "'");
    }

    check_preset_invariants(c);
    c.validate();
    return c;
}

std::vector<std::string> preset_ids() {
    return {"a",  "b",  "c",   "d",  "e", "f",
            "f-oblique", "i", "ii", "iii", "iv", "v"};
}

WaveState initial_state(const ScenarioConfig& config) {
    if (config.initial.kind == InitialKind::Gaussian)
        return gaussian_packet(config.chain, config.initial.center,
                               config.initial.width, config.initial.momentum,
                               config.initial.band);
    return trapped_packet(config.chain, config.initial.center,
                          config.initial.width, config.initial.momentum);
}

// ---------------------------------------------------------------- config io

namespace {

double parse_double_value(const std::string& value, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError("cannot parse number '" + value + "' for key " + key);
    return v;
}

int parse_int_value(const std::string& value, const std::string& key) {
    const double v = parse_double_value(value, key);
    const int i = static_cast<int>(std::llround(v));
    if (v != static_cast<double>(i))
        throw ConfigError("expected integer for key " + key);
    return i;
}

Complex parse_complex_value(const std::string& value, const std::string& key) {
    char* end = nullptr;
    const double re = std::strtod(value.c_str(), &end);
    if (end == value.c_str())
        throw ConfigError("cannot parse '" + value + "' for key " + key);
    if (*end == '\0') return {re, 0.0};
    const char* rest = end;
    const double im = std::strtod(rest, &end);
    if (end == rest || (*end != 'i' && *end != 'I') || *(end + 1) != '\0')
        throw ConfigError("cannot parse complex '" + value + "' for key " +
                          key + " (expected re or re+imi)");
    return {re, im};
}

std::vector<int> parse_probes_value(const std::string& value,
                                    const std::string& key) {
    std::vector<int> probes;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ','))
        probes.push_back(parse_int_value(item, key));
    if (probes.empty()) throw ConfigError("empty probe list for key " + key);
    return probes;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"chain.n_sites",
         [](ScenarioConfig& c, const std::string& v) {
             c.chain.n_sites = parse_int_value(v, "chain.n_sites");
         }},
        {"chain.delta_eps",
         [](ScenarioConfig& c, const std::string& v) {
             c.chain.delta_eps = parse_double_value(v, "chain.delta_eps");
         }},
        {"chain.t_a",
         [](ScenarioConfig& c, const std::string& v) {
             c.chain.t_a = parse_complex_value(v, "chain.t_a");
         }},
        {"chain.t_b",
         [](ScenarioConfig& c, const std::string& v) {
             c.chain.t_b = parse_complex_value(v, "chain.t_b");
         }},
        {"chain.mu_a",
         [](ScenarioConfig& c, const std::string& v) {
             c.chain.mu_a = parse_double_value(v, "chain.mu_a");
         }},
        {"chain.mu_b",
         [](ScenarioConfig& c, const std::string& v) {
             c.chain.mu_b = parse_double_value(v, "chain.mu_b");
         }},
        {"chain.s_a",
         [](ScenarioConfig& c, const std::string& v) {
             c.chain.s_a = parse_double_value(v, "chain.s_a");
         }},
        {"chain.s_b",
         [](ScenarioConfig& c, const std::string& v) {
             c.chain.s_b = parse_double_value(v, "chain.s_b");
         }},
        {"chain.lattice_const_nm",
         [](ScenarioConfig& c, const std::string& v) {
             c.chain.lattice_const_nm =
                 parse_double_value(v, "chain.lattice_const_nm");
         }},
        {"drive.omega_B",
         [](ScenarioConfig& c, const std::string& v) {
             c.drive.omega_B = parse_double_value(v, "drive.omega_B");
         }},
        {"drive.omega_R",
         [](ScenarioConfig& c, const std::string& v) {
             c.drive.omega_R = parse_double_value(v, "drive.omega_R");
         }},
        {"drive.nu",
         [](ScenarioConfig& c, const std::string& v) {
             c.drive.nu = parse_double_value(v, "drive.nu");
         }},
        {"drive.K",
         [](ScenarioConfig& c, const std::string& v) {
             c.drive.K = parse_double_value(v, "drive.K");
         }},
        {"drive.phi",
         [](ScenarioConfig& c, const std::string& v) {
             c.drive.phi = parse_double_value(v, "drive.phi");
         }},
        {"drive.eta_a",
         [](ScenarioConfig& c, const std::string& v) {
             c.drive.eta_a = parse_double_value(v, "drive.eta_a");
         }},
        {"drive.eta_b",
         [](ScenarioConfig& c, const std::string& v) {
             c.drive.eta_b = parse_double_value(v, "drive.eta_b");
         }},
        {"initial.kind",
         [](ScenarioConfig& c, const std::string& v) {
             c.initial.kind = initial_kind_from_string(v);
         }},
        {"initial.center",
         [](ScenarioConfig& c, const std::string& v) {
             c.initial.center = parse_double_value(v, "initial.center");
         }},
        {"initial.width",
         [](ScenarioConfig& c, const std::string& v) {
             c.initial.width = parse_double_value(v, "initial.width");
         }},
        {"initial.momentum",
         [](ScenarioConfig& c, const std::string& v) {
             c.initial.momentum = parse_double_value(v, "initial.momentum");
         }},
        {"initial.band",
         [](ScenarioConfig& c, const std::string& v) {
             c.initial.band = band_from_string(v);
         }},
        {"run.tau_end",
         [](ScenarioConfig& c, const std::string& v) {
             if (v == "auto")
                 c.run.tau_end.reset();
             else
                 c.run.tau_end = parse_double_value(v, "run.tau_end");
         }},
        {"run.d_tau",
         [](ScenarioConfig& c, const std::string& v) {
             c.run.d_tau = parse_double_value(v, "run.d_tau");
         }},
        {"run.record_every",
         [](ScenarioConfig& c, const std::string& v) {
             c.run.record_every = parse_int_value(v, "run.record_every");
         }},
        {"run.probes",
         [](ScenarioConfig& c, const std::string& v) {
             c.run.probes = parse_probes_value(v, "run.probes");
         }},
        {"run.variant",
         [](ScenarioConfig& c, const std::string& v) {
             c.run.variant = variant_from_string(v);
         }},
        {"run.grid_every",
         [](ScenarioConfig& c, const std::string& v) {
             c.run.grid_every = parse_int_value(v, "run.grid_every");
         }},
        {"analysis.window",
         [](ScenarioConfig& c, const std::string& v) {
             c.analysis.window = window_from_string(v);
         }},
        {"analysis.zero_pad",
         [](ScenarioConfig& c, const std::string& v) {
             c.analysis.zero_pad = parse_int_value(v, "analysis.zero_pad");
         }},
        {"analysis.threshold",
         [](ScenarioConfig& c, const std::string& v) {
             c.analysis.threshold = parse_double_value(v, "analysis.threshold");
         }},
    };
    return table;
}

// Leaf names are unique across the schema, so "omega_R" resolves to
// "drive.omega_R" etc.
const std::map<std::string, std::string>& leaf_aliases() {
    static const std::map<std::string, std::string> table = [] {
        std::map<std::string, std::string> aliases;
        for (const auto& [key, _] : setters()) {
            const auto dot = key.rfind('.');
            aliases.emplace(key.substr(dot + 1), key);
        }
        return aliases;
    }();
    return table;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

void apply_key(ScenarioConfig& config, const std::string& key,
               const std::string& value, int line_no) {
    const auto& table = setters();
    auto it = table.find(key);
    if (it == table.end()) {
        const auto& aliases = leaf_aliases();
        auto alias = aliases.find(key);
        if (alias == aliases.end())
            throw ConfigError("unknown key '" + key + "' (line " +
                              std::to_string(line_no) + ")");
        it = table.find(alias->second);
    }
    try {
        it->second(config, value);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(e.what()) + " (line " +
                          std::to_string(line_no) + ")");
    }
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig config;
    bool any_key_seen = false;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value' (line " +
                              std::to_string(line_no) + ")");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("empty key or value (line " +
                              std::to_string(line_no) + ")");
        if (key == "preset") {
            if (any_key_seen)
                throw ConfigError("preset must precede any override (line " +
                                  std::to_string(line_no) + ")");
            config = preset(value);
            any_key_seen = true;
            continue;
        }
        apply_key(config, key, value, line_no);
        any_key_seen = true;
    }
    config.validate();
    return config;
}

ScenarioConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const ScenarioConfig& config) {
    std::ostringstream out;
    out << "# " << config.name << "\n";
    out << "chain.n_sites = " << config.chain.n_sites << "\n";
    out << "chain.delta_eps = " << format_double(config.chain.delta_eps) << "\n";
    out << "chain.t_a = " << format_complex(config.chain.t_a) << "\n";
    out << "chain.t_b = " << format_complex(config.chain.t_b) << "\n";
    out << "chain.mu_a = " << format_double(config.chain.mu_a) << "\n";
    out << "chain.mu_b = " << format_double(config.chain.mu_b) << "\n";
    out << "chain.s_a = " << format_double(config.chain.s_a) << "\n";
    out << "chain.s_b = " << format_double(config.chain.s_b) << "\n";
    out << "chain.lattice_const_nm = "
        << format_double(config.chain.lattice_const_nm) << "\n";
    out << "drive.omega_B = " << format_double(config.drive.omega_B) << "\n";
    out << "drive.omega_R = " << format_double(config.drive.omega_R) << "\n";
    out << "drive.nu = " << format_double(config.drive.nu) << "\n";
    out << "drive.K = " << format_double(config.drive.K) << "\n";
    out << "drive.phi = " << format_double(config.drive.phi) << "\n";
    out << "drive.eta_a = " << format_double(config.drive.eta_a) << "\n";
    out << "drive.eta_b = " << format_double(config.drive.eta_b) << "\n";
    out << "initial.kind = " << to_string(config.initial.kind) << "\n";
    out << "initial.center = " << format_double(config.initial.center) << "\n";
    out << "initial.width = " << format_double(config.initial.width) << "\n";
    out << "initial.momentum = " << format_double(config.initial.momentum)
        << "\n";
    out << "initial.band = " << to_string(config.initial.band) << "\n";
    out << "run.tau_end = "
        << (config.run.tau_end ? format_double(*config.run.tau_end) : "auto")
        << "\n";
    out << "run.d_tau = " << format_double(config.run.d_tau) << "\n";
    out << "run.record_every = " << config.run.record_every << "\n";
    std::ostringstream probes;
    for (std::size_t i = 0; i < config.run.probes.size(); ++i)
        probes << (i ? "," : "") << config.run.probes[i];
    out << "run.probes = " << probes.str() << "\n";
    out << "run.variant = " << to_string(config.run.variant) << "\n";
    out << "run.grid_every = " << config.run.grid_every << "\n";
    out << "analysis.window = " << to_string(config.analysis.window) << "\n";
    out << "analysis.zero_pad = " << config.analysis.zero_pad << "\n";
    out << "analysis.threshold = " << format_double(config.analysis.threshold)
        << "\n";
    return out.str();
}

// ------------------------------------------------------------------- runs

namespace {

struct GridAccumulator {
    std::vector<double> data;
    int n_rows = 0;
    int n_cols = 0;

    void add_row(const RVector& row) {
        if (n_rows == 0) n_cols = static_cast<int>(row.size());
        data.insert(data.end(), row.data(), row.data() + row.size());
        ++n_rows;
    }
};

std::string series_key(SeriesKind kind, const ProbeSpec& probe) {
    return to_string(kind) + "_" + probe.label();
}

std::vector<int> unique_probes(const std::vector<int>& probes) {
    std::vector<int> out;
    for (int p : probes)
        if (std::find(out.begin(), out.end(), p) == out.end())
            out.push_back(p);
    return out;
}

void register_output(RunManifest& manifest, const std::filesystem::path& dir,
                     const std::string& filename) {
    FileRecord rec;
    rec.bytes = std::filesystem::file_size(dir / filename);
    rec.fnv1a64 = to_hex(fnv1a64_file(dir / filename));
    manifest.outputs[filename] = rec;
}

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& dir) {
    nlohmann::ordered_json j;
    j["version"] = manifest.version;
    j["tau_start"] = manifest.tau_start;
    j["tau_end"] = manifest.tau_end;
    j["n_steps"] = manifest.n_steps;
    j["max_norm_drift"] = manifest.max_norm_drift;
    j["max_edge_leakage"] = manifest.max_edge_leakage;
    j["edge_leakage_warning"] = manifest.edge_leakage_warning;
    j["config"] = manifest.config_echo;
    nlohmann::ordered_json outputs;
    for (const auto& [name, rec] : manifest.outputs)
        outputs[name] = {{"bytes", rec.bytes}, {"fnv1a64", rec.fnv1a64}};
    j["outputs"] = outputs;
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw IoError("cannot write manifest.json in " + dir.string());
    out << j.dump(2) << "\n";
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config,
                       const std::filesystem::path& out_dir) {
    config.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());

    const double tau_end = config.effective_tau_end();
    const int grid_every = config.effective_grid_every();
    const WaveState psi0 = initial_state(config);

    // Probes: configured sites (deduplicated) plus the spatial sum.
    std::vector<ProbeSpec> probes;
    for (int p : unique_probes(config.run.probes))
        probes.push_back(ProbeSpec::at(p));
    probes.push_back(ProbeSpec::sum());
    const std::vector<SeriesKind> kinds = {SeriesKind::Inversion,
                                           SeriesKind::TunnelCurrent,
                                           SeriesKind::DipoleCurrent};

    RunResult result;
    const double record_spacing = config.run.record_every * config.run.d_tau;
    // Flat (kind x probe) view into the series map, in loop order, so the
    // recording callback avoids per-record key lookups.
    std::vector<TimeSeriesRecord*> sinks;
    for (SeriesKind kind : kinds)
        for (const auto& probe : probes) {
            TimeSeriesRecord rec;
            rec.tau0 = psi0.tau;
            rec.d_tau = record_spacing;
            rec.kind = kind;
            rec.probe = probe.label();
            auto [it, _] =
                result.series.emplace(series_key(kind, probe), std::move(rec));
            sinks.push_back(&it->second);
        }

    GridAccumulator inv_grid, tun_grid, dip_grid;

    auto on_record = [&](int record_index, double, const WaveState& state) {
        const SiteSeries inv = inversion_density(state, config.chain);
        const SiteSeries tun = tunneling_current_symmetrized(state, config.chain);
        const SiteSeries dip = dipole_current(state, config.chain, config.drive);
        std::size_t sink = 0;
        for (const SiteSeries* s : {&inv, &tun, &dip})
            for (const auto& probe : probes)
                sinks[sink++]->values.push_back(
                    probe.spatial_sum ? s->values.sum()
                                      : s->values[probe.site]);
        if (record_index % grid_every == 0) {
            inv_grid.add_row(inv.values);
            tun_grid.add_row(tun.values);
            dip_grid.add_row(dip.values);
        }
    };

    RunManifest& manifest = result.manifest;
    manifest.version = kVersion;
    manifest.config_echo = serialize_config(config);
    manifest.tau_start = psi0.tau;
    manifest.n_steps = std::llround(tau_end / config.run.d_tau);

    propagate_observed(psi0, tau_end, config.run.d_tau, config.chain,
                       config.drive, config.run.variant,
                       config.run.record_every, on_record,
                       &manifest.max_norm_drift, &manifest.max_edge_leakage);
    manifest.tau_end = psi0.tau + manifest.n_steps * config.run.d_tau;
    manifest.edge_leakage_warning = manifest.max_edge_leakage > kEdgeLeakageWarn;
    if (manifest.edge_leakage_warning)
        std::cerr << "warning: edge leakage reached "
                  << manifest.max_edge_leakage
                  << "; boundary effects may contaminate observables\n";

    // Spectra (series shorter than 16 samples have none).
    for (auto& [key, series] : result.series) {
        if (series.size() < 16) continue;
        Spectrum spec = amplitude_spectrum(series, config.analysis.window,
                                           config.analysis.zero_pad);
        spec.peaks = find_peaks(spec, config.analysis.threshold);
        result.spectra.emplace(key, std::move(spec));
    }

    const double grid_spacing = record_spacing * grid_every;
    write_grid(out_dir / "inversion_grid.f64", inv_grid.data, inv_grid.n_rows,
               inv_grid.n_cols, psi0.tau, grid_spacing, "inversion_density",
               "1/N per site; tau in 1/omega0");
    write_grid(out_dir / "tunnel_grid.f64", tun_grid.data, tun_grid.n_rows,
               tun_grid.n_cols, psi0.tau, grid_spacing,
               "tunneling_current_symmetrized",
               "e*omega0 with e = hbar = 1; tau in 1/omega0");
    write_grid(out_dir / "dipole_grid.f64", dip_grid.data, dip_grid.n_rows,
               dip_grid.n_cols, psi0.tau, grid_spacing, "dipole_current",
               "nu-scaled interband current, e = hbar = 1");
    register_output(manifest, out_dir, "inversion_grid.f64");
    register_output(manifest, out_dir, "inversion_grid.json");
    register_output(manifest, out_dir, "tunnel_grid.f64");
    register_output(manifest, out_dir, "tunnel_grid.json");
    register_output(manifest, out_dir, "dipole_grid.f64");
    register_output(manifest, out_dir, "dipole_grid.json");

    for (const auto& [key, series] : result.series) {
        const std::string name = "series_" + key + ".txt";
        write_series(out_dir / name, series);
        register_output(manifest, out_dir, name);
    }
    for (const auto& [key, spec] : result.spectra) {
        const std::string spec_name = "spectrum_" + key + ".txt";
        const std::string peaks_name = "peaks_" + key + ".txt";
        write_spectrum(out_dir / spec_name, spec);
        write_peaks(out_dir / peaks_name, spec);
        register_output(manifest, out_dir, spec_name);
        register_output(manifest, out_dir, peaks_name);
    }

    write_manifest(manifest, out_dir);
    return result;
}

RwaComparison compare_rwa(const ScenarioConfig& config,
                          const std::filesystem::path& out_dir) {
    config.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());

    const double tau_end = config.effective_tau_end();
    const WaveState psi0 = initial_state(config);
    const double spacing = config.run.record_every * config.run.d_tau;

    const std::vector<int> probe_sites = unique_probes(config.run.probes);
    auto run_variant = [&](ModelVariant variant) {
        std::map<int, std::vector<double>> traces;
        for (int p : probe_sites) traces[p] = {};
        auto on_record = [&](int, double, const WaveState& state) {
            const SiteSeries inv = inversion_density(state, config.chain);
            for (int p : probe_sites) traces[p].push_back(inv.values[p]);
        };
        propagate_observed(psi0, tau_end, config.run.d_tau, config.chain,
                           config.drive, variant, config.run.record_every,
                           on_record);
        return traces;
    };

    const auto full = run_variant(ModelVariant::Full);
    const auto rwa = run_variant(ModelVariant::Rwa);

    RwaComparison cmp;
    auto dominant_peak = [&](const std::vector<double>& values) {
        TimeSeriesRecord rec;
        rec.tau0 = psi0.tau;
        rec.d_tau = spacing;
        rec.values = values;
        rec.kind = SeriesKind::Inversion;
        if (rec.size() < 16) return std::pair<double, double>{0.0, 0.0};
        Spectrum spec = amplitude_spectrum(rec, config.analysis.window,
                                           config.analysis.zero_pad);
        spec.peaks = find_peaks(spec, config.analysis.threshold);
        cmp.bin_width = spec.resolution;
        double best_freq = 0.0, best_amp = 0.0;
        for (const auto& p : spec.peaks)
            if (p.amplitude > best_amp) {
                best_amp = p.amplitude;
                best_freq = p.frequency;
            }
        return std::pair<double, double>{best_freq, best_amp};
    };

    nlohmann::ordered_json metrics;
    for (int p : probe_sites) {
        const auto& wf = full.at(p);
        const auto& wr = rwa.at(p);
        double diff2 = 0.0, ref2 = 0.0;
        for (std::size_t i = 0; i < wf.size(); ++i) {
            diff2 += (wf[i] - wr[i]) * (wf[i] - wr[i]);
            ref2 += wf[i] * wf[i];
        }
        RwaProbeMetrics m;
        m.site = p;
        m.rms_difference = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : 0.0;
        m.peak_freq_full = dominant_peak(wf).first;
        m.peak_freq_rwa = dominant_peak(wr).first;
        cmp.probes.push_back(m);

        std::ostringstream out;
        for (std::size_t i = 0; i < wf.size(); ++i)
            out << format_double(psi0.tau + i * spacing) << ' '
                << format_double(wf[i]) << ' ' << format_double(wr[i]) << '\n';
        std::ofstream file(out_dir /
                           ("rwa_compare_site" + std::to_string(p) + ".txt"),
                           std::ios::binary);
        if (!file) throw IoError("cannot write comparison trace");
        file << out.str();

        metrics["site" + std::to_string(p)] = {
            {"rms_difference", m.rms_difference},
            {"peak_freq_full", m.peak_freq_full},
            {"peak_freq_rwa", m.peak_freq_rwa}};
    }
    metrics["bin_width"] = cmp.bin_width;
    std::ofstream mfile(out_dir / "rwa_metrics.json", std::ios::binary);
    if (!mfile) throw IoError("cannot write rwa_metrics.json");
    mfile << metrics.dump(2) << "\n";
    return cmp;
}

void sweep(const ScenarioConfig& base, const std::string& key, double start,
           double stop, int steps, const std::filesystem::path& out_root,
           int n_workers) {
    if (steps < 1) throw ConfigError("sweep needs at least one step");
    std::error_code ec;
    std::filesystem::create_directories(out_root, ec);
    if (ec) throw IoError("cannot create sweep root " + out_root.string());

    std::vector<double> values(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        values[static_cast<std::size_t>(i)] =
            steps == 1 ? start : start + (stop - start) * i / (steps - 1);

    std::string dir_key = key;
    for (auto& ch : dir_key)
        if (ch == '.') ch = '_';

    // Validate the key and one point up-front so a bad sweep fails fast.
    {
        ScenarioConfig probe = base;
        apply_key(probe, key, format_double(values.front()), 0);
        probe.validate();
    }

    if (n_workers <= 0)
        n_workers = static_cast<int>(
            std::min<unsigned>(std::thread::hardware_concurrency(),
                               static_cast<unsigned>(steps)));
    n_workers = std::max(1, std::min(n_workers, steps));

    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= steps) return;
            try {
                ScenarioConfig point = base;
                char val[32];
                std::snprintf(val, sizeof(val), "%.9g",
                              values[static_cast<std::size_t>(i)]);
                apply_key(point, key, val, 0);
                point.name = base.name + "_" + dir_key + "_" + val;
                run_scenario(point, out_root / (dir_key + "_" + val));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rbo
