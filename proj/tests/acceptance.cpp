// Acceptance suite: end-to-end checks of the simulator against its
// quantitative anchors. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fail.
#include "rbo/dynamics.hpp"
#include "rbo/io.hpp"
#include "rbo/observables.hpp"
#include "rbo/scenario.hpp"
#include "rbo/spectra.hpp"
#include "rbo/states.hpp"
#include "rbo/trapping.hpp"
#include "rbo/units.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <map>
#include <sstream>
#include <vector>

using namespace rbo;
namespace fs = std::filesystem;

namespace {

constexpr double kOmegaB = 3.9e-3;
constexpr double kOmegaR = 2.5e-2;

int g_failures = 0;

void report(int id, const std::string& label, bool pass,
            const std::string& detail) {
    std::printf("%s criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", id,
                label.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

struct PresetOutcome {
    double norm_drift = 0.0;
    double wall_seconds = 0.0;
    double tau_end = 0.0;
    std::map<std::string, Spectrum> spectra;  // site-80 probes only
    std::map<std::string, FileRecord> outputs;
};

PresetOutcome run_preset(const std::string& id, const fs::path& dir) {
    const auto config = preset(id);
    const auto t0 = std::chrono::steady_clock::now();
    auto result = run_scenario(config, dir);
    const auto t1 = std::chrono::steady_clock::now();

    PresetOutcome out;
    out.norm_drift = result.manifest.max_norm_drift;
    out.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    out.tau_end = config.effective_tau_end();
    out.outputs = result.manifest.outputs;
    for (const char* key :
         {"inversion_site80", "tunnel_site80", "dipole_site80"})
        out.spectra.emplace(key, std::move(result.spectra.at(key)));
    return out;
}

const Peak* dominant(const Spectrum& spec) {
    const Peak* best = nullptr;
    for (const auto& p : spec.peaks)
        if (!best || p.amplitude > best->amplitude) best = &p;
    return best;
}

// ---------------------------------------------------------------- criteria

void criterion_1(const std::map<std::string, PresetOutcome>& runs) {
    bool pass = true;
    double worst_drift = 0.0, worst_wall = 0.0;
    std::string worst_id;
    for (const auto& [id, out] : runs) {
        if (out.norm_drift > worst_drift) {
            worst_drift = out.norm_drift;
            worst_id = id;
        }
        worst_wall = std::max(worst_wall, out.wall_seconds);
        if (out.norm_drift >= 1e-8 || out.wall_seconds >= 60.0) pass = false;
    }
    report(1, "unitarity at the default step over every preset", pass,
           "worst |1-norm| = " + fmt(worst_drift) + " (preset " + worst_id +
               "), slowest run " + fmt(worst_wall) + " s");
}

void criterion_2() {
    bool pass = true;
    std::string detail;
    for (int n : {3, 8}) {
        ChainParams chain;
        chain.n_sites = n;
        DriveParams drive;
        drive.omega_B = kOmegaB;
        drive.omega_R = kOmegaR;
        const auto psi0 =
            gaussian_packet(chain, n / 2.0, n / 4.0, 0.0, Band::Excited);
        const auto traj = propagate(psi0, 50.0, 0.005, chain, drive,
                                    ModelVariant::Simplified, 10000);
        const auto exact = oracle_propagate(psi0, 50.0, 50000, chain, drive,
                                            ModelVariant::Simplified);
        double diff = 0.0;
        const auto& fin = traj.states.back();
        for (int j = 0; j < n; ++j) {
            diff = std::max(diff, std::abs(fin.a[j] - exact.a[j]));
            diff = std::max(diff, std::abs(fin.b[j] - exact.b[j]));
        }
        if (diff > 1e-6) pass = false;
        detail += "N=" + std::to_string(n) + ": " + fmt(diff) + "  ";
    }
    report(2, "RK4 matches the matrix-exponential oracle to 1e-6", pass,
           detail);
}

void criterion_3(const PresetOutcome& a) {
    const auto& inv = a.spectra.at("inversion_site80");
    const auto& tun = a.spectra.at("tunnel_site80");
    const Peak* top = dominant(inv);
    const bool bloch_line =
        top && std::abs(top->frequency - kOmegaB) <= inv.resolution;
    const bool dc = matches_peak(tun, 0.0, 2);
    const bool first = matches_peak(tun, kOmegaB, 2);
    const bool second = matches_peak(tun, 2.0 * kOmegaB, 2);
    report(3, "preset-a Bloch line and tunnel-current harmonics",
           bloch_line && dc && first && second,
           "dominant inversion line " + fmt(top ? top->frequency : 0.0) +
               "; tunnel lines at 0/wB/2wB: " + std::to_string(dc) + "/" +
               std::to_string(first) + "/" + std::to_string(second));
}

void criterion_4(const PresetOutcome& b) {
    const auto& inv = b.spectra.at("inversion_site80");
    const auto& dip = b.spectra.at("dipole_site80");
    const Peak* top = dominant(inv);
    const bool rabi_line =
        top && std::abs(top->frequency - kOmegaR) <= inv.resolution;

    // The two strongest dipole peaks must sit at 1 -+ omega_R, none at 1.
    std::vector<Peak> peaks = dip.peaks;
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& x, const Peak& y) { return x.amplitude > y.amplitude; });
    bool duplet = peaks.size() >= 2;
    if (duplet) {
        const double lo = std::min(peaks[0].frequency, peaks[1].frequency);
        const double hi = std::max(peaks[0].frequency, peaks[1].frequency);
        duplet = std::abs(lo - (1.0 - kOmegaR)) <= 2.0 * dip.resolution &&
                 std::abs(hi - (1.0 + kOmegaR)) <= 2.0 * dip.resolution;
    }
    bool central_absent = true;
    for (const auto& p : dip.peaks)
        if (std::abs(p.frequency - 1.0) <= 2.0 * dip.resolution)
            central_absent = false;
    report(4, "preset-b Rabi line and zero-detuning dipole duplet",
           rabi_line && duplet && central_absent,
           "inversion line " + fmt(top ? top->frequency : 0.0) + "; duplet " +
               std::to_string(duplet) + ", central line absent " +
               std::to_string(central_absent));
}

void criterion_5(const PresetOutcome& d) {
    const auto& inv = d.spectra.at("inversion_site80");
    const bool lower = matches_peak(inv, kOmegaR - kOmegaB, 2);
    const bool center = matches_peak(inv, kOmegaR, 2);
    const bool upper = matches_peak(inv, kOmegaR + kOmegaB, 2);

    // The central line should top its two sidebands.
    auto peak_near = [&](double f) {
        double amp = 0.0;
        for (const auto& p : inv.peaks)
            if (std::abs(p.frequency - f) <= 2.0 * inv.resolution)
                amp = std::max(amp, p.amplitude);
        return amp;
    };
    const double c = peak_near(kOmegaR);
    const bool central_largest =
        c > peak_near(kOmegaR - kOmegaB) && c > peak_near(kOmegaR + kOmegaB);
    report(5, "preset-d inversion triplet at omega_R, omega_R -+ omega_B",
           lower && center && upper && central_largest,
           std::string("lines ") + std::to_string(lower) +
               std::to_string(center) + std::to_string(upper) +
               ", central largest " + std::to_string(central_largest));
}

void criterion_6(const PresetOutcome& e) {
    const auto& inv = e.spectra.at("inversion_site80");
    std::vector<Peak> band;
    for (const auto& p : inv.peaks)
        if (p.frequency >= kOmegaR - 3.0 * kOmegaB - inv.resolution &&
            p.frequency <= kOmegaR + 3.0 * kOmegaB + inv.resolution)
            band.push_back(p);
    bool spacing_ok = band.size() >= 2;
    for (std::size_t i = 1; i < band.size(); ++i) {
        const double gap = band[i].frequency - band[i - 1].frequency;
        if (gap < 0.7 * kOmegaB || gap > 1.3 * kOmegaB) spacing_ok = false;
    }
    report(6, "preset-e multiplet with Bloch-frequency line spacing",
           band.size() >= 5 && spacing_ok,
           std::to_string(band.size()) + " lines in omega_R -+ 3 omega_B, " +
               "spacing within 30% of omega_B: " + std::to_string(spacing_ok));
}

void criterion_7() {
    ChainParams chain;
    chain.n_sites = 1;
    DriveParams drive;
    drive.omega_R = kOmegaR;
    drive.nu = 1.0;
    WaveState psi0(1);
    psi0.a[0] = 1.0;
    double worst = 0.0;
    propagate_observed(psi0, 3.0 * 2.0 * M_PI / kOmegaR, 0.01, chain, drive,
                       ModelVariant::Rwa, 10,
                       [&](int, double tau, const WaveState& s) {
                           const double w =
                               std::norm(s.a[0]) - std::norm(s.b[0]);
                           worst = std::max(
                               worst, std::abs(w - std::cos(kOmegaR * tau)));
                       });
    report(7, "single-site RWA inversion equals cos(omega_R tau)",
           worst < 1e-6, "max deviation " + fmt(worst));
}

void criterion_8(const PresetOutcome& iii) {
    // Trapping: populations frozen over three Rabi periods.
    const auto config = preset("ii");
    const auto psi0 = initial_state(config);
    const double pa0 = diagnostics(psi0).pop_a;
    double worst = 0.0;
    propagate_observed(psi0, 3.0 * 2.0 * M_PI / kOmegaR, config.run.d_tau,
                       config.chain, config.drive, config.run.variant, 50,
                       [&](int, double, const WaveState& s) {
                           worst = std::max(
                               worst, std::abs(diagnostics(s).pop_a - pa0));
                       });
    const bool trapped = worst < 0.01;

    // Breakdown: the dc field revives interband oscillation at omega_B.
    const auto& inv = iii.spectra.at("inversion_site80");
    const Peak* top = dominant(inv);
    const bool at_bloch =
        top && std::abs(top->frequency - kOmegaB) <= 2.0 * inv.resolution;
    const bool not_rabi =
        top && std::abs(top->frequency - kOmegaR) > 2.0 * inv.resolution;
    report(8, "preset-ii coherent trapping, preset-iii dc breakdown",
           trapped && at_bloch && not_rabi,
           "population excursion " + fmt(worst) + "; breakdown line " +
               fmt(top ? top->frequency : 0.0));
}

void criterion_9() {
    const auto an = eigen_wavenumber(kOmegaR, 3.5e-2, 3.5e-3);
    const double residual =
        std::abs(dispersion_determinant(an.ha, 0.0, kOmegaR, 3.5e-2, 3.5e-3));
    const auto zero_drive = eigen_wavenumber(0.0, 3.5e-2, 3.5e-3);
    const double bound = 4.0 * std::sqrt(3.5e-2 * 3.5e-3);
    const auto threshold = eigen_wavenumber(bound, 3.5e-2, 3.5e-3);
    const bool boundaries =
        zero_drive.ha == M_PI / 2.0 && threshold.ha == 0.0;
    report(9, "trapping analytics: dispersion root and boundary cases",
           residual < 1e-12 && boundaries,
           "root residual " + fmt(residual) + ", boundary ha exact " +
               std::to_string(boundaries));
}

void criterion_10() {
    bool pass = true;
    std::string detail;
    for (const char* id : {"a", "d"}) {
        auto config = preset(id);
        config.run.d_tau = 0.02;  // the criterion pins this step
        config.run.record_every = 1;
        const auto psi0 = initial_state(config);

        std::deque<WaveState> window;
        double worst = 0.0;
        const double h = config.run.d_tau;
        propagate_observed(
            psi0, config.effective_tau_end(), h, config.chain, config.drive,
            config.run.variant, 1,
            [&](int, double, const WaveState& s) {
                window.push_back(s);
                if (window.size() < 3) return;
                const auto& prev = window[0];
                const auto& mid = window[1];
                const auto& next = window[2];
                const auto pop_prev =
                    population_density(prev, config.chain);
                const auto pop_next =
                    population_density(next, config.chain);
                const auto cur =
                    tunneling_current_two_point(mid, config.chain);
                for (int j = 0; j < config.chain.n_sites; ++j) {
                    const double rate =
                        (pop_next.values[j] - pop_prev.values[j]) / (2.0 * h);
                    const double left = (j > 0) ? cur.values[j - 1] : 0.0;
                    const double right = (j < config.chain.n_sites - 1)
                                             ? cur.values[j]
                                             : 0.0;
                    worst = std::max(worst, std::abs(rate + (right - left)));
                }
                window.pop_front();
            });
        if (worst >= 1e-6) pass = false;
        detail += std::string(id) + ": " + fmt(worst) + "  ";
    }
    report(10, "discrete continuity of the two-point current at d_tau = 0.02",
           pass, detail);
}

void criterion_11() {
    const double wb = omega_b_from_physical(20.0, 1.95, 1.0);
    const bool pass = std::abs(wb - 3.9e-3) <= 0.01 * 3.9e-3;
    report(11, "unit conversion reproduces the reference omega_B", pass,
           "omega_B(20 nm, 1.95 kV/cm, 1 eV) = " + fmt(wb));
}

void criterion_12(const PresetOutcome& first, const fs::path& scratch) {
    const auto dir = scratch / "preset_a_rerun";
    const auto rerun = run_preset("a", dir);
    bool pass = rerun.outputs.size() == first.outputs.size();
    int grids_checked = 0;
    if (pass) {
        for (const auto& [name, rec] : first.outputs) {
            const auto it = rerun.outputs.find(name);
            if (it == rerun.outputs.end() ||
                it->second.fnv1a64 != rec.fnv1a64) {
                pass = false;
                break;
            }
            if (name.find("_grid.f64") != std::string::npos) ++grids_checked;
        }
    }
    fs::remove_all(dir);
    report(12, "re-running a preset is byte-identical", pass,
           std::to_string(first.outputs.size()) + " files compared (" +
               std::to_string(grids_checked) + " grids)");
}

}  // namespace

int main() {
    const auto scratch =
        fs::temp_directory_path() /
        ("rbo_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(scratch);

    std::map<std::string, PresetOutcome> runs;
    for (const auto& id : preset_ids()) {
        if (id == "f-oblique") continue;  // variant preset, not a criterion
        const auto dir = scratch / ("preset_" + id);
        runs.emplace(id, run_preset(id, dir));
        fs::remove_all(dir);
    }

    criterion_1(runs);
    criterion_2();
    criterion_3(runs.at("a"));
    criterion_4(runs.at("b"));
    criterion_5(runs.at("d"));
    criterion_6(runs.at("e"));
    criterion_7();
    criterion_8(runs.at("iii"));
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12(runs.at("a"), scratch);

    fs::remove_all(scratch);
    if (g_failures) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
