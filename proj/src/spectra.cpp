#include "rbo/spectra.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace rbo {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

std::string ProbeSpec::label() const {
    return spatial_sum ? "sum" : "site" + std::to_string(site);
}

std::string to_string(Window w) {
    return w == Window::Hann ? "hann" : "rect";
}

Window window_from_string(const std::string& s) {
    if (s == "hann") return Window::Hann;
    if (s == "rect") return Window::Rect;
    throw ConfigError("unknown window '" + s + "' (expected hann|rect)");
}

TimeSeriesRecord record_series(const Trajectory& trajectory, SeriesKind kind,
                               const ProbeSpec& probe) {
    const int n = trajectory.chain.n_sites;
    if (!probe.spatial_sum && (probe.site < 0 || probe.site >= n))
        throw std::invalid_argument("probe site out of range");

    TimeSeriesRecord rec;
    rec.tau0 = trajectory.tau0;
    rec.d_tau = trajectory.record_spacing();
    rec.kind = kind;
    rec.probe = probe.label();
    rec.values.reserve(trajectory.states.size());

    for (const auto& state : trajectory.states) {
        SiteSeries s;
        switch (kind) {
            case SeriesKind::Inversion:
                s = inversion_density(state, trajectory.chain);
                break;
            case SeriesKind::TunnelCurrent:
                s = tunneling_current_symmetrized(state, trajectory.chain);
                break;
            case SeriesKind::DipoleCurrent:
                s = dipole_current(state, trajectory.chain, trajectory.drive);
                break;
            case SeriesKind::Population:
                s = population_density(state, trajectory.chain);
                break;
        }
        rec.values.push_back(probe.spatial_sum ? s.values.sum()
                                               : s.values[probe.site]);
    }
    return rec;
}

Spectrum amplitude_spectrum(const TimeSeriesRecord& series, Window window,
                            int zero_pad_factor) {
    const int m = series.size();
    if (m < 16)
        throw std::invalid_argument("series too short for a spectrum (< 16)");
    if (zero_pad_factor < 1)
        throw std::invalid_argument("zero_pad_factor must be >= 1");
    if (!(series.d_tau > 0.0))
        throw std::invalid_argument("series sample spacing must be positive");

    std::vector<double> w(m, 1.0);
    if (window == Window::Hann) {
        for (int i = 0; i < m; ++i)
            w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (m - 1)));
    }
    const double w_sum = std::accumulate(w.begin(), w.end(), 0.0);
    // Compensated mean so a constant series cancels cleanly.
    double sum = 0.0, comp = 0.0;
    for (double v : series.values) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    const double mean = sum / m;

    const long long len = static_cast<long long>(m) * zero_pad_factor;
    std::vector<double> in(static_cast<std::size_t>(len), 0.0);
    double windowed_mean = 0.0;
    for (int i = 0; i < m; ++i) {
        in[i] = (series.values[i] - mean) * w[i];
        windowed_mean += series.values[i] * w[i];
    }

    const long long n_bins = len / 2 + 1;
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n_bins));
    {
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(fftw_plan_mutex());
            plan = fftw_plan_dft_r2c_1d(
                static_cast<int>(len), in.data(),
                reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
        }
        if (!plan) throw NumericsError("FFT plan creation failed");
        fftw_execute(plan);
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }

    Spectrum spec;
    spec.resolution = 2.0 * M_PI / (static_cast<double>(len) * series.d_tau);
    spec.dc_amplitude = std::abs(windowed_mean) / w_sum;
    spec.freq.resize(static_cast<std::size_t>(n_bins));
    spec.amplitude.resize(static_cast<std::size_t>(n_bins));
    for (long long k = 0; k < n_bins; ++k) {
        spec.freq[static_cast<std::size_t>(k)] = k * spec.resolution;
        // One-sided amplitude: unit cosine -> peak height ~1.
        const double scale =
            (k == 0 || (len % 2 == 0 && k == len / 2)) ? 1.0 : 2.0;
        spec.amplitude[static_cast<std::size_t>(k)] =
            scale * std::abs(out[static_cast<std::size_t>(k)]) / w_sum;
    }
    return spec;
}

std::vector<Peak> find_peaks(const Spectrum& spectrum, double rel_threshold) {
    if (spectrum.amplitude.empty())
        throw std::invalid_argument("empty spectrum");
    if (!(rel_threshold > 0.0) || rel_threshold > 1.0)
        throw std::invalid_argument("rel_threshold must lie in (0, 1]");
    const double max_amp =
        *std::max_element(spectrum.amplitude.begin(), spectrum.amplitude.end());
    std::vector<Peak> peaks;
    if (max_amp <= 0.0) return peaks;
    // Mean removal leaves rounding residue; bins that small are not signal.
    if (max_amp <= 1e-10 * spectrum.dc_amplitude) return peaks;
    const double floor = rel_threshold * max_amp;
    for (std::size_t k = 1; k + 1 < spectrum.amplitude.size(); ++k) {
        const double amp = spectrum.amplitude[k];
        if (amp > spectrum.amplitude[k - 1] && amp > spectrum.amplitude[k + 1] &&
            amp >= floor)
            peaks.push_back({spectrum.freq[k], amp});
    }
    return peaks;
}

namespace {
void push_multiplet(std::vector<double>& lines, double center, double spacing,
                    int order) {
    for (int m = -order; m <= order; ++m)
        lines.push_back(center + m * spacing);
}
}  // namespace

std::vector<double> predicted_lines(char regime, SeriesKind kind,
                                    const DriveParams& drive, int order) {
    if (regime < 'a' || regime > 'f')
        throw std::invalid_argument("unknown regime id");
    if (order < 0) throw std::invalid_argument("order must be >= 0");
    const double wb = drive.omega_B;
    const double wr = drive.omega_R;
    const double nu = drive.nu;

    std::vector<double> lines;
    const bool bloch_ladder = (kind == SeriesKind::TunnelCurrent);
    if (bloch_ladder) {
        if (regime == 'b' || regime == 'c') {
            lines.push_back(wr);
        } else {
            for (int m = 0; m <= order; ++m) lines.push_back(m * wb);
        }
    } else if (kind == SeriesKind::DipoleCurrent) {
        switch (regime) {
            case 'a':
                break;  // no interband transitions
            case 'b':
                lines = {nu - wr, nu + wr};
                break;
            case 'd':
                push_multiplet(lines, nu - wr, wb, 1);
                push_multiplet(lines, nu, wb, 1);
                push_multiplet(lines, nu + wr, wb, 1);
                break;
            default:
                push_multiplet(lines, nu - wr, wb, order);
                push_multiplet(lines, nu, wb, order);
                push_multiplet(lines, nu + wr, wb, order);
                break;
        }
    } else {  // inversion (and population)
        switch (regime) {
            case 'a':
                lines = {wb};
                break;
            case 'b':
                lines = {wr};
                break;
            case 'd':
                lines = {wr - wb, wr, wr + wb};
                break;
            default:
                push_multiplet(lines, wr, wb, order);
                break;
        }
    }

    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    lines.erase(std::remove_if(lines.begin(), lines.end(),
                               [](double f) { return f < 0.0; }),
                lines.end());
    return lines;
}

bool matches_peak(const Spectrum& spectrum, double frequency, int max_bins) {
    const double tol = max_bins * spectrum.resolution * (1.0 + 1e-12);
    for (const auto& p : spectrum.peaks)
        if (std::abs(p.frequency - frequency) <= tol) return true;
    return false;
}

}  // namespace rbo
