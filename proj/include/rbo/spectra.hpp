// spectra.hpp — time-series extraction, amplitude spectra, peak analysis
#pragma once

#include "rbo/dynamics.hpp"
#include "rbo/observables.hpp"
#include "rbo/types.hpp"

#include <string>
#include <vector>

namespace rbo {

// Scalar probe: a single site index, or the spatial sum over the chain.
struct ProbeSpec {
    bool spatial_sum = false;
    int site = 0;

    static ProbeSpec sum() { return {true, 0}; }
    static ProbeSpec at(int site) { return {false, site}; }
    std::string label() const;
};

// Uniformly sampled scalar observable.
struct TimeSeriesRecord {
    double tau0 = 0.0;
    double d_tau = 0.0;  // sample spacing
    std::vector<double> values;
    SeriesKind kind = SeriesKind::Inversion;
    std::string probe;

    int size() const { return static_cast<int>(values.size()); }
};

struct Peak {
    double frequency = 0.0;
    double amplitude = 0.0;
};

enum class Window { Hann, Rect };

std::string to_string(Window w);
Window window_from_string(const std::string& s);

// One-sided amplitude spectrum. Frequencies are angular, in omega0 units;
// bin k sits at 2*pi*k/(M*pad*d_tau). `amplitude` is normalized so a unit
// cosine shows up as a peak of height ~1; `dc_amplitude` carries the
// windowed mean of the raw series (the bins themselves are mean-removed).
struct Spectrum {
    std::vector<double> freq;
    std::vector<double> amplitude;
    std::vector<Peak> peaks;
    double resolution = 0.0;  // bin width
    double dc_amplitude = 0.0;
};

// Extract a scalar series from a recorded trajectory.
TimeSeriesRecord record_series(const Trajectory& trajectory, SeriesKind kind,
                               const ProbeSpec& probe);

// Mean-removed, windowed, zero-padded DFT magnitude. Requires >= 16 samples
// and zero_pad_factor >= 1.
Spectrum amplitude_spectrum(const TimeSeriesRecord& series, Window window,
                            int zero_pad_factor);

// Strict interior local maxima with amplitude >= rel_threshold * max,
// sorted by frequency. rel_threshold must lie in (0, 1].
std::vector<Peak> find_peaks(const Spectrum& spectrum, double rel_threshold);

// Expected spectral line positions for the Table-of-regimes ids a..f, per
// observable. `order` bounds the number of Bloch harmonics/sidebands.
std::vector<double> predicted_lines(char regime, SeriesKind kind,
                                    const DriveParams& drive, int order);

// True if `frequency` lies within max_bins*resolution of a detected peak.
bool matches_peak(const Spectrum& spectrum, double frequency, int max_bins);

}  // namespace rbo
