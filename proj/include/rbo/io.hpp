// io.hpp — deterministic writers for grids, series, spectra
#pragma once

#include "rbo/spectra.hpp"
#include "rbo/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rbo {

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string to_hex(std::uint64_t value);

// Spacetime grid: raw little-endian float64, row-major, one row per record.
// A JSON sidecar (<stem>.json) carries shape, tau grid and units metadata.
void write_grid(const std::filesystem::path& path,
                const std::vector<double>& data, int n_rows, int n_cols,
                double tau0, double row_spacing, const std::string& quantity,
                const std::string& units);

// Two-column UTF-8 text (tau value) with %.17g formatting.
void write_series(const std::filesystem::path& path,
                  const TimeSeriesRecord& series);

// Two-column spectrum (frequency amplitude) and a peaks sidecar.
void write_spectrum(const std::filesystem::path& path, const Spectrum& spectrum);
void write_peaks(const std::filesystem::path& path, const Spectrum& spectrum);

// Reads a two-column series file (as written by write_series).
TimeSeriesRecord read_series(const std::filesystem::path& path);

}  // namespace rbo
