#include "rbo/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace rbo {

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

std::string to_hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(value));
    return buf;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

void write_grid(const std::filesystem::path& path,
                const std::vector<double>& data, int n_rows, int n_cols,
                double tau0, double row_spacing, const std::string& quantity,
                const std::string& units) {
    if (data.size() != static_cast<std::size_t>(n_rows) * n_cols)
        throw std::invalid_argument("grid shape does not match data size");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    // Raw doubles; this targets little-endian hosts.
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!out) throw IoError("write failed for " + path.string());
    out.close();

    nlohmann::ordered_json side;
    side["dtype"] = "float64";
    side["byte_order"] = "little";
    side["layout"] = "row-major, time-major";
    side["shape"] = {n_rows, n_cols};
    side["quantity"] = quantity;
    side["units"] = units;
    side["tau0"] = tau0;
    side["row_spacing"] = row_spacing;
    std::vector<double> taus(static_cast<std::size_t>(n_rows));
    for (int r = 0; r < n_rows; ++r) taus[r] = tau0 + r * row_spacing;
    side["tau_grid"] = taus;
    auto sidecar = path;
    sidecar.replace_extension(".json");
    write_text_file(sidecar, side.dump(2) + "\n");
}

void write_series(const std::filesystem::path& path,
                  const TimeSeriesRecord& series) {
    std::ostringstream out;
    for (int i = 0; i < series.size(); ++i)
        out << format_double(series.tau0 + i * series.d_tau) << ' '
            << format_double(series.values[i]) << '\n';
    write_text_file(path, out.str());
}

void write_spectrum(const std::filesystem::path& path,
                    const Spectrum& spectrum) {
    std::ostringstream out;
    for (std::size_t k = 0; k < spectrum.freq.size(); ++k)
        out << format_double(spectrum.freq[k]) << ' '
            << format_double(spectrum.amplitude[k]) << '\n';
    write_text_file(path, out.str());
}

void write_peaks(const std::filesystem::path& path, const Spectrum& spectrum) {
    std::ostringstream out;
    out << "# frequency amplitude  (bin width " << format_double(spectrum.resolution)
        << ", dc " << format_double(spectrum.dc_amplitude) << ")\n";
    for (const auto& p : spectrum.peaks)
        out << format_double(p.frequency) << ' ' << format_double(p.amplitude)
            << '\n';
    write_text_file(path, out.str());
}

TimeSeriesRecord read_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    TimeSeriesRecord rec;
    std::vector<double> taus;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        double tau = 0.0, value = 0.0;
        if (!(row >> tau >> value))
            throw IoError("malformed series line in " + path.string());
        taus.push_back(tau);
        rec.values.push_back(value);
    }
    if (taus.size() < 2)
        throw IoError("series file " + path.string() + " has fewer than 2 rows");
    rec.tau0 = taus.front();
    rec.d_tau = (taus.back() - taus.front()) / (taus.size() - 1);
    return rec;
}

}  // namespace rbo
