#include "rbo/observables.hpp"

#include <algorithm>
#include <stdexcept>

namespace rbo {

std::string to_string(SeriesKind kind) {
    switch (kind) {
        case SeriesKind::Inversion: return "inversion";
        case SeriesKind::TunnelCurrent: return "tunnel";
        case SeriesKind::DipoleCurrent: return "dipole";
        case SeriesKind::Population: return "population";
    }
    return "inversion";
}

SeriesKind series_kind_from_string(const std::string& s) {
    if (s == "inversion") return SeriesKind::Inversion;
    if (s == "tunnel") return SeriesKind::TunnelCurrent;
    if (s == "dipole") return SeriesKind::DipoleCurrent;
    if (s == "population") return SeriesKind::Population;
    throw ConfigError("unknown observable kind '" + s + "'");
}

namespace {
void check_state(const WaveState& state, const ChainParams& chain) {
    if (state.n_sites() != chain.n_sites)
        throw std::invalid_argument("state length does not match chain");
}
}  // namespace

SiteSeries inversion_density(const WaveState& state, const ChainParams& chain) {
    check_state(state, chain);
    const int n = chain.n_sites;
    SiteSeries out{RVector(n), state.tau, SeriesKind::Inversion};
    for (int j = 0; j < n; ++j)
        out.values[j] = (std::norm(state.a[j]) - std::norm(state.b[j])) / n;
    return out;
}

SiteSeries tunneling_current_two_point(const WaveState& state,
                                       const ChainParams& chain) {
    check_state(state, chain);
    const int n = chain.n_sites;
    if (n < 2)
        throw std::invalid_argument("two-point current requires N >= 2");
    SiteSeries out{RVector(n - 1), state.tau, SeriesKind::TunnelCurrent};
    for (int j = 0; j + 1 < n; ++j) {
        const Complex za = chain.t_a * std::conj(state.a[j]) * state.a[j + 1];
        const Complex zb = chain.t_b * std::conj(state.b[j]) * state.b[j + 1];
        out.values[j] = -2.0 * (za.imag() + zb.imag());
    }
    return out;
}

SiteSeries tunneling_current_symmetrized(const WaveState& state,
                                         const ChainParams& chain) {
    check_state(state, chain);
    const int n = chain.n_sites;
    SiteSeries out{RVector(n), state.tau, SeriesKind::TunnelCurrent};
    for (int j = 0; j < n; ++j) {
        const Complex am = (j > 0) ? state.a[j - 1] : Complex{};
        const Complex ap = (j + 1 < n) ? state.a[j + 1] : Complex{};
        const Complex bm = (j > 0) ? state.b[j - 1] : Complex{};
        const Complex bp = (j + 1 < n) ? state.b[j + 1] : Complex{};
        const Complex z = chain.t_a * (am - ap) * std::conj(state.a[j]) +
                          chain.t_b * (bm - bp) * std::conj(state.b[j]);
        // -i/2 * z + c.c. = Im(z)
        out.values[j] = z.imag();
    }
    return out;
}

SiteSeries dipole_current(const WaveState& state, const ChainParams& chain,
                          const DriveParams& drive) {
    check_state(state, chain);
    const int n = chain.n_sites;
    SiteSeries out{RVector(n), state.tau, SeriesKind::DipoleCurrent};
    for (int j = 0; j < n; ++j) {
        // -i nu a* b + c.c. = 2 nu Im(a* b)
        out.values[j] = 2.0 * drive.nu * (std::conj(state.a[j]) * state.b[j]).imag();
    }
    return out;
}

SiteSeries population_density(const WaveState& state,
                              const ChainParams& chain) {
    check_state(state, chain);
    const int n = chain.n_sites;
    SiteSeries out{RVector(n), state.tau, SeriesKind::Population};
    for (int j = 0; j < n; ++j)
        out.values[j] = std::norm(state.a[j]) + std::norm(state.b[j]);
    return out;
}

Diagnostics diagnostics(const WaveState& state) {
    Diagnostics d;
    const int n = state.n_sites();
    d.pop_a = state.a.squaredNorm();
    d.pop_b = state.b.squaredNorm();
    d.total_norm = std::sqrt(d.pop_a + d.pop_b);
    for (int j = 0; j < n; ++j)
        d.centroid += j * (std::norm(state.a[j]) + std::norm(state.b[j]));
    const int lo = std::min(2, n);
    const int hi = std::max(n - 2, lo);
    for (int j = 0; j < lo; ++j)
        d.edge_leakage += std::norm(state.a[j]) + std::norm(state.b[j]);
    for (int j = hi; j < n; ++j)
        d.edge_leakage += std::norm(state.a[j]) + std::norm(state.b[j]);
    return d;
}

}  // namespace rbo
