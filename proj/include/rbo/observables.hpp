// observables.hpp — site-resolved measurable densities
#pragma once

#include "rbo/types.hpp"

#include <string>

namespace rbo {

enum class SeriesKind { Inversion, TunnelCurrent, DipoleCurrent, Population };

std::string to_string(SeriesKind kind);
SeriesKind series_kind_from_string(const std::string& s);

// One observable sampled across the chain at a single instant. `values`
// has one entry per site, or per bond (N-1) for the two-point current.
struct SiteSeries {
    RVector values;
    double tau = 0.0;
    SeriesKind kind = SeriesKind::Inversion;
};

// w_j = (|a_j|^2 - |b_j|^2) / N
SiteSeries inversion_density(const WaveState& state, const ChainParams& chain);

// Bond-resolved intra-band current J_{j+1/2} = i t_a a_j^* a_{j+1}
//                                            + i t_b b_j^* b_{j+1} + c.c.
// This is the form that satisfies discrete continuity exactly:
// d(|a_j|^2+|b_j|^2)/dtau = -(J_{j+1/2} - J_{j-1/2}). Requires N >= 2.
SiteSeries tunneling_current_two_point(const WaveState& state,
                                       const ChainParams& chain);

// Site-resolved symmetrized current
//   J_j = -i/2 [t_a (a_{j-1} - a_{j+1}) a_j^* + t_b (b_{j-1} - b_{j+1}) b_j^*] + c.c.
// with hard-wall zeros beyond the ends. Equals the average of the two
// adjacent bond currents for real hopping.
SiteSeries tunneling_current_symmetrized(const WaveState& state,
                                         const ChainParams& chain);

// Interband (dipole) current J_j = -i nu a_j^* b_j + c.c.
SiteSeries dipole_current(const WaveState& state, const ChainParams& chain,
                          const DriveParams& drive);

// Per-site total population |a_j|^2 + |b_j|^2.
SiteSeries population_density(const WaveState& state, const ChainParams& chain);

struct Diagnostics {
    double total_norm = 0.0;    // sqrt of total probability
    double pop_a = 0.0;         // excited-band population
    double pop_b = 0.0;         // ground-band population
    double centroid = 0.0;      // sum_j j (|a_j|^2 + |b_j|^2)
    double edge_leakage = 0.0;  // population on the two outermost sites each side
};

Diagnostics diagnostics(const WaveState& state);

}  // namespace rbo
