// trapping.hpp — coherent-trapping analysis for the driven chain
#pragma once

#include "rbo/types.hpp"

namespace rbo {

// Outcome of the trapped-state eigen-wavenumber analysis. `ha` is the
// per-site phase of the trapped plane wave, present (finite) iff trapped.
struct TrappingAnalysis {
    double ratio = 0.0;   // |omega_R| / (4 sqrt(t_a t_b))
    bool trapped = false;
    double ha = 0.0;      // NaN when untrapped
    double margin = 0.0;  // 4 sqrt(t_a t_b) - |omega_R|
};

// Determinant of the homogeneous 2x2 system for the two-component plane
// wave: t_a cos[(h+k/2)a] * t_b cos[(h-k/2)a] - omega_R^2/16. Zeros define
// the steady-state dispersion relation. Hopping must be real here.
double dispersion_determinant(double ha, double ka, double omega_R,
                              double t_a, double t_b);

// Solve the k = 0 dispersion for the eigen-wavenumber
// ha = arccos(omega_R / (4 sqrt(t_a t_b))). Requires t_a, t_b > 0.
TrappingAnalysis eigen_wavenumber(double omega_R, double t_a, double t_b);

// Normalized plane-wave trapped state with per-site spinor
// (sqrt(t_b/t_a), 1)/sqrt(1 + t_b/t_a) and spatial phase e^{i ha j}.
// Requires real positive hopping and a finite ha (trapped regime).
WaveState steady_state(const ChainParams& chain, double ha);

}  // namespace rbo
