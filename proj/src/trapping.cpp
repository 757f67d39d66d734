#include "rbo/trapping.hpp"

#include "rbo/states.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rbo {

double dispersion_determinant(double ha, double ka, double omega_R,
                              double t_a, double t_b) {
    return t_a * std::cos(ha + 0.5 * ka) * t_b * std::cos(ha - 0.5 * ka) -
           omega_R * omega_R / 16.0;
}

TrappingAnalysis eigen_wavenumber(double omega_R, double t_a, double t_b) {
    if (!(t_a > 0.0) || !(t_b > 0.0))
        throw std::invalid_argument(
            "eigen_wavenumber requires positive real t_a, t_b");
    if (!std::isfinite(omega_R))
        throw std::invalid_argument("omega_R must be finite");

    TrappingAnalysis out;
    const double bound = 4.0 * std::sqrt(t_a * t_b);
    out.ratio = std::abs(omega_R) / bound;
    out.margin = bound - std::abs(omega_R);
    out.trapped = out.ratio <= 1.0;
    out.ha = out.trapped ? std::acos(out.ratio)
                         : std::numeric_limits<double>::quiet_NaN();
    return out;
}

WaveState steady_state(const ChainParams& chain, double ha) {
    chain.validate();
    if (chain.t_a.imag() != 0.0 || chain.t_b.imag() != 0.0)
        throw std::invalid_argument(
            "steady_state assumes real hopping amplitudes");
    const double ta = chain.t_a.real();
    const double tb = chain.t_b.real();
    if (!(ta > 0.0) || !(tb > 0.0))
        throw std::invalid_argument("steady_state requires t_a, t_b > 0");
    if (!std::isfinite(ha))
        throw std::invalid_argument("untrapped inputs: ha is not finite");

    const double ratio = tb / ta;
    const double u = std::sqrt(ratio / (1.0 + ratio));  // excited amplitude
    const double v = std::sqrt(1.0 / (1.0 + ratio));    // ground amplitude
    WaveState state(chain.n_sites);
    const double site_norm = 1.0 / std::sqrt(static_cast<double>(chain.n_sites));
    for (int j = 0; j < chain.n_sites; ++j) {
        const Complex plane = std::polar(site_norm, ha * j);
        state.a[j] = u * plane;
        state.b[j] = v * plane;
    }
    return state;
}

}  // namespace rbo
