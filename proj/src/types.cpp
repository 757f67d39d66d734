#include "rbo/types.hpp"

#include <cmath>

namespace rbo {

namespace {
bool finite(double x) { return std::isfinite(x); }
bool finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}
}  // namespace

void ChainParams::validate() const {
    if (n_sites < 1) throw ConfigError("chain.n_sites must be >= 1");
    if (!finite(delta_eps) || delta_eps < 0.0)
        throw ConfigError("chain.delta_eps must be finite and non-negative");
    if (!finite(t_a) || !finite(t_b))
        throw ConfigError("chain hopping amplitudes must be finite");
    if (!finite(mu_a) || !finite(mu_b) || !finite(s_a) || !finite(s_b))
        throw ConfigError("chain diagonal drive terms must be finite");
    if (!finite(lattice_const_nm) || lattice_const_nm <= 0.0)
        throw ConfigError("chain.lattice_const_nm must be positive");
}

void DriveParams::validate() const {
    if (!finite(omega_B) || !finite(omega_R) || !finite(nu) || !finite(K) ||
        !finite(phi) || !finite(eta_a) || !finite(eta_b))
        throw ConfigError("drive parameters must be finite");
}

std::string to_string(Band band) {
    return band == Band::Excited ? "excited" : "ground";
}

Band band_from_string(const std::string& s) {
    if (s == "excited") return Band::Excited;
    if (s == "ground") return Band::Ground;
    throw ConfigError("unknown band '" + s + "' (expected excited|ground)");
}

}  // namespace rbo
