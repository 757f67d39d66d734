#include "rbo/units.hpp"

#include <cmath>
#include <stdexcept>

namespace rbo {

double omega_b_from_physical(double lattice_const_nm, double e_dc_kv_cm,
                             double gap_ev) {
    if (!std::isfinite(lattice_const_nm) || !std::isfinite(e_dc_kv_cm) ||
        !std::isfinite(gap_ev))
        throw std::invalid_argument("unit-conversion inputs must be finite");
    if (lattice_const_nm <= 0.0 || gap_ev <= 0.0)
        throw std::invalid_argument(
            "lattice constant and gap must be positive");
    if (e_dc_kv_cm < 0.0)
        throw std::invalid_argument("dc field must be non-negative");

    const double a_m = lattice_const_nm * 1e-9;
    const double e_dc_v_m = e_dc_kv_cm * 1e5;  // kV/cm -> V/m
    const double gap_j = gap_ev * kElementaryChargeC;
    return kElementaryChargeC * a_m * e_dc_v_m / gap_j;
}

}  // namespace rbo
