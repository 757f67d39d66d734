// units.hpp — conversion between laboratory and dimensionless parameters
#pragma once

namespace rbo {

inline constexpr double kElementaryChargeC = 1.602176634e-19;
inline constexpr double kHbarJs = 1.054571817e-34;

// Dimensionless Bloch frequency e*a*E_dc/(hbar*omega0) for a lattice constant
// in nm, a dc field in kV/cm and a transition energy hbar*omega0 in eV.
// Requires a > 0 and gap > 0; e_dc may be zero (no tilt) but not negative.
double omega_b_from_physical(double lattice_const_nm, double e_dc_kv_cm,
                             double gap_ev);

}  // namespace rbo
