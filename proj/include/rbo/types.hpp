// types.hpp — parameter structs, wavefunction state, and error categories
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace rbo {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Thrown when the integrator detects divergence or excessive norm drift.
struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown on malformed configuration input (text or programmatic).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Static description of the two-band tight-binding chain.
// Energies are in units of the transition energy (hbar*omega0 = 1),
// so delta_eps = 0.5 puts the band gap exactly at omega0.
struct ChainParams {
    int n_sites = 128;
    double delta_eps = 0.5;     // half gap between band centers
    Complex t_a{3.5e-2, 0.0};   // excited-band nearest-neighbor hopping
    Complex t_b{3.5e-2, 0.0};   // ground-band hopping
    double mu_a = 0.0;          // diagonal ac-drive amplitude, excited band
    double mu_b = 0.0;          // diagonal ac-drive amplitude, ground band
    double s_a = 0.0;           // static diagonal shift, excited band
    double s_b = 0.0;           // static diagonal shift, ground band
    double lattice_const_nm = 20.0;  // only used for unit conversion

    void validate() const;
};

// Dimensionless drive parameters (frequencies in units of omega0).
struct DriveParams {
    double omega_B = 0.0;   // dc tilt per site (Bloch frequency)
    double omega_R = 0.0;   // Rabi amplitude of the interband coupling
    double nu = 1.0;        // ac drive frequency
    double K = 0.0;         // per-site phase advance of the oblique wave
    double phi = 0.0;       // drive phase
    double eta_a = 0.0;     // photon-assisted hopping amplitude, excited band
    double eta_b = 0.0;     // photon-assisted hopping amplitude, ground band

    void validate() const;
};

// Per-site complex amplitudes of the excited (a) and ground (b) bands
// at one instant of dimensionless time tau.
struct WaveState {
    CVector a;
    CVector b;
    double tau = 0.0;

    WaveState() = default;
    WaveState(int n_sites, double tau0 = 0.0)
        : a(CVector::Zero(n_sites)), b(CVector::Zero(n_sites)), tau(tau0) {}

    int n_sites() const { return static_cast<int>(a.size()); }
    double norm_sq() const { return a.squaredNorm() + b.squaredNorm(); }
    double norm() const { return std::sqrt(norm_sq()); }
};

enum class Band { Excited, Ground };

std::string to_string(Band band);
Band band_from_string(const std::string& s);

}  // namespace rbo
