// dynamics.hpp — equations of motion and fixed-step propagation
#pragma once

#include "rbo/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rbo {

// Which set of equations of motion to integrate:
//   Full       — symmetry-breaking diagonal terms and photon-assisted hopping
//                included (mu, s, eta active),
//   Simplified — inversion-symmetric chain, plain cosine interband coupling,
//   Rwa        — co-rotating half of the coupling only.
enum class ModelVariant { Full, Simplified, Rwa };

std::string to_string(ModelVariant v);
ModelVariant variant_from_string(const std::string& s);

// Time derivatives (da/dtau, db/dtau) of the amplitudes. Hard-wall boundary:
// amplitudes beyond the chain ends are zero. Buffers da, db are resized to N.
void eval_rhs(const CVector& a, const CVector& b, double tau,
              const ChainParams& chain, const DriveParams& drive,
              ModelVariant variant, CVector& da, CVector& db);

// Convenience wrapper returning the derivative as a state-shaped pair.
WaveState rhs(const WaveState& state, double tau, const ChainParams& chain,
              const DriveParams& drive, ModelVariant variant);

// One classical 4th-order Runge-Kutta step from tau to tau + d_tau.
// Throws NumericsError if the step produces non-finite amplitudes.
WaveState step_rk4(const WaveState& state, double tau, double d_tau,
                   const ChainParams& chain, const DriveParams& drive,
                   ModelVariant variant);

// Recorded evolution on a uniform time grid.
struct Trajectory {
    std::vector<WaveState> states;
    double tau0 = 0.0;
    double d_tau = 0.0;
    int record_every = 1;
    ModelVariant variant = ModelVariant::Simplified;
    ChainParams chain;
    DriveParams drive;
    double max_norm_drift = 0.0;
    double max_edge_leakage = 0.0;

    double record_spacing() const { return record_every * d_tau; }
    std::vector<double> tau_grid() const;
    int n_records() const { return static_cast<int>(states.size()); }
};

// Called after every record_every-th step (and for the initial state) with
// the record index, the time, and the current state.
using RecordCallback =
    std::function<void(int record_index, double tau, const WaveState&)>;

// Repeated RK4 steps over tau_end/d_tau steps, streaming records into the
// callback. Aborts with NumericsError once cumulative norm drift exceeds
// 1e-6 (step too large) or any amplitude turns non-finite. Returns the
// final state; drift/leakage maxima are reported through the out-params.
WaveState propagate_observed(const WaveState& state0, double tau_end,
                             double d_tau, const ChainParams& chain,
                             const DriveParams& drive, ModelVariant variant,
                             int record_every, const RecordCallback& on_record,
                             double* max_norm_drift = nullptr,
                             double* max_edge_leakage = nullptr);

// Same, collecting the recorded states into a Trajectory.
Trajectory propagate(const WaveState& state0, double tau_end, double d_tau,
                     const ChainParams& chain, const DriveParams& drive,
                     ModelVariant variant, int record_every);

// Validation propagator for small chains (N <= 16): on each substep the
// Hamiltonian is frozen at the midpoint time and its exact matrix
// exponential applied, so the result is unitary by construction. The
// substep must resolve the drive: nu*(tau_end/n_substeps) <= 0.01 unless
// the generator is time-independent.
WaveState oracle_propagate(const WaveState& state0, double tau_end,
                           int n_substeps, const ChainParams& chain,
                           const DriveParams& drive, ModelVariant variant);

}  // namespace rbo
