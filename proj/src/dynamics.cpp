#include "rbo/dynamics.hpp"

#include "rbo/observables.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace rbo {

namespace {

constexpr double kNormDriftAbort = 1e-6;
constexpr Complex kImag{0.0, 1.0};

void check_sizes(const CVector& a, const CVector& b, const ChainParams& chain) {
    if (a.size() != chain.n_sites || b.size() != chain.n_sites)
        throw std::invalid_argument(
            "state length does not match chain.n_sites");
}

}  // namespace

std::string to_string(ModelVariant v) {
    switch (v) {
        case ModelVariant::Full: return "full";
        case ModelVariant::Simplified: return "simplified";
        case ModelVariant::Rwa: return "rwa";
    }
    return "simplified";
}

ModelVariant variant_from_string(const std::string& s) {
    if (s == "full") return ModelVariant::Full;
    if (s == "simplified") return ModelVariant::Simplified;
    if (s == "rwa") return ModelVariant::Rwa;
    throw ConfigError("unknown model variant '" + s +
                      "' (expected full|simplified|rwa)");
}

void eval_rhs(const CVector& a, const CVector& b, double tau,
              const ChainParams& chain, const DriveParams& drive,
              ModelVariant variant, CVector& da, CVector& db) {
    check_sizes(a, b, chain);
    const int n = chain.n_sites;
    da.resize(n);
    db.resize(n);

    // Drive phase theta_j = K j - nu tau + phi, advanced by e^{iK} per site.
    const Complex site_step = std::polar(1.0, drive.K);
    Complex phase = std::polar(1.0, drive.phi - drive.nu * tau);
    double cos_prev = (phase * std::conj(site_step)).real();  // j = -1

    const bool full = variant == ModelVariant::Full;
    const bool rwa = variant == ModelVariant::Rwa;
    const Complex ta_conj = std::conj(chain.t_a);
    const Complex tb_conj = std::conj(chain.t_b);

    for (int j = 0; j < n; ++j) {
        const Complex ap = (j + 1 < n) ? a[j + 1] : Complex{};
        const Complex am = (j > 0) ? a[j - 1] : Complex{};
        const Complex bp = (j + 1 < n) ? b[j + 1] : Complex{};
        const Complex bm = (j > 0) ? b[j - 1] : Complex{};
        const double cos_j = phase.real();

        double diag_a = chain.delta_eps - drive.omega_B * j;
        double diag_b = -chain.delta_eps - drive.omega_B * j;
        Complex hop_a_fwd = chain.t_a, hop_a_bwd = ta_conj;
        Complex hop_b_fwd = chain.t_b, hop_b_bwd = tb_conj;
        if (full) {
            diag_a -= chain.s_a + chain.mu_a * cos_j;
            diag_b -= chain.s_b + chain.mu_b * cos_j;
            // Forward bond j -> j+1 carries cos at site j; the backward bond
            // is the conjugate of bond j-1 -> j, keeping the generator
            // Hermitian for K != 0.
            hop_a_fwd -= drive.eta_a * cos_j;
            hop_b_fwd -= drive.eta_b * cos_j;
            hop_a_bwd -= drive.eta_a * cos_prev;
            hop_b_bwd -= drive.eta_b * cos_prev;
        }

        Complex rhs_a = diag_a * a[j] + hop_a_fwd * ap + hop_a_bwd * am;
        Complex rhs_b = diag_b * b[j] + hop_b_fwd * bp + hop_b_bwd * bm;
        if (rwa) {
            const Complex half = 0.5 * drive.omega_R * phase;
            rhs_a -= half * b[j];
            rhs_b -= std::conj(half) * a[j];
        } else {
            const double coup = drive.omega_R * cos_j;
            rhs_a -= coup * b[j];
            rhs_b -= coup * a[j];
        }

        da[j] = -kImag * rhs_a;
        db[j] = -kImag * rhs_b;

        cos_prev = cos_j;
        phase *= site_step;
    }
}

WaveState rhs(const WaveState& state, double tau, const ChainParams& chain,
              const DriveParams& drive, ModelVariant variant) {
    WaveState deriv(chain.n_sites, tau);
    eval_rhs(state.a, state.b, tau, chain, drive, variant, deriv.a, deriv.b);
    return deriv;
}

namespace {

// Scratch buffers for repeated RK4 stepping without reallocation.
struct Rk4Workspace {
    CVector k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b, ta, tb;

    void step(CVector& a, CVector& b, double tau, double h,
              const ChainParams& chain, const DriveParams& drive,
              ModelVariant variant) {
        eval_rhs(a, b, tau, chain, drive, variant, k1a, k1b);
        ta = a + (0.5 * h) * k1a;
        tb = b + (0.5 * h) * k1b;
        eval_rhs(ta, tb, tau + 0.5 * h, chain, drive, variant, k2a, k2b);
        ta = a + (0.5 * h) * k2a;
        tb = b + (0.5 * h) * k2b;
        eval_rhs(ta, tb, tau + 0.5 * h, chain, drive, variant, k3a, k3b);
        ta = a + h * k3a;
        tb = b + h * k3b;
        eval_rhs(ta, tb, tau + h, chain, drive, variant, k4a, k4b);
        a += (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        b += (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    }
};

}  // namespace

WaveState step_rk4(const WaveState& state, double tau, double d_tau,
                   const ChainParams& chain, const DriveParams& drive,
                   ModelVariant variant) {
    if (!(d_tau > 0.0)) throw std::invalid_argument("d_tau must be positive");
    WaveState out = state;
    Rk4Workspace ws;
    ws.step(out.a, out.b, tau, d_tau, chain, drive, variant);
    out.tau = tau + d_tau;
    if (!std::isfinite(out.norm_sq()))
        throw NumericsError("integration diverged at tau = " +
                            std::to_string(out.tau));
    return out;
}

std::vector<double> Trajectory::tau_grid() const {
    std::vector<double> grid(states.size());
    const double spacing = record_spacing();
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = tau0 + static_cast<double>(i) * spacing;
    return grid;
}

WaveState propagate_observed(const WaveState& state0, double tau_end,
                             double d_tau, const ChainParams& chain,
                             const DriveParams& drive, ModelVariant variant,
                             int record_every, const RecordCallback& on_record,
                             double* max_norm_drift,
                             double* max_edge_leakage) {
    check_sizes(state0.a, state0.b, chain);
    drive.validate();
    if (!(tau_end >= 0.0))
        throw std::invalid_argument("tau_end must be non-negative");
    if (!(d_tau > 0.0)) throw std::invalid_argument("d_tau must be positive");
    if (record_every < 1)
        throw std::invalid_argument("record_every must be >= 1");

    const long long n_steps = std::llround(tau_end / d_tau);
    const double tau0 = state0.tau;
    const double norm0 = state0.norm();
    if (!(norm0 > 0.0) || !std::isfinite(norm0))
        throw std::invalid_argument("initial state has invalid norm");

    WaveState cur = state0;
    Rk4Workspace ws;
    double drift_max = 0.0;
    double leak_max = 0.0;
    int record_index = 0;

    auto record = [&](long long step) {
        cur.tau = tau0 + static_cast<double>(step) * d_tau;
        leak_max = std::max(leak_max, diagnostics(cur).edge_leakage);
        if (on_record) on_record(record_index, cur.tau, cur);
        ++record_index;
    };

    record(0);
    for (long long k = 0; k < n_steps; ++k) {
        const double tau_k = tau0 + static_cast<double>(k) * d_tau;
        ws.step(cur.a, cur.b, tau_k, d_tau, chain, drive, variant);
        const double nsq = cur.norm_sq();
        if (!std::isfinite(nsq))
            throw NumericsError("integration diverged at tau = " +
                                std::to_string(tau_k + d_tau));
        const double drift = std::abs(std::sqrt(nsq) - norm0);
        drift_max = std::max(drift_max, drift);
        if (drift > kNormDriftAbort)
            throw NumericsError(
                "norm drift " + std::to_string(drift) + " at tau = " +
                std::to_string(tau_k + d_tau) +
                " exceeds 1e-6; reduce d_tau");
        if ((k + 1) % record_every == 0) record(k + 1);
    }
    cur.tau = tau0 + static_cast<double>(n_steps) * d_tau;

    if (max_norm_drift) *max_norm_drift = drift_max;
    if (max_edge_leakage) *max_edge_leakage = leak_max;
    return cur;
}

Trajectory propagate(const WaveState& state0, double tau_end, double d_tau,
                     const ChainParams& chain, const DriveParams& drive,
                     ModelVariant variant, int record_every) {
    if (!(tau_end >= 0.0))
        throw std::invalid_argument("tau_end must be non-negative");
    if (!(d_tau > 0.0)) throw std::invalid_argument("d_tau must be positive");
    if (record_every < 1)
        throw std::invalid_argument("record_every must be >= 1");
    Trajectory traj;
    traj.tau0 = state0.tau;
    traj.d_tau = d_tau;
    traj.record_every = record_every;
    traj.variant = variant;
    traj.chain = chain;
    traj.drive = drive;
    const long long n_steps = std::llround(tau_end / d_tau);
    traj.states.reserve(static_cast<std::size_t>(n_steps / record_every + 2));
    propagate_observed(
        state0, tau_end, d_tau, chain, drive, variant, record_every,
        [&](int, double, const WaveState& s) { traj.states.push_back(s); },
        &traj.max_norm_drift, &traj.max_edge_leakage);
    return traj;
}

namespace {

// Dense 2N x 2N Hamiltonian at time tau, built directly from the equations
// of motion (independent of eval_rhs). Index j = excited band, N+j = ground.
Eigen::MatrixXcd dense_hamiltonian(double tau, const ChainParams& chain,
                                   const DriveParams& drive,
                                   ModelVariant variant) {
    const int n = chain.n_sites;
    const bool full = variant == ModelVariant::Full;
    const bool rwa = variant == ModelVariant::Rwa;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        const double theta = drive.K * j - drive.nu * tau + drive.phi;
        const double c = std::cos(theta);
        double diag_a = chain.delta_eps - drive.omega_B * j;
        double diag_b = -chain.delta_eps - drive.omega_B * j;
        if (full) {
            diag_a -= chain.s_a + chain.mu_a * c;
            diag_b -= chain.s_b + chain.mu_b * c;
        }
        h(j, j) = diag_a;
        h(n + j, n + j) = diag_b;
        if (j + 1 < n) {
            Complex hop_a = chain.t_a, hop_b = chain.t_b;
            if (full) {
                hop_a -= drive.eta_a * c;
                hop_b -= drive.eta_b * c;
            }
            h(j, j + 1) = hop_a;
            h(j + 1, j) = std::conj(hop_a);
            h(n + j, n + j + 1) = hop_b;
            h(n + j + 1, n + j) = std::conj(hop_b);
        }
        if (rwa) {
            const Complex coup = -0.5 * drive.omega_R * std::polar(1.0, theta);
            h(j, n + j) = coup;
            h(n + j, j) = std::conj(coup);
        } else {
            h(j, n + j) = -drive.omega_R * c;
            h(n + j, j) = -drive.omega_R * c;
        }
    }
    return h;
}

bool generator_is_static(const ChainParams& chain, const DriveParams& drive) {
    if (drive.nu == 0.0) return true;
    return drive.omega_R == 0.0 && chain.mu_a == 0.0 && chain.mu_b == 0.0 &&
           drive.eta_a == 0.0 && drive.eta_b == 0.0;
}

}  // namespace

WaveState oracle_propagate(const WaveState& state0, double tau_end,
                           int n_substeps, const ChainParams& chain,
                           const DriveParams& drive, ModelVariant variant) {
    check_sizes(state0.a, state0.b, chain);
    if (chain.n_sites > 16)
        throw std::invalid_argument(
            "oracle_propagate handles at most 16 sites");
    if (n_substeps < 1)
        throw std::invalid_argument("n_substeps must be >= 1");
    if (!(tau_end >= 0.0))
        throw std::invalid_argument("tau_end must be non-negative");
    const double dt = tau_end / n_substeps;
    if (!generator_is_static(chain, drive) &&
        std::abs(drive.nu) * dt > 0.01 * (1.0 + 1e-12))
        throw std::invalid_argument(
            "oracle substep too coarse: require nu*(tau_end/n_substeps) <= 0.01");

    const int n = chain.n_sites;
    Eigen::VectorXcd psi(2 * n);
    psi.head(n) = state0.a;
    psi.tail(n) = state0.b;

    for (int s = 0; s < n_substeps; ++s) {
        const double tau_mid = state0.tau + (s + 0.5) * dt;
        const Eigen::MatrixXcd h =
            dense_hamiltonian(tau_mid, chain, drive, variant);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
        if (solver.info() != Eigen::Success)
            throw NumericsError("oracle eigendecomposition failed");
        const Eigen::VectorXcd phases =
            (-kImag * dt * solver.eigenvalues().array()).exp();
        psi = solver.eigenvectors() *
              (phases.array() *
               (solver.eigenvectors().adjoint() * psi).array())
                  .matrix();
    }

    WaveState out(n, state0.tau + tau_end);
    out.a = psi.head(n);
    out.b = psi.tail(n);
    return out;
}

}  // namespace rbo
