#include "rbo/states.hpp"

#include <cmath>
#include <stdexcept>

namespace rbo {

namespace {

void check_packet_args(const ChainParams& chain, double center,
                       double width_sites, double momentum) {
    chain.validate();
    if (!std::isfinite(center) || !std::isfinite(width_sites) ||
        !std::isfinite(momentum))
        throw std::invalid_argument("packet parameters must be finite");
    if (width_sites <= 0.0)
        throw std::invalid_argument("packet width must be positive");
    if (center < 0.0 || center >= chain.n_sites)
        throw std::invalid_argument("packet center must lie inside the chain");
}

CVector envelope(int n, double center, double width_sites, double momentum) {
    CVector env(n);
    for (int j = 0; j < n; ++j) {
        const double d = (j - center) / width_sites;
        env[j] = std::exp(-d * d) * std::polar(1.0, momentum * j);
    }
    return env;
}

}  // namespace

WaveState gaussian_packet(const ChainParams& chain, double center,
                          double width_sites, double momentum, Band band) {
    check_packet_args(chain, center, width_sites, momentum);
    WaveState state(chain.n_sites);
    auto& target = (band == Band::Excited) ? state.a : state.b;
    target = envelope(chain.n_sites, center, width_sites, momentum);
    return normalize(state);
}

WaveState trapped_packet(const ChainParams& chain, double center,
                         double width_sites, double momentum) {
    check_packet_args(chain, center, width_sites, momentum);
    if (std::abs(chain.t_a) == 0.0)
        throw std::invalid_argument("trapped packet requires t_a != 0");
    const Complex ratio = std::sqrt(chain.t_b / chain.t_a);
    WaveState state(chain.n_sites);
    state.b = envelope(chain.n_sites, center, width_sites, momentum);
    state.a = ratio * state.b;
    return normalize(state);
}

WaveState normalize(const WaveState& state) {
    const double n = state.norm();
    if (!(n > 0.0))
        throw std::invalid_argument("cannot normalize a zero state");
    WaveState out = state;
    out.a /= n;
    out.b /= n;
    return out;
}

}  // namespace rbo
