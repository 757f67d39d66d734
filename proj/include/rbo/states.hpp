// states.hpp — initial-state constructors and normalization
#pragma once

#include "rbo/types.hpp"

namespace rbo {

// Gaussian wavepacket g*exp(-(j-center)^2/width^2)*exp(i*momentum*j) placed
// in a single band; the other band is empty. Returned state is unit-norm.
// `width_sites` is the envelope width measured in lattice sites and
// `momentum` the per-site phase advance h*a.
WaveState gaussian_packet(const ChainParams& chain, double center,
                          double width_sites, double momentum, Band band);

// Gaussian analog of the coherently trapped state: per-site spinor
// proportional to (sqrt(t_b/t_a), 1) times the Gaussian envelope and
// plane-wave factor. Requires |t_a| > 0.
WaveState trapped_packet(const ChainParams& chain, double center,
                         double width_sites, double momentum);

// Rescale to unit norm. Throws std::invalid_argument on a zero state.
WaveState normalize(const WaveState& state);

}  // namespace rbo
