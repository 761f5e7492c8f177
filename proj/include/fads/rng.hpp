#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "fads/model.hpp"

namespace fads {

/// Seeded uniform-variate stream backing every simulation.
///
/// The generator is pinned so traces reproduce across builds and platforms:
/// mersenne_twister_engine<uint64_t, ...> seeded directly with the 64-bit
/// seed, mapped to [0,1) by taking the top 53 bits.  The engine's output
/// sequence is fixed by the C++ standard; the distribution mapping is ours,
/// so no library-dependent distribution code is involved.
///
/// Draw order contract: the engine consumes exactly two variates per
/// simulated period, first the state transition, then the signal.  At t=1
/// the "transition" draw realizes the uniform initial state.
class RngStream {
public:
    static constexpr std::string_view kVersion = "mt19937_64/top53 v1";

    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_unit() < p; }

    Sign uniform_sign() { return next_unit() < 0.5 ? Sign::up : Sign::down; }

    /// State transition draw: flips `s` with probability `eps`.
    Sign transition(Sign s, double eps) { return bernoulli(eps) ? -s : s; }

    /// Signal draw: matches `state` with probability `alpha`.
    Sign signal_for(Sign state, double alpha) {
        return bernoulli(alpha) ? state : -state;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace fads
