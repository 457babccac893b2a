#pragma once

// Counter-based random streams: the k-th draw of stream `stream` under `seed`
// is a pure function of (seed, stream, k), so samples can be generated in any
// order or on any thread with identical results.

#include <coherence/qcore.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>

namespace coherence {

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

    std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    /// Uniform on (0, 1).
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard normal via Box-Muller.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double t = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    Complex complex_normal() {
        const double re = normal();
        return {re, normal()};
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Haar-random pure state: normalized vector of independent complex Gaussians.
inline StateVector haar_state(const SpaceDescriptor& space, CounterRng& rng) {
    CVector amps(space.dim());
    for (Index i = 0; i < amps.size(); ++i) amps(i) = rng.complex_normal();
    return StateVector(space, std::move(amps));
}

}  // namespace coherence
