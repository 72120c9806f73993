#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace tsnsim {

// Every consumer of randomness owns a private stream derived from the
// master seed plus a structural tag (node id, purpose). Streams never
// share state, so adding a consumer cannot shift another's draws, and a
// trace is a pure function of (scenario, seed).

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

enum class StreamPurpose : std::uint64_t {
    ClockNoise = 1,   // phase jitter and frequency wander draws
    UeSyncError = 2,  // radio-interface time error of a 5GS bridge
    TransitJitter = 3 // PDU-session transit variation of a 5GS bridge
};

constexpr std::uint64_t derive_seed(std::uint64_t master, std::int64_t node, StreamPurpose purpose)
{
    std::uint64_t tag = splitmix64(static_cast<std::uint64_t>(node) * 0x100000001b3ull
                                   + static_cast<std::uint64_t>(purpose));
    return splitmix64(master ^ tag);
}

/// Deterministic random stream. Normal deviates use an uncached
/// Box-Muller transform (exactly two engine draws per deviate) so a
/// stream can be replayed draw-for-draw by independent test code.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in (0, 1]; never returns zero so log() below is safe.
    double uniform01()
    {
        return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform01();
    }

    double normal(double sigma)
    {
        double u1 = uniform01();
        double u2 = uniform01();
        return sigma * std::sqrt(-2.0 * std::log(u1))
               * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// +1 or -1 with equal probability.
    int sign()
    {
        return (eng_() & 1u) ? 1 : -1;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace tsnsim
