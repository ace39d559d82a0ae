#pragma once

#include <cstdint>

namespace lognnet {

// SplitMix64 finalizer, used to spread user seeds over the state space.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent, reproducible seed for the index-th member of a family
// (e.g. one grid point of a parameter sweep).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return splitmix64(base ^ splitmix64(index + 1));
}

// xorshift64* (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D).
// State is splitmix64(seed), replaced by a fixed constant in the one case
// where that is zero.
class Xorshift64Star {
public:
    explicit constexpr Xorshift64Star(std::uint64_t seed) noexcept
        : state_(splitmix64(seed) != 0 ? splitmix64(seed) : 0x9E3779B97F4A7C15ull) {}

    constexpr std::uint64_t next() noexcept {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1Dull;
    }

    // Uniform on the open interval (0, 1): top 53 bits, offset by half an ulp.
    constexpr double uniform() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform on (-0.5, 0.5).
    constexpr double centered() noexcept { return uniform() - 0.5; }

private:
    std::uint64_t state_;
};

} // namespace lognnet
