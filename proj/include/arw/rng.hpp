#pragma once

#include <array>
#include <cstdint>

namespace arw {

// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
// One call turns a 128-bit counter and a 64-bit key into 128 random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

// Inverse CDF of the standard normal (Wichura's AS 241, double precision).
double normal_quantile(double p);

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Stable seed derivation for sub-streams, e.g. (master, energy, sample index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

// Random-access stream of variates keyed by (seed, stream). Every variate is a
// pure function of its index, so evaluation order and thread count never
// change the result.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    std::uint64_t bits(std::uint64_t index) const;
    double uniform(std::uint64_t index) const;  // in (0,1)
    double normal(std::uint64_t index) const;   // N(0,1) via inverse CDF

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
};

}  // namespace arw
