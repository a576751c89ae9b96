// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace sedd {

// splitmix64, after Sebastiano Vigna's public domain implementation
// (http://xorshift.di.unimi.it/splitmix64.c). Chosen because the whole
// recurrence fits in a dozen lines and reproduces bit-identically on any
// platform with 64-bit integers, which makes models regenerable from a seed.
class DeterministicRng {
public:
    DeterministicRng() = default;
    explicit DeterministicRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in [0,1), 53 random bits folded down to binary32.
    float next_uniform() {
        return static_cast<float>(static_cast<double>(next_u64() >> 11) * 0x1.0p-53);
    }

    // Unbiased integer in [0, n) via 128-bit multiply-shift.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_ = 0;
};

}  // namespace sedd
