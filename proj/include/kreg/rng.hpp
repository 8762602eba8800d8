/*
 * Copyright 2026 The kreg authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KREG_RNG_HPP
#define KREG_RNG_HPP

#include <cmath>
#include <cstdint>

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, index), so regeneration is bit-identical across runs and
// independent of evaluation order.

namespace kreg::rng {

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t index) {
    // splitmix64 finalizer over a combined counter
    std::uint64_t z = seed;
    z ^= stream * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL;
    z += index * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1).
inline double uniform(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t index) {
    return static_cast<double>(mix(seed, stream, index) >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1]; never returns 0, safe under log().
inline double uniform_pos(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index) {
    return static_cast<double>((mix(seed, stream, index) >> 11) + 1) *
           0x1.0p-53;
}

/// Standard normal via Box-Muller; draw i consumes uniforms 2i and 2i+1.
inline double normal(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t index) {
    const double u1 = uniform_pos(seed, stream, 2 * index);
    const double u2 = uniform(seed, stream, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
}

} // namespace kreg::rng

#endif
