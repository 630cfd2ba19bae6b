// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace dsk {

using Rng = std::mt19937_64;

// splitmix64 finaliser
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent generator for work item `stream` under `seed`. Depends only on
/// the pair, so results do not change with how work is scheduled.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t a = mix64(seed ^ mix64(stream + 0x5bd1e995ULL));
    const std::uint64_t b = mix64(a ^ 0xd6e8feb86659fd93ULL);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

/// Circularly-symmetric complex Gaussian sample with E|x|^2 = variance.
inline std::complex<double> complex_gaussian(Rng& rng, double variance) {
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

}  // namespace dsk
