// rng.hpp - The single documented random source.
//
// Stream (seed, stream) is an MT19937-64 engine seeded with
// SplitMix64(seed ^ SplitMix64(stream)). Uniform doubles take the top 53 bits
// (x >> 11) * 2^-53; normals use the cosine branch of Box-Muller on two fresh
// uniforms. Every step is specified bit-for-bit, so draws are reproducible
// across standard libraries.

#pragma once

#include "sdfs/fock.hpp"

#include <cstdint>
#include <random>

namespace sdfs {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next() { return engine_(); }
    double uniform();  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();   // N(0, 1)

private:
    std::mt19937_64 engine_;
};

// Entries with real and imaginary parts uniform in [-scale, scale], symmetrized.
CMatrix random_hermitian(std::size_t n, Rng& rng, double scale = 1.0);

// Normalized state with complex Gaussian amplitudes.
CVector random_amplitudes(std::size_t n, Rng& rng);

}  // namespace sdfs
