// rng.cpp

#include "sdfs/rng.hpp"

#include <cmath>
#include <numbers>

namespace sdfs {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed ^ splitmix64(stream))) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CMatrix random_hermitian(std::size_t n, Rng& rng, double scale) {
    const auto k = static_cast<Eigen::Index>(n);
    CMatrix m(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) m(i, j) = Complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
    }
    return 0.5 * (m + m.adjoint());
}

CVector random_amplitudes(std::size_t n, Rng& rng) {
    CVector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(rng.normal(), rng.normal());
    return v / v.norm();
}

}  // namespace sdfs
