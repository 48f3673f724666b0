#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "otfs/types.hpp"

namespace otfs {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic random stream. Distribution sampling is hand-rolled on top
/// of mt19937_64 so that outputs are bit-identical across standard library
/// implementations (std::normal_distribution is not pinned by the standard).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

    /// Derive an independent stream from a seed and a list of stream tags
    /// (SNR index, frame index, purpose, ...).
    static RandomStream derive(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
        std::uint64_t s = seed;
        std::uint64_t h = splitmix64(s);
        for (std::uint64_t t : tags) {
            s ^= t + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h = splitmix64(s);
        }
        return RandomStream(h);
    }

    std::uint64_t bits() { return eng_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly-symmetric complex Gaussian with E|x|^2 = var.
    cplx cgauss(double var = 1.0) {
        const double s = std::sqrt(var / 2.0);
        return cplx(s * gauss(), s * gauss());
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace otfs
