#pragma once

#include <numbers>
#include <vector>

#include "otfs/cm_counter.hpp"
#include "otfs/grid.hpp"
#include "otfs/types.hpp"

namespace otfs {

enum class FftDir { Forward, Inverse };

/// In-place iterative radix-2 transform, unnormalized.
/// Forward uses e^{-j2pi/N}, inverse e^{+j2pi/N}. Each stage performs n/2
/// twiddle products, so a full pass tallies (n/2)*log2(n) CMs when counted.
inline void fft_radix2(std::vector<cplx>& x, FftDir dir, CmCounter* cm = nullptr,
                       std::uint64_t CmCounter::*stage = &CmCounter::demod) {
    const size_t n = x.size();
    if (n <= 1) return;
    if (!is_pow2(static_cast<int>(n))) throw ShapeError("fft_radix2: length must be a power of two");

    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }

    const double sign = (dir == FftDir::Inverse) ? 1.0 : -1.0;
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (size_t j = 0; j < len / 2; ++j) {
                const cplx u = x[i + j];
                const cplx v = x[i + j + len / 2] * w;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
        cm_add(cm, stage, n / 2); // one twiddle product per butterfly
    }
}

/// Unitary transform pair: scales by 1/sqrt(n) in both directions so that the
/// matrix form is the normalized (I)DFT. The real scaling is not a CM.
inline void fft_unitary(std::vector<cplx>& x, FftDir dir, CmCounter* cm = nullptr,
                        std::uint64_t CmCounter::*stage = &CmCounter::demod) {
    fft_radix2(x, dir, cm, stage);
    const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto& v : x) v *= s;
}

} // namespace otfs
