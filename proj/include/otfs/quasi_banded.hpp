#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "otfs/channel.hpp"
#include "otfs/cm_counter.hpp"
#include "otfs/types.hpp"

namespace otfs {

/// Cyclically banded Hermitian matrix in diagonal-packed storage:
/// band(q, theta + o) holds entry (q, (q+o) mod MN) for offsets |o| <= theta.
/// Entries outside the band are structurally zero, which is exactly the
/// quasi-banded shape (band plus corner blocks) of HH^H + nsr*I.
struct QuasiBandedMatrix {
    int size = 0;     // MN
    int half_bw = 0;  // theta = alpha - 1
    bool hermitian = false;
    std::vector<cplx> band; // size x (2*theta+1), row-major

    QuasiBandedMatrix() = default;
    QuasiBandedMatrix(int size_, int half_bw_, bool hermitian_ = false)
        : size(size_), half_bw(half_bw_), hermitian(hermitian_),
          band(static_cast<size_t>(size_) * static_cast<size_t>(2 * half_bw_ + 1)) {
        if (half_bw < 0 || 2 * half_bw + 1 > size)
            throw ConfigError("QuasiBandedMatrix: band does not fit the matrix");
    }

    int stride() const { return 2 * half_bw + 1; }

    cplx& at_offset(int row, int offset) {
        return band[static_cast<size_t>(row) * static_cast<size_t>(stride()) +
                    static_cast<size_t>(half_bw + offset)];
    }
    const cplx& at_offset(int row, int offset) const {
        return band[static_cast<size_t>(row) * static_cast<size_t>(stride()) +
                    static_cast<size_t>(half_bw + offset)];
    }

    /// Entry (i, j) honoring the cyclic band; zero outside it.
    cplx entry(int i, int j) const {
        int d = j - i;
        if (d > size / 2) d -= size;
        if (d < -size / 2) d += size;
        if (d < -half_bw || d > half_bw) return cplx(0.0, 0.0);
        // Both +d and the wrapped d - size (or d + size) can in principle fall
        // inside the band only when 2*theta+1 > size, which the ctor rejects.
        return at_offset(i, d);
    }

    /// y = Psi * x using only stored diagonals.
    std::vector<cplx> multiply(const std::vector<cplx>& x) const {
        if (static_cast<int>(x.size()) != size) throw ShapeError("multiply: length mismatch");
        std::vector<cplx> y(static_cast<size_t>(size), cplx(0.0, 0.0));
        for (int i = 0; i < size; ++i) {
            cplx acc(0.0, 0.0);
            for (int o = -half_bw; o <= half_bw; ++o) {
                const int j = (i + o + size) % size;
                acc += at_offset(i, o) * x[static_cast<size_t>(j)];
            }
            y[static_cast<size_t>(i)] = acc;
        }
        return y;
    }
};

/// Assemble Psi = H H^H + nsr * I in banded form, exactly.
///
/// Each ordered path pair (p, s) contributes a rank-structured term
/// h_p conj(h_s) Pi^{l_p} Delta^{k_p - k_s} Pi^{-l_s}: a single cyclic
/// diagonal at offset l_s - l_p (column minus row) carrying the phase ramp
/// e^{j 2 pi (k_p - k_s)(i - l_p)/MN} along rows i. Equal-index pairs stack
/// |h_p|^2 onto the main diagonal; nsr is added once. Hermitian symmetry is
/// used to compute each unordered pair once and mirror its conjugate.
inline QuasiBandedMatrix assemble_psi(const DdChannel& ch, double nsr, CmCounter* cm = nullptr) {
    if (!(nsr > 0.0))
        throw ConfigError("assemble_psi: noise-to-signal ratio must be positive");
    const int mn = ch.grid.frame_size();
    const int theta = ch.alpha - 1;
    QuasiBandedMatrix psi(mn, theta, true);

    // Main diagonal: sum of |h_p|^2 plus the regularizer.
    double diag = nsr;
    for (const auto& p : ch.paths) diag += std::norm(p.gain);
    cm_add(cm, &CmCounter::assemble, static_cast<std::uint64_t>(ch.paths.size()));
    for (int i = 0; i < mn; ++i) psi.at_offset(i, 0) += cplx(diag, 0.0);

    const int np = ch.path_count();
    for (int p = 0; p < np; ++p) {
        for (int s = p + 1; s < np; ++s) {
            const auto& pp = ch.paths[static_cast<size_t>(p)];
            const auto& ps = ch.paths[static_cast<size_t>(s)];
            const int d = pp.delay_bin - ps.delay_bin; // row minus column
            const int kappa = pp.doppler_bin - ps.doppler_bin;
            const double w = 2.0 * std::numbers::pi * kappa / mn;
            // Value at row i: h_p conj(h_s) e^{j w (i - l_p)}; advance by one
            // rotation per row.
            cplx val = pp.gain * std::conj(ps.gain) * std::polar(1.0, -w * pp.delay_bin);
            const cplx step = std::polar(1.0, w);
            cm_add(cm, &CmCounter::assemble, 2 + static_cast<std::uint64_t>(mn) - 1);
            for (int i = 0; i < mn; ++i) {
                psi.at_offset(i, -d) += val;                    // entry (i, i-d)
                const int j = (i - d + mn) % mn;
                psi.at_offset(j, d) += std::conj(val);          // mirrored entry (i-d, i)
                if (i + 1 < mn) val *= step;
            }
        }
    }
    return psi;
}

} // namespace otfs
