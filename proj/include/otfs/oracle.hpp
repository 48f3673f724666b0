#pragma once

#include <Eigen/Dense>
#include <numbers>

#include "otfs/channel.hpp"
#include "otfs/grid.hpp"
#include "otfs/modem.hpp"
#include "otfs/partitioned_lu.hpp"
#include "otfs/quasi_banded.hpp"

namespace otfs {

// Dense, structure-oblivious reference implementations. These are the ground
// truth the fast path is tested against, so they deliberately share nothing
// with it: matrices are materialized from their definitions and solved with a
// general partial-pivoting dense solver. Hard size guards keep the cubic
// costs out of routine runs.

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr int kMaxDenseChannel = 4096;
constexpr int kMaxDenseLmmse = 1024;

inline Vec to_eigen(const std::vector<cplx>& v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

inline std::vector<cplx> from_eigen(const Vec& v) {
    std::vector<cplx> out(static_cast<size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<size_t>(i)] = v(i);
    return out;
}

/// H = sum_p h_p Pi^{l_p} Delta^{k_p}, built literally from powers of the
/// cyclic shift Pi = circ{[0 1 0 ... 0]} and Delta = diag{e^{j2pi q/MN}}.
inline Mat dense_channel_matrix(const DdChannel& ch) {
    const int mn = ch.grid.frame_size();
    if (mn > kMaxDenseChannel) throw ResourceError("dense_channel_matrix: MN exceeds size guard");
    Mat h = Mat::Zero(mn, mn);
    for (const auto& p : ch.paths) {
        const double w = 2.0 * std::numbers::pi * p.doppler_bin / mn;
        for (int j = 0; j < mn; ++j) {
            const int i = (j + p.delay_bin) % mn; // Pi^l moves row j to row j+l
            h(i, j) += p.gain * std::polar(1.0, w * j);
        }
    }
    return h;
}

/// Unitary modulation matrix: W_N (x) I_M for OTFS, I_N (x) W_M for OFDM,
/// with W_L the normalized L-point inverse DFT.
inline Mat dense_modulation_matrix(const OtfsGrid& grid, Waveform wf) {
    const int m = grid.m, n = grid.n, mn = grid.frame_size();
    if (mn > kMaxDenseLmmse) throw ResourceError("dense_modulation_matrix: MN exceeds size guard");
    Mat a = Mat::Zero(mn, mn);
    if (wf == Waveform::Otfs) {
        const double s = 1.0 / std::sqrt(static_cast<double>(n));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                const cplx w = s * std::polar(1.0, 2.0 * std::numbers::pi * r * c / n);
                for (int d = 0; d < m; ++d) a(d + m * r, d + m * c) = w;
            }
    } else {
        const double s = 1.0 / std::sqrt(static_cast<double>(m));
        for (int b = 0; b < n; ++b)
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < m; ++c)
                    a(r + m * b, c + m * b) = s * std::polar(1.0, 2.0 * std::numbers::pi * r * c / m);
    }
    return a;
}

/// Literal dense LMMSE estimate
/// d_hat = (HA)^H [ (HA)(HA)^H + nsr I ]^-1 r.
inline DdFrame dense_lmmse(const std::vector<cplx>& rx, const DdChannel& ch, double nsr,
                           Waveform wf) {
    const int mn = ch.grid.frame_size();
    if (mn > kMaxDenseLmmse) throw ResourceError("dense_lmmse: MN exceeds size guard");
    if (static_cast<int>(rx.size()) != mn) throw ShapeError("dense_lmmse: length != M*N");
    const Mat g = dense_channel_matrix(ch) * dense_modulation_matrix(ch.grid, wf);
    Mat phi = g * g.adjoint();
    phi += nsr * Mat::Identity(mn, mn);
    const Vec y = phi.partialPivLu().solve(to_eigen(rx));
    const Vec d = g.adjoint() * y;
    return DdFrame(ch.grid, from_eigen(d));
}

/// Densify a quasi-banded matrix (test support).
inline Mat dense_from_band(const QuasiBandedMatrix& qb) {
    Mat out = Mat::Zero(qb.size, qb.size);
    for (int i = 0; i < qb.size; ++i)
        for (int j = 0; j < qb.size; ++j) out(i, j) = qb.entry(i, j);
    return out;
}

/// Assemble the dense unit-lower factor L = [[Lc, 0], [V, F]].
inline Mat dense_lower(const PartitionedLU& lu) {
    const int mn = lu.size, q = lu.q_core, theta = lu.theta;
    Mat l = Mat::Zero(mn, mn);
    for (int k = 0; k < q; ++k) {
        l(k, k) = 1.0;
        for (int i = 1; i <= std::min(k, theta); ++i) l(k, k - i) = lu.l_core(k, i);
    }
    for (int t = 0; t < theta; ++t) {
        for (int k = 0; k < q; ++k) l(q + t, k) = lu.v_at(t, k);
        for (int s = 0; s < t; ++s) l(q + t, q + s) = lu.f_at(t, s);
        l(q + t, q + t) = 1.0;
    }
    return l;
}

/// Assemble the dense upper factor U = [[Uc, E], [0, G]].
inline Mat dense_upper(const PartitionedLU& lu) {
    const int mn = lu.size, q = lu.q_core, theta = lu.theta;
    Mat u = Mat::Zero(mn, mn);
    for (int k = 0; k < q; ++k) {
        for (int o = 0; o <= std::min(theta, q - 1 - k); ++o) u(k, k + o) = lu.u_core(k, o);
        for (int t = 0; t < theta; ++t) u(k, q + t) = lu.e_at(k, t);
    }
    for (int t = 0; t < theta; ++t)
        for (int v = t; v < theta; ++v) u(q + t, q + v) = lu.g_at(t, v);
    return u;
}

} // namespace oracle
} // namespace otfs
