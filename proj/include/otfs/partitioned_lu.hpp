#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "otfs/cm_counter.hpp"
#include "otfs/quasi_banded.hpp"
#include "otfs/types.hpp"

namespace otfs {

/// Block-partitioned LU factors of a quasi-banded Hermitian positive-definite
/// matrix Psi of order MN with cyclic half-bandwidth theta, partitioned at
/// Q = MN - theta:
///
///   [ T  B ]   [ Lc  0 ] [ Uc  E ]
///   [ S  C ] = [ V   F ] [ 0   G ]
///
/// Lc/Uc are the banded LU factors of the leading core T (unit lower /
/// upper, bandwidth theta, packed in one Q x (2 theta + 1) band), E = Lc^-1 B
/// and V = S Uc^-1 are dense strips, and F G is the unpivoted LU of the
/// theta x theta Schur complement C - V E. diag(Lc) = diag(F) = 1 exactly.
struct PartitionedLU {
    int size = 0;   // MN
    int theta = 0;  // alpha - 1
    int q_core = 0; // Q = MN - theta

    std::vector<cplx> core_band; // Q x (2 theta + 1): multipliers below, Uc on/above
    std::vector<cplx> e_strip;   // Q x theta, row-major
    std::vector<cplx> v_strip;   // theta x Q, row-major
    std::vector<cplx> f_corner;  // theta x theta, unit lower (strict part stored)
    std::vector<cplx> g_corner;  // theta x theta, upper incl. diagonal

    int stride() const { return 2 * theta + 1; }

    /// Lc(k, k-i), i in [1, theta]; unit diagonal implicit.
    const cplx& l_core(int k, int i) const {
        return core_band[static_cast<size_t>(k) * static_cast<size_t>(stride()) +
                         static_cast<size_t>(theta - i)];
    }
    /// Uc(k, k+o), o in [0, theta].
    const cplx& u_core(int k, int o) const {
        return core_band[static_cast<size_t>(k) * static_cast<size_t>(stride()) +
                         static_cast<size_t>(theta + o)];
    }
    const cplx& e_at(int k, int t) const {
        return e_strip[static_cast<size_t>(k) * static_cast<size_t>(theta) + static_cast<size_t>(t)];
    }
    const cplx& v_at(int t, int k) const {
        return v_strip[static_cast<size_t>(t) * static_cast<size_t>(q_core) + static_cast<size_t>(k)];
    }
    const cplx& f_at(int t, int s) const {
        return f_corner[static_cast<size_t>(t) * static_cast<size_t>(theta) + static_cast<size_t>(s)];
    }
    const cplx& g_at(int t, int u) const {
        return g_corner[static_cast<size_t>(t) * static_cast<size_t>(theta) + static_cast<size_t>(u)];
    }
};

namespace detail {
inline bool nonzero(const cplx& v) { return v.real() != 0.0 || v.imag() != 0.0; }
}

/// Factor a Hermitian positive-definite quasi-banded matrix. Unpivoted
/// throughout: positive definiteness keeps every pivot real-positive, and
/// pivoting would destroy both the band and the unit diagonals. A pivot below
/// 1e-12 * max|Psi| raises SingularError instead of permuting.
inline PartitionedLU factor(const QuasiBandedMatrix& psi, CmCounter* cm = nullptr) {
    const int mn = psi.size;
    const int theta = psi.half_bw;
    const int q = mn - theta;

    PartitionedLU lu;
    lu.size = mn;
    lu.theta = theta;
    lu.q_core = q;

    double max_abs = 0.0;
    for (const auto& v : psi.band) max_abs = std::max(max_abs, std::abs(v));
    const double tol = 1e-12 * max_abs;

    const int w = 2 * theta + 1;
    lu.core_band.assign(static_cast<size_t>(q) * static_cast<size_t>(w), cplx(0.0, 0.0));
    auto wb = [&](int k, int o) -> cplx& {
        return lu.core_band[static_cast<size_t>(k) * static_cast<size_t>(w) +
                            static_cast<size_t>(theta + o)];
    };

    // Leading core T: the band entries whose column also lands in [0, Q).
    for (int k = 0; k < q; ++k)
        for (int o = -theta; o <= theta; ++o)
            if (k + o >= 0 && k + o < q) wb(k, o) = psi.at_offset(k, o);

    // Banded Doolittle elimination; multipliers overwrite the lower offsets.
    std::uint64_t cms = 0;
    for (int k = 0; k < q; ++k) {
        const cplx pivot = wb(k, 0);
        if (std::abs(pivot) < tol || !detail::nonzero(pivot))
            throw SingularError("factor: near-zero pivot in banded core at row " + std::to_string(k));
        const int imax = std::min(k + theta, q - 1);
        for (int i = k + 1; i <= imax; ++i) {
            cplx& lik = wb(i, k - i);
            if (!detail::nonzero(lik)) continue;
            lik /= pivot;
            ++cms;
            for (int j = k + 1; j <= imax; ++j) {
                const cplx ukj = wb(k, j - k);
                if (!detail::nonzero(ukj)) continue;
                wb(i, j - i) -= lik * ukj;
                ++cms;
            }
        }
    }
    cm_add(cm, &CmCounter::factor_core, cms);

    // E = Lc^-1 B and V^H = (Uc^H)^-1 S^H, both by banded forward
    // substitution over the theta strip columns. S^H equals B because Psi is
    // Hermitian. Leading zero runs are skipped, so only genuine products are
    // performed (and counted).
    lu.e_strip.assign(static_cast<size_t>(q) * static_cast<size_t>(theta), cplx(0.0, 0.0));
    lu.v_strip.assign(static_cast<size_t>(theta) * static_cast<size_t>(q), cplx(0.0, 0.0));
    cms = 0;
    std::vector<cplx> col(static_cast<size_t>(q));
    for (int t = 0; t < theta; ++t) {
        // E column t.
        for (int k = 0; k < q; ++k) {
            cplx acc = psi.entry(k, q + t);
            const int ilim = std::min(k, theta);
            for (int i = 1; i <= ilim; ++i) {
                const cplx& lki = lu.l_core(k, i);
                const cplx& y = col[static_cast<size_t>(k - i)];
                if (!detail::nonzero(lki) || !detail::nonzero(y)) continue;
                acc -= lki * y;
                ++cms;
            }
            col[static_cast<size_t>(k)] = acc;
            lu.e_strip[static_cast<size_t>(k) * static_cast<size_t>(theta) + static_cast<size_t>(t)] = acc;
        }
        // w = (Uc^H)^-1 (column t of B); V(t, :) = w^H.
        for (int k = 0; k < q; ++k) {
            cplx acc = psi.entry(k, q + t);
            const int ilim = std::min(k, theta);
            bool any = detail::nonzero(acc);
            for (int i = 1; i <= ilim; ++i) {
                const cplx uik = std::conj(lu.u_core(k - i, i)); // (Uc^H)(k, k-i)
                const cplx& y = col[static_cast<size_t>(k - i)];
                if (!detail::nonzero(uik) || !detail::nonzero(y)) continue;
                acc -= uik * y;
                ++cms;
                any = true;
            }
            if (any) {
                acc /= std::conj(lu.u_core(k, 0));
                ++cms;
            }
            col[static_cast<size_t>(k)] = acc;
            lu.v_strip[static_cast<size_t>(t) * static_cast<size_t>(q) + static_cast<size_t>(k)] =
                std::conj(acc);
        }
    }
    cm_add(cm, &CmCounter::strips, cms);

    // Schur complement C - V E, then its unpivoted LU into F (unit lower) and
    // G (upper).
    lu.f_corner.assign(static_cast<size_t>(theta) * static_cast<size_t>(theta), cplx(0.0, 0.0));
    lu.g_corner.assign(static_cast<size_t>(theta) * static_cast<size_t>(theta), cplx(0.0, 0.0));
    cms = 0;
    std::vector<cplx> sc(static_cast<size_t>(theta) * static_cast<size_t>(theta));
    for (int t = 0; t < theta; ++t) {
        for (int u = 0; u < theta; ++u) {
            cplx acc = psi.entry(q + t, q + u);
            for (int k = 0; k < q; ++k) {
                const cplx& vt = lu.v_at(t, k);
                const cplx& eu = lu.e_at(k, u);
                if (!detail::nonzero(vt) || !detail::nonzero(eu)) continue;
                acc -= vt * eu;
                ++cms;
            }
            sc[static_cast<size_t>(t) * static_cast<size_t>(theta) + static_cast<size_t>(u)] = acc;
        }
    }
    auto scv = [&](int t, int u) -> cplx& {
        return sc[static_cast<size_t>(t) * static_cast<size_t>(theta) + static_cast<size_t>(u)];
    };
    for (int k = 0; k < theta; ++k) {
        const cplx pivot = scv(k, k);
        if (std::abs(pivot) < tol || !detail::nonzero(pivot))
            throw SingularError("factor: near-zero pivot in corner Schur block at row " +
                                std::to_string(k));
        for (int i = k + 1; i < theta; ++i) {
            cplx& fik = scv(i, k);
            if (!detail::nonzero(fik)) continue;
            fik /= pivot;
            ++cms;
            for (int j = k + 1; j < theta; ++j) {
                if (!detail::nonzero(scv(k, j))) continue;
                scv(i, j) -= fik * scv(k, j);
                ++cms;
            }
        }
    }
    for (int t = 0; t < theta; ++t) {
        for (int u = 0; u < t; ++u) lu.f_corner[static_cast<size_t>(t) * static_cast<size_t>(theta) + static_cast<size_t>(u)] = scv(t, u);
        for (int u = t; u < theta; ++u) lu.g_corner[static_cast<size_t>(t) * static_cast<size_t>(theta) + static_cast<size_t>(u)] = scv(t, u);
    }
    cm_add(cm, &CmCounter::schur, cms);
    return lu;
}

/// r1 = L^-1 r: banded forward substitution through the unit-lower core,
/// then the theta trailing rows with their dense V block and unit-lower F.
inline std::vector<cplx> solve_lower(const PartitionedLU& lu, const std::vector<cplx>& r,
                                     CmCounter* cm = nullptr) {
    const int mn = lu.size, theta = lu.theta, q = lu.q_core;
    if (static_cast<int>(r.size()) != mn) throw ShapeError("solve_lower: length != M*N");
    std::vector<cplx> y(r);
    std::uint64_t cms = 0;
    for (int k = 0; k < q; ++k) {
        cplx acc = r[static_cast<size_t>(k)];
        const int ilim = std::min(k, theta);
        for (int i = 1; i <= ilim; ++i) {
            const cplx& lki = lu.l_core(k, i);
            if (!detail::nonzero(lki)) continue;
            acc -= lki * y[static_cast<size_t>(k - i)];
            ++cms;
        }
        y[static_cast<size_t>(k)] = acc;
    }
    for (int t = 0; t < theta; ++t) {
        cplx acc = r[static_cast<size_t>(q + t)];
        for (int k = 0; k < q; ++k) {
            const cplx& vt = lu.v_at(t, k);
            if (!detail::nonzero(vt)) continue;
            acc -= vt * y[static_cast<size_t>(k)];
            ++cms;
        }
        for (int s = 0; s < t; ++s) {
            const cplx& fts = lu.f_at(t, s);
            if (!detail::nonzero(fts)) continue;
            acc -= fts * y[static_cast<size_t>(q + s)];
            ++cms;
        }
        y[static_cast<size_t>(q + t)] = acc;
    }
    cm_add(cm, &CmCounter::solve_lower, cms);
    return y;
}

/// r2 = U^-1 r1: the trailing theta unknowns via the dense upper corner G,
/// then a backward sweep through the banded core where every row also couples
/// to the trailing unknowns through its dense E row.
inline std::vector<cplx> solve_upper(const PartitionedLU& lu, const std::vector<cplx>& r1,
                                     CmCounter* cm = nullptr) {
    const int mn = lu.size, theta = lu.theta, q = lu.q_core;
    if (static_cast<int>(r1.size()) != mn) throw ShapeError("solve_upper: length != M*N");
    std::vector<cplx> z(r1);
    std::uint64_t cms = 0;
    for (int t = theta - 1; t >= 0; --t) {
        cplx acc = r1[static_cast<size_t>(q + t)];
        for (int u = t + 1; u < theta; ++u) {
            const cplx& gtu = lu.g_at(t, u);
            if (!detail::nonzero(gtu)) continue;
            acc -= gtu * z[static_cast<size_t>(q + u)];
            ++cms;
        }
        const cplx g = lu.g_at(t, t);
        if (!detail::nonzero(g)) throw SingularError("solve_upper: zero diagonal in corner block");
        z[static_cast<size_t>(q + t)] = acc / g;
        ++cms;
    }
    for (int k = q - 1; k >= 0; --k) {
        cplx acc = r1[static_cast<size_t>(k)];
        const int olim = std::min(theta, q - 1 - k);
        for (int o = 1; o <= olim; ++o) {
            const cplx& uko = lu.u_core(k, o);
            if (!detail::nonzero(uko)) continue;
            acc -= uko * z[static_cast<size_t>(k + o)];
            ++cms;
        }
        for (int t = 0; t < theta; ++t) {
            const cplx& ekt = lu.e_at(k, t);
            if (!detail::nonzero(ekt)) continue;
            acc -= ekt * z[static_cast<size_t>(q + t)];
            ++cms;
        }
        const cplx u0 = lu.u_core(k, 0);
        if (!detail::nonzero(u0)) throw SingularError("solve_upper: zero diagonal in banded core");
        z[static_cast<size_t>(k)] = acc / u0;
        ++cms;
    }
    cm_add(cm, &CmCounter::solve_upper, cms);
    return z;
}

} // namespace otfs
