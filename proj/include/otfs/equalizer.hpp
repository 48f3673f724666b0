#pragma once

#include <algorithm>
#include <vector>

#include "otfs/channel.hpp"
#include "otfs/cm_counter.hpp"
#include "otfs/modem.hpp"
#include "otfs/partitioned_lu.hpp"
#include "otfs/quasi_banded.hpp"

namespace otfs {

/// Smallest admissible noise-to-signal ratio. The equalizer needs
/// sigma_n^2/sigma_d^2 > 0 for positive definiteness, so a request for exactly
/// zero noise is clamped here instead of failing.
constexpr double kNsrFloor = 1e-12;

/// Two-stage LMMSE receiver: channel equalization
/// r_ce = H^H (H H^H + nsr I)^-1 r via the quasi-banded partitioned LU,
/// followed by matched-filter demodulation of the configured waveform.
///
/// The factorization depends only on the channel realization and nsr, so it
/// is done once at construction and reused across every frame that shares the
/// channel. Immutable afterwards; equalize() is safe to call concurrently on
/// distinct buffers (when no counter is attached).
class LmmseFastReceiver {
public:
    LmmseFastReceiver(const DdChannel& ch, double nsr, Waveform wf, CmCounter* cm = nullptr)
        : ch_(ch), nsr_(std::max(nsr, kNsrFloor)), wf_(wf), cm_(cm) {
        const QuasiBandedMatrix psi = assemble_psi(ch_, nsr_, cm_);
        lu_ = factor(psi, cm_);
    }

    /// d_hat = A^H H^H Psi^-1 r, executed as forward solve, backward solve,
    /// channel adjoint, matched-filter demodulation.
    DdFrame equalize(const std::vector<cplx>& rx) const {
        const std::vector<cplx> r1 = solve_lower(lu_, rx, cm_);
        const std::vector<cplx> r2 = solve_upper(lu_, r1, cm_);
        const std::vector<cplx> r_ce = apply_channel_adjoint(r2, ch_, cm_);
        return demodulate_mf(r_ce, ch_.grid, wf_, cm_);
    }

    const DdChannel& channel() const { return ch_; }
    const PartitionedLU& factors() const { return lu_; }
    double nsr() const { return nsr_; }
    Waveform waveform() const { return wf_; }

private:
    DdChannel ch_;
    double nsr_;
    Waveform wf_;
    CmCounter* cm_;
    PartitionedLU lu_;
};

} // namespace otfs
