#pragma once

#include <vector>

#include "otfs/fft.hpp"
#include "otfs/grid.hpp"

namespace otfs {

enum class Waveform { Otfs, Ofdm };

/// Cyclic prefix length in samples.
struct CpConfig {
    int cp_len = 0;
};

// ---------------------------------------------------------------------------
// OTFS: with a rectangular pulse the full ISFFT + Heisenberg chain collapses
// to s = vec{D * W_N}, i.e. one N-point unitary inverse FFT per delay row.
// The matrix form A = W_N (x) I_M is unitary and never materialized here.
// ---------------------------------------------------------------------------

inline std::vector<cplx> otfs_modulate(const DdFrame& frame) {
    const int m = frame.grid.m, n = frame.grid.n;
    std::vector<cplx> out(frame.data.size());
    std::vector<cplx> row(static_cast<size_t>(n));
    for (int l = 0; l < m; ++l) {
        for (int k = 0; k < n; ++k) row[static_cast<size_t>(k)] = frame.at(l, k);
        fft_unitary(row, FftDir::Inverse);
        for (int k = 0; k < n; ++k) out[static_cast<size_t>(l + m * k)] = row[static_cast<size_t>(k)];
    }
    return out;
}

/// Matched-filter demodulation: reshape column-wise to M x N, apply an
/// N-point forward FFT along each row (W_N^H), re-vectorize. Equals A^H r.
inline DdFrame otfs_demodulate_mf(const std::vector<cplx>& r_ce, const OtfsGrid& grid,
                                  CmCounter* cm = nullptr) {
    const int m = grid.m, n = grid.n;
    if (static_cast<int>(r_ce.size()) != grid.frame_size())
        throw ShapeError("otfs_demodulate_mf: vector length != M*N");
    DdFrame out(grid);
    std::vector<cplx> row(static_cast<size_t>(n));
    for (int l = 0; l < m; ++l) {
        for (int k = 0; k < n; ++k) row[static_cast<size_t>(k)] = r_ce[static_cast<size_t>(l + m * k)];
        fft_unitary(row, FftDir::Forward, cm, &CmCounter::demod);
        for (int k = 0; k < n; ++k) out.at(l, k) = row[static_cast<size_t>(k)];
    }
    return out;
}

// ---------------------------------------------------------------------------
// OFDM over the same frame: A = I_N (x) W_M, i.e. one M-point unitary inverse
// FFT per time-slot column (no per-symbol CP; the frame is cyclic as a whole).
// ---------------------------------------------------------------------------

inline std::vector<cplx> ofdm_modulate(const DdFrame& frame) {
    const int m = frame.grid.m, n = frame.grid.n;
    std::vector<cplx> out(frame.data.size());
    std::vector<cplx> col(static_cast<size_t>(m));
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < m; ++l) col[static_cast<size_t>(l)] = frame.at(l, k);
        fft_unitary(col, FftDir::Inverse);
        for (int l = 0; l < m; ++l) out[static_cast<size_t>(l + m * k)] = col[static_cast<size_t>(l)];
    }
    return out;
}

inline DdFrame ofdm_demodulate(const std::vector<cplx>& r_ce, const OtfsGrid& grid,
                               CmCounter* cm = nullptr) {
    const int m = grid.m, n = grid.n;
    if (static_cast<int>(r_ce.size()) != grid.frame_size())
        throw ShapeError("ofdm_demodulate: vector length != M*N");
    DdFrame out(grid);
    std::vector<cplx> col(static_cast<size_t>(m));
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < m; ++l) col[static_cast<size_t>(l)] = r_ce[static_cast<size_t>(l + m * k)];
        fft_unitary(col, FftDir::Forward, cm, &CmCounter::demod);
        for (int l = 0; l < m; ++l) out.at(l, k) = col[static_cast<size_t>(l)];
    }
    return out;
}

inline std::vector<cplx> modulate(const DdFrame& frame, Waveform wf) {
    return wf == Waveform::Otfs ? otfs_modulate(frame) : ofdm_modulate(frame);
}

inline DdFrame demodulate_mf(const std::vector<cplx>& r_ce, const OtfsGrid& grid, Waveform wf,
                             CmCounter* cm = nullptr) {
    return wf == Waveform::Otfs ? otfs_demodulate_mf(r_ce, grid, cm)
                                : ofdm_demodulate(r_ce, grid, cm);
}

// ---------------------------------------------------------------------------
// Cyclic prefix
// ---------------------------------------------------------------------------

inline std::vector<cplx> add_cp(const std::vector<cplx>& s, const CpConfig& cp) {
    const int n = static_cast<int>(s.size());
    if (cp.cp_len < 0 || cp.cp_len > n)
        throw ConfigError("add_cp: cp_len must be in [0, frame length]");
    std::vector<cplx> out;
    out.reserve(s.size() + static_cast<size_t>(cp.cp_len));
    out.insert(out.end(), s.end() - cp.cp_len, s.end());
    out.insert(out.end(), s.begin(), s.end());
    return out;
}

inline std::vector<cplx> remove_cp(const std::vector<cplx>& x, const CpConfig& cp) {
    if (cp.cp_len < 0 || static_cast<size_t>(cp.cp_len) > x.size())
        throw ConfigError("remove_cp: cp_len exceeds buffer");
    return std::vector<cplx>(x.begin() + cp.cp_len, x.end());
}

} // namespace otfs
