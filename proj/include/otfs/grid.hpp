#pragma once

#include <cstdint>
#include <vector>

#include "otfs/types.hpp"

namespace otfs {

constexpr bool is_pow2(int v) { return v >= 1 && (v & (v - 1)) == 0; }

inline int ilog2(int v) {
    int r = 0;
    while ((1 << r) < v) ++r;
    return r;
}

/// Frame geometry of a critically sampled M x N grid: M subcarriers of
/// spacing delta_f, N time slots of duration T = 1/delta_f.
/// M and N are restricted to powers of two so that every transform in the
/// chain is a radix-2 FFT.
struct OtfsGrid {
    int m = 1;            // subcarriers (delay bins)
    int n = 1;            // time slots (Doppler bins)
    double delta_f = 15e3; // subcarrier spacing [Hz]

    OtfsGrid() = default;
    OtfsGrid(int m_, int n_, double delta_f_) : m(m_), n(n_), delta_f(delta_f_) {
        if (!is_pow2(m) || !is_pow2(n))
            throw ConfigError("grid: M and N must be powers of two, got M=" +
                              std::to_string(m) + " N=" + std::to_string(n));
        if (!(delta_f > 0.0))
            throw ConfigError("grid: delta_f must be positive");
    }

    int frame_size() const { return m * n; }              // MN samples
    double symbol_duration() const { return 1.0 / delta_f; } // T, so T*delta_f == 1
    double bandwidth() const { return m * delta_f; }         // B
    double frame_duration() const { return n * symbol_duration(); } // T_f

    bool operator==(const OtfsGrid& o) const {
        return m == o.m && n == o.n && delta_f == o.delta_f;
    }
};

/// M x N complex data frame on the delay-Doppler lattice, stored column-major:
/// entry (l, k) -- delay bin l, Doppler bin k -- lives at index l + M*k.
/// The storage order is the vectorization convention, so vec/unvec are copies.
struct DdFrame {
    OtfsGrid grid;
    std::vector<cplx> data; // column-major M x N

    DdFrame() = default;
    explicit DdFrame(const OtfsGrid& g) : grid(g), data(static_cast<size_t>(g.frame_size())) {}
    DdFrame(const OtfsGrid& g, std::vector<cplx> d) : grid(g), data(std::move(d)) {
        if (static_cast<int>(data.size()) != g.frame_size())
            throw ShapeError("DdFrame: data size does not match M*N");
    }

    cplx& at(int l, int k) { return data[static_cast<size_t>(l + grid.m * k)]; }
    const cplx& at(int l, int k) const { return data[static_cast<size_t>(l + grid.m * k)]; }
};

/// Column-major stacking: output index q = l + M*k holds X(l, k).
inline std::vector<cplx> vec_columns(const DdFrame& x) { return x.data; }

inline DdFrame unvec_columns(const std::vector<cplx>& v, const OtfsGrid& g) {
    if (static_cast<int>(v.size()) != g.frame_size())
        throw ShapeError("unvec_columns: vector length != M*N");
    return DdFrame(g, v);
}

} // namespace otfs
