#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "otfs/types.hpp"

namespace otfs {

/// Square Gray-coded QAM constellation, normalized to unit average symbol
/// energy. The label's first half selects the in-phase level, the second half
/// the quadrature level; each axis is Gray-coded so geometric neighbours
/// differ in exactly one bit. For 4-QAM this yields 00 -> (+1+j)/sqrt(2) with
/// one-bit changes going counter-clockwise.
struct QamConstellation {
    int order = 4;
    std::vector<cplx> points; // indexed by integer label, MSB-first bit order

    static QamConstellation make(int order) {
        if (order != 4 && order != 16 && order != 64)
            throw ConfigError("QAM order must be 4, 16 or 64");
        QamConstellation c;
        c.order = order;
        const int bits = bits_for(order);
        const int axis_bits = bits / 2;
        const int levels = 1 << axis_bits;
        // Unit-energy scale for the {+/-1, +/-3, ...} lattice.
        const double scale = std::sqrt(2.0 * (levels * levels - 1) / 3.0);
        c.points.resize(static_cast<size_t>(order));
        for (int label = 0; label < order; ++label) {
            const int i_bits = label >> axis_bits;
            const int q_bits = label & (levels - 1);
            c.points[static_cast<size_t>(label)] =
                cplx(axis_level(i_bits, levels), axis_level(q_bits, levels)) / scale;
        }
        return c;
    }

    int bits_per_symbol() const { return bits_for(order); }

private:
    static int bits_for(int order) {
        int b = 0;
        while ((1 << b) < order) ++b;
        return b;
    }
    static int gray_decode(int g) {
        int v = 0;
        for (; g; g >>= 1) v ^= g;
        return v;
    }
    // Gray label 0 maps to the largest positive level, so an all-zero label
    // lands in the first quadrant.
    static double axis_level(int gray_label, int levels) {
        const int v = gray_decode(gray_label);
        return static_cast<double>(levels - 1 - 2 * v);
    }
};

/// Map a bit sequence onto constellation symbols, log2(order) bits per symbol,
/// MSB first within each group.
inline std::vector<cplx> qam_map(const std::vector<std::uint8_t>& bits,
                                 const QamConstellation& c) {
    const int bps = c.bits_per_symbol();
    if (bits.size() % static_cast<size_t>(bps) != 0)
        throw ShapeError("qam_map: bit count not divisible by log2(order)");
    std::vector<cplx> out(bits.size() / static_cast<size_t>(bps));
    for (size_t s = 0; s < out.size(); ++s) {
        int label = 0;
        for (int b = 0; b < bps; ++b)
            label = (label << 1) | (bits[s * static_cast<size_t>(bps) + static_cast<size_t>(b)] & 1);
        out[s] = c.points[static_cast<size_t>(label)];
    }
    return out;
}

/// Hard decision: nearest constellation point in Euclidean distance.
inline std::vector<std::uint8_t> qam_demap_hard(const std::vector<cplx>& symbols,
                                                const QamConstellation& c) {
    const int bps = c.bits_per_symbol();
    std::vector<std::uint8_t> bits(symbols.size() * static_cast<size_t>(bps));
    for (size_t s = 0; s < symbols.size(); ++s) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int label = 0; label < c.order; ++label) {
            const double d = std::norm(symbols[s] - c.points[static_cast<size_t>(label)]);
            if (d < best_d) {
                best_d = d;
                best = label;
            }
        }
        for (int b = 0; b < bps; ++b)
            bits[s * static_cast<size_t>(bps) + static_cast<size_t>(b)] =
                static_cast<std::uint8_t>((best >> (bps - 1 - b)) & 1);
    }
    return bits;
}

} // namespace otfs
