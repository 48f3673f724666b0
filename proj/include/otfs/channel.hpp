#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "otfs/cm_counter.hpp"
#include "otfs/grid.hpp"
#include "otfs/random.hpp"
#include "otfs/types.hpp"

namespace otfs {

constexpr double kSpeedOfLight = 299792458.0; // m/s

/// One discrete delay-Doppler path. The Doppler bin is kept signed: Jakes
/// draws produce negative Doppler, and the diagonal phase matrix is
/// well-defined for negative powers, so no remapping to [0, N-1] is done.
struct DdPath {
    cplx gain{0.0, 0.0};
    int delay_bin = 0;   // l in [0, M-1]
    int doppler_bin = 0; // k, signed, |k| <= N-1
};

/// Discrete P-path delay-Doppler channel on a given grid.
/// alpha (delay length) fixes the cyclic half-bandwidth theta = alpha-1 of
/// the equalizer's system matrix; beta (Doppler length) only enters the
/// complexity accounting.
struct DdChannel {
    OtfsGrid grid;
    std::vector<DdPath> paths;
    int alpha = 1;
    int beta = 0;

    static DdChannel from_paths(const OtfsGrid& grid, std::vector<DdPath> paths) {
        DdChannel ch;
        ch.grid = grid;
        ch.paths = std::move(paths);
        int max_l = 0, max_k = 0;
        for (const auto& p : ch.paths) {
            if (p.delay_bin < 0 || p.delay_bin >= grid.m)
                throw ConfigError("DdChannel: delay bin outside [0, M-1]");
            if (std::abs(p.doppler_bin) > grid.n - 1)
                throw ConfigError("DdChannel: |doppler bin| must be < N");
            max_l = std::max(max_l, p.delay_bin);
            max_k = std::max(max_k, std::abs(p.doppler_bin));
        }
        ch.alpha = max_l + 1;
        ch.beta = max_k;
        // Partition validity needs Q = MN - theta > theta, i.e. 2(alpha-1) < MN;
        // for the even frame sizes in use this is the alpha <= MN/2 rule.
        if (2 * (ch.alpha - 1) >= grid.frame_size())
            throw ConfigError("DdChannel: delay length alpha exceeds MN/2");
        return ch;
    }

    int path_count() const { return static_cast<int>(paths.size()); }
};

// ---------------------------------------------------------------------------
// Power-delay profiles
// ---------------------------------------------------------------------------

/// Tapped power-delay profile: per-tap excess delay [ns] and mean power [dB].
struct PowerDelayProfile {
    struct Tap {
        double delay_ns = 0.0;
        double power_db = 0.0;
    };
    std::string name;
    std::vector<Tap> taps;

    /// Built-in vehicular profiles. "eva": Extended Vehicular A (9 taps,
    /// 2.51 us spread). "evb": Vehicular B (6 taps, 20 us spread).
    static PowerDelayProfile builtin(const std::string& name) {
        if (name == "eva") {
            return {"eva",
                    {{0, 0.0},
                     {30, -1.5},
                     {150, -1.4},
                     {310, -3.6},
                     {370, -0.6},
                     {710, -9.1},
                     {1090, -7.0},
                     {1730, -12.0},
                     {2510, -16.9}}};
        }
        if (name == "evb") {
            return {"evb",
                    {{0, -2.5},
                     {300, 0.0},
                     {8900, -12.8},
                     {12900, -10.0},
                     {17100, -25.2},
                     {20000, -16.0}}};
        }
        if (name == "flat") {
            return {"flat", {{0, 0.0}}};
        }
        throw ConfigError("unknown built-in profile '" + name + "'");
    }

    /// Plain-text profile: one tap per line, "delay_ns power_dB",
    /// '#' starts a comment.
    static PowerDelayProfile load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open profile file '" + path + "'");
        PowerDelayProfile p;
        p.name = path;
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            Tap t;
            if (ls >> t.delay_ns >> t.power_db) p.taps.push_back(t);
        }
        if (p.taps.empty()) throw ConfigError("profile file '" + path + "' has no taps");
        return p;
    }

    double max_delay_s() const {
        double mx = 0.0;
        for (const auto& t : taps) mx = std::max(mx, t.delay_ns);
        return mx * 1e-9;
    }

    /// Linear tap powers normalized to unit total power.
    std::vector<double> normalized_powers() const {
        std::vector<double> p(taps.size());
        double sum = 0.0;
        for (size_t i = 0; i < taps.size(); ++i) {
            p[i] = std::pow(10.0, taps[i].power_db / 10.0);
            sum += p[i];
        }
        for (auto& v : p) v /= sum;
        return p;
    }
};

/// Draw one channel realization: Rayleigh tap gains with profile powers,
/// Jakes Doppler nu_p = nu_max * cos(theta_p) with theta_p uniform on
/// [-pi, pi], both quantized to integer grid bins.
inline DdChannel build_channel_from_profile(const PowerDelayProfile& profile, double speed_mps,
                                            double fc_hz, const OtfsGrid& grid,
                                            RandomStream& rng) {
    if (speed_mps < 0.0 || fc_hz <= 0.0)
        throw ConfigError("build_channel_from_profile: bad speed or carrier frequency");
    const double nu_max = fc_hz * speed_mps / kSpeedOfLight;
    const double nt = grid.n * grid.symbol_duration();
    const auto powers = profile.normalized_powers();

    std::vector<DdPath> paths(profile.taps.size());
    for (size_t i = 0; i < profile.taps.size(); ++i) {
        const double tau = profile.taps[i].delay_ns * 1e-9;
        const int l = static_cast<int>(std::lround(tau * grid.m * grid.delta_f));
        const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
        const int k = static_cast<int>(std::lround(nu_max * std::cos(theta) * nt));
        if (l >= grid.m)
            throw ConfigError("profile delay spread exceeds the grid's delay axis "
                              "(grid too small for profile)");
        paths[i] = DdPath{rng.cgauss(powers[i]), l, k};
    }

    DdChannel ch = DdChannel::from_paths(grid, std::move(paths));
    // Delay/Doppler lengths from the continuous spread, not the realized
    // draws: ceil(tau_max * M * delta_f) and ceil(nu_max * N * T). The
    // operational alpha still covers the largest realized bin.
    const int alpha_cont = static_cast<int>(std::ceil(profile.max_delay_s() * grid.m * grid.delta_f));
    ch.alpha = std::max(ch.alpha, std::max(alpha_cont, 1));
    ch.beta = std::max(ch.beta, static_cast<int>(std::ceil(nu_max * nt)));
    if (2 * (ch.alpha - 1) >= grid.frame_size())
        throw ConfigError("channel delay length alpha exceeds MN/2 (grid too small for profile)");
    return ch;
}

// ---------------------------------------------------------------------------
// Channel operators. H = sum_p h_p Pi^{l_p} Delta^{k_p} with Pi the cyclic
// down-shift and Delta = diag{e^{j2pi q/MN}}; applied path-wise, never as a
// dense matrix.
// ---------------------------------------------------------------------------

inline std::vector<cplx> apply_channel(const std::vector<cplx>& s, const DdChannel& ch) {
    const int mn = ch.grid.frame_size();
    if (static_cast<int>(s.size()) != mn) throw ShapeError("apply_channel: length != M*N");
    std::vector<cplx> out(static_cast<size_t>(mn), cplx(0.0, 0.0));
    for (const auto& p : ch.paths) {
        const double w = 2.0 * std::numbers::pi * p.doppler_bin / mn;
        for (int i = 0; i < mn; ++i) {
            const int q = (i - p.delay_bin + mn) % mn; // sample index before the delay
            out[static_cast<size_t>(i)] +=
                p.gain * std::polar(1.0, w * q) * s[static_cast<size_t>(q)];
        }
    }
    return out;
}

/// H^H v = sum_p conj(h_p) Delta^{-k_p} Pi^{-l_p} v: circular up-shift per
/// path, then a point-wise conjugate phase ramp. The ramp is advanced by one
/// complex rotation per sample; paths without Doppler are a plain scaling.
inline std::vector<cplx> apply_channel_adjoint(const std::vector<cplx>& v, const DdChannel& ch,
                                               CmCounter* cm = nullptr) {
    const int mn = ch.grid.frame_size();
    if (static_cast<int>(v.size()) != mn) throw ShapeError("apply_channel_adjoint: length != M*N");
    std::vector<cplx> out(static_cast<size_t>(mn), cplx(0.0, 0.0));
    for (const auto& p : ch.paths) {
        const cplx hbar = std::conj(p.gain);
        if (p.doppler_bin == 0) {
            for (int q = 0; q < mn; ++q)
                out[static_cast<size_t>(q)] += hbar * v[static_cast<size_t>((q + p.delay_bin) % mn)];
            cm_add(cm, &CmCounter::adjoint, static_cast<std::uint64_t>(mn));
        } else {
            const cplx step = std::polar(1.0, -2.0 * std::numbers::pi * p.doppler_bin / mn);
            cplx ramp = hbar;
            for (int q = 0; q < mn; ++q) {
                out[static_cast<size_t>(q)] += ramp * v[static_cast<size_t>((q + p.delay_bin) % mn)];
                ramp *= step;
            }
            cm_add(cm, &CmCounter::adjoint, 2ULL * static_cast<std::uint64_t>(mn));
        }
    }
    return out;
}

/// Linear (non-cyclic) channel on a CP-extended frame. Sample q of the
/// extended buffer corresponds to core-frame time q - cp_len; Doppler phase
/// is referenced to the transmit time of each sample, so after CP removal
/// this coincides with the cyclic operator on the core frame.
inline std::vector<cplx> apply_channel_linear(const std::vector<cplx>& x_ext, const DdChannel& ch,
                                              int cp_len) {
    const int mn = ch.grid.frame_size();
    const int len = static_cast<int>(x_ext.size());
    if (len != mn + cp_len) throw ShapeError("apply_channel_linear: length != M*N + cp_len");
    std::vector<cplx> out(static_cast<size_t>(len), cplx(0.0, 0.0));
    for (const auto& p : ch.paths) {
        const double w = 2.0 * std::numbers::pi * p.doppler_bin / mn;
        for (int i = 0; i < len; ++i) {
            const int src = i - p.delay_bin;
            if (src < 0) continue; // silence before the frame
            const double u = static_cast<double>(src - cp_len); // core-frame time
            out[static_cast<size_t>(i)] += p.gain * std::polar(1.0, w * u) * x_ext[static_cast<size_t>(src)];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// AWGN
// ---------------------------------------------------------------------------

struct NoiseModel {
    double sigma_n_sq = 0.0; // per-sample complex noise power
    std::uint64_t rng_seed = 0;
};

inline void add_awgn(std::vector<cplx>& x, double sigma_n_sq, RandomStream& rng) {
    if (sigma_n_sq < 0.0) throw ConfigError("add_awgn: negative noise variance");
    if (sigma_n_sq == 0.0) return;
    for (auto& v : x) v += rng.cgauss(sigma_n_sq);
}

inline std::vector<cplx> add_awgn(const std::vector<cplx>& x, const NoiseModel& noise) {
    std::vector<cplx> out = x;
    RandomStream rng(noise.rng_seed);
    add_awgn(out, noise.sigma_n_sq, rng);
    return out;
}

} // namespace otfs
