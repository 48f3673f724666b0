#pragma once

#include <atomic>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "otfs/channel.hpp"
#include "otfs/complexity.hpp"
#include "otfs/equalizer.hpp"
#include "otfs/grid.hpp"
#include "otfs/modem.hpp"
#include "otfs/oracle.hpp"
#include "otfs/qam.hpp"
#include "otfs/random.hpp"

namespace otfs {

enum class ReceiverKind { Fast, DenseOracle };

inline const char* waveform_name(Waveform wf) { return wf == Waveform::Otfs ? "otfs" : "ofdm"; }
inline const char* receiver_name(ReceiverKind r) {
    return r == ReceiverKind::Fast ? "fast" : "dense-oracle";
}

/// Monte-Carlo link simulation configuration. Defaults are the desk-scale
/// grid; the full 512 x 128 frame works with the fast receiver only.
struct SimConfig {
    int m = 64;
    int n = 32;
    double delta_f = 15e3;
    Waveform scheme = Waveform::Otfs;
    ReceiverKind receiver = ReceiverKind::Fast;
    int qam_order = 4;
    std::string profile = "eva"; // built-in name or path to a .pdp file
    double speed_kmh = 500.0;
    double fc_hz = 4e9;
    std::vector<double> snr_db = {0, 5, 10, 15, 20};
    int frames = 10;
    std::uint64_t seed = 1;
    int threads = 1;
    bool use_cp = false; // apply the linear channel on a CP-extended frame
    std::string out_path;

    OtfsGrid grid() const { return OtfsGrid(m, n, delta_f); }
    double speed_mps() const { return speed_kmh / 3.6; }

    PowerDelayProfile resolve_profile() const {
        if (profile == "eva" || profile == "evb" || profile == "flat")
            return PowerDelayProfile::builtin(profile);
        return PowerDelayProfile::load(profile);
    }

    void validate() const {
        if (frames < 1) throw ConfigError("config: frames must be >= 1");
        if (snr_db.empty()) throw ConfigError("config: snr_db list must not be empty");
        if (threads < 1) throw ConfigError("config: threads must be >= 1");
        (void)grid();
        (void)QamConstellation::make(qam_order);
    }
};

struct BerPoint {
    double snr_db = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    double ber = 0.0;
    int frames = 0;
};

namespace detail {

struct FrameResult {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
};

/// One frame of the chain: bits -> QAM -> modulate -> channel -> AWGN ->
/// equalize -> hard demap -> error count. All randomness is derived from
/// (seed, snr index, frame index), so results are independent of scheduling.
inline FrameResult run_frame(const SimConfig& cfg, const QamConstellation& constellation,
                             const PowerDelayProfile& profile, int snr_idx, int frame_idx) {
    const OtfsGrid grid = cfg.grid();
    const int mn = grid.frame_size();
    const int bps = constellation.bits_per_symbol();
    const double sigma_n_sq = std::pow(10.0, -cfg.snr_db[static_cast<size_t>(snr_idx)] / 10.0);
    const double nsr = std::max(sigma_n_sq, kNsrFloor); // sigma_d^2 = 1 by construction

    RandomStream bits_rng = RandomStream::derive(cfg.seed, {0xB1757ULL, static_cast<std::uint64_t>(snr_idx), static_cast<std::uint64_t>(frame_idx)});
    RandomStream noise_rng = RandomStream::derive(cfg.seed, {0x40153ULL, static_cast<std::uint64_t>(snr_idx), static_cast<std::uint64_t>(frame_idx)});

    std::vector<std::uint8_t> bits(static_cast<size_t>(mn) * static_cast<size_t>(bps));
    for (auto& b : bits) b = static_cast<std::uint8_t>(bits_rng.bits() >> 63);

    const DdFrame tx_frame(grid, qam_map(bits, constellation));
    const std::vector<cplx> s = modulate(tx_frame, cfg.scheme);

    // Bounded retries: a numerically singular factorization (degenerate
    // channel draw) discards the channel and draws a fresh one.
    for (int attempt = 0;; ++attempt) {
        RandomStream chan_rng = RandomStream::derive(
            cfg.seed, {0xC4A2ULL, static_cast<std::uint64_t>(snr_idx), static_cast<std::uint64_t>(frame_idx), static_cast<std::uint64_t>(attempt)});
        const DdChannel ch =
            build_channel_from_profile(profile, cfg.speed_mps(), cfg.fc_hz, grid, chan_rng);

        std::vector<cplx> r;
        if (cfg.use_cp) {
            const CpConfig cp{ch.alpha - 1};
            std::vector<cplx> ext = apply_channel_linear(add_cp(s, cp), ch, cp.cp_len);
            RandomStream nr = noise_rng; // reuse the same noise stream per attempt
            add_awgn(ext, sigma_n_sq, nr);
            r = remove_cp(ext, cp);
        } else {
            r = apply_channel(s, ch);
            RandomStream nr = noise_rng;
            add_awgn(r, sigma_n_sq, nr);
        }

        DdFrame est;
        try {
            if (cfg.receiver == ReceiverKind::Fast) {
                const LmmseFastReceiver rx(ch, nsr, cfg.scheme);
                est = rx.equalize(r);
            } else {
                est = oracle::dense_lmmse(r, ch, nsr, cfg.scheme);
            }
        } catch (const SingularError&) {
            if (attempt >= 3) throw;
            continue;
        }

        const std::vector<std::uint8_t> rx_bits = qam_demap_hard(est.data, constellation);
        FrameResult res;
        res.bits = bits.size();
        for (size_t i = 0; i < bits.size(); ++i)
            if (bits[i] != rx_bits[i]) ++res.bit_errors;
        return res;
    }
}

} // namespace detail

/// Run the configured BER sweep. Frames are independent given their derived
/// RNG streams, so they may be spread over a worker pool; per-frame integer
/// results are merged by summation and the output is identical for any
/// thread count.
inline std::vector<BerPoint> run_ber_sweep(const SimConfig& cfg) {
    cfg.validate();
    const QamConstellation constellation = QamConstellation::make(cfg.qam_order);
    const PowerDelayProfile profile = cfg.resolve_profile();

    std::vector<BerPoint> points(cfg.snr_db.size());
    for (size_t ip = 0; ip < cfg.snr_db.size(); ++ip) {
        std::vector<detail::FrameResult> results(static_cast<size_t>(cfg.frames));
        const int nthreads = std::min(cfg.threads, cfg.frames);
        if (nthreads <= 1) {
            for (int f = 0; f < cfg.frames; ++f)
                results[static_cast<size_t>(f)] =
                    detail::run_frame(cfg, constellation, profile, static_cast<int>(ip), f);
        } else {
            std::atomic<int> next{0};
            std::atomic<bool> failed{false};
            std::exception_ptr first_error = nullptr;
            std::mutex error_mutex;
            std::vector<std::thread> pool;
            pool.reserve(static_cast<size_t>(nthreads));
            for (int w = 0; w < nthreads; ++w) {
                pool.emplace_back([&]() {
                    try {
                        for (int f = next.fetch_add(1); f < cfg.frames && !failed;
                             f = next.fetch_add(1)) {
                            results[static_cast<size_t>(f)] = detail::run_frame(
                                cfg, constellation, profile, static_cast<int>(ip), f);
                        }
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        failed = true;
                    }
                });
            }
            for (auto& t : pool) t.join();
            if (first_error) std::rethrow_exception(first_error);
        }

        BerPoint pt;
        pt.snr_db = cfg.snr_db[ip];
        pt.frames = cfg.frames;
        for (const auto& r : results) {
            pt.bit_errors += r.bit_errors;
            pt.bits_total += r.bits;
        }
        pt.ber = pt.bits_total ? static_cast<double>(pt.bit_errors) / static_cast<double>(pt.bits_total)
                               : 0.0;
        points[ip] = pt;
    }
    return points;
}

/// CSV with a reproducible header: config echo, then one row per SNR point.
inline void write_ber_csv(const std::vector<BerPoint>& points, const SimConfig& cfg,
                          std::ostream& os) {
    char buf[256];
    os << "# ber sweep\n";
    os << "# snr convention: Es/N0 per QAM symbol (sigma_d^2/sigma_n^2); CP energy excluded\n";
    std::snprintf(buf, sizeof(buf),
                  "# m=%d n=%d delta_f=%.10g scheme=%s receiver=%s qam=%d profile=%s "
                  "speed_kmh=%.10g fc_hz=%.10g frames=%d seed=%llu cp=%d\n",
                  cfg.m, cfg.n, cfg.delta_f, waveform_name(cfg.scheme), receiver_name(cfg.receiver),
                  cfg.qam_order, cfg.profile.c_str(), cfg.speed_kmh, cfg.fc_hz, cfg.frames,
                  static_cast<unsigned long long>(cfg.seed), cfg.use_cp ? 1 : 0);
    os << buf;
    os << "snr_db,ber,bit_errors,bits_total,frames,receiver,scheme\n";
    for (const auto& p : points) {
        std::snprintf(buf, sizeof(buf), "%.10g,%.10e,%llu,%llu,%d,%s,%s\n", p.snr_db, p.ber,
                      static_cast<unsigned long long>(p.bit_errors),
                      static_cast<unsigned long long>(p.bits_total), p.frames,
                      receiver_name(cfg.receiver), waveform_name(cfg.scheme));
        os << buf;
    }
}

// ---------------------------------------------------------------------------
// Complexity sweep (closed forms over a subcarrier sweep)
// ---------------------------------------------------------------------------

struct ComplexityRow {
    int m = 0;
    int n = 0;
    int alpha = 1;
    int beta = 0;
    int p = 1;
    Waveform scheme = Waveform::Otfs;
    double direct_cm = 0.0;
    double proposed_cm = 0.0;
    double ratio = 0.0;
};

/// Evaluate direct vs proposed receiver cost for M = 2, 4, ..., m_max at a
/// fixed block length N, with alpha/beta derived from the profile geometry.
inline std::vector<ComplexityRow> run_complexity_sweep(const PowerDelayProfile& profile, int n,
                                                       int m_max, double speed_mps, double fc_hz,
                                                       double delta_f) {
    if (!is_pow2(n) || m_max < 2) throw ConfigError("complexity sweep: bad N or m_max");
    const double nu_max = fc_hz * speed_mps / kSpeedOfLight;
    const double tau_max = profile.max_delay_s();
    std::vector<ComplexityRow> rows;
    for (int m = 2; m <= m_max; m *= 2) {
        CmParams prm;
        prm.m = m;
        prm.n = n;
        prm.alpha = std::max(1, static_cast<int>(std::ceil(tau_max * m * delta_f)));
        prm.beta = static_cast<int>(std::ceil(nu_max * n / delta_f));
        prm.p = static_cast<int>(profile.taps.size());
        for (Waveform wf : {Waveform::Otfs, Waveform::Ofdm}) {
            ComplexityRow row;
            row.m = m;
            row.n = n;
            row.alpha = prm.alpha;
            row.beta = prm.beta;
            row.p = prm.p;
            row.scheme = wf;
            row.direct_cm = formula_direct(m, n, wf);
            row.proposed_cm = formula_proposed(prm, wf);
            row.ratio = row.direct_cm / row.proposed_cm;
            rows.push_back(row);
        }
    }
    return rows;
}

inline void write_complexity_csv(const std::vector<ComplexityRow>& rows, std::ostream& os) {
    os << "m,n,alpha,beta,p,scheme,direct_cm,proposed_cm,ratio\n";
    for (const auto& r : rows) {
        char buf[200];
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%d,%s,%.8e,%.8e,%.6g\n", r.m, r.n, r.alpha,
                      r.beta, r.p, waveform_name(r.scheme), r.direct_cm, r.proposed_cm, r.ratio);
        os << buf;
    }
}

} // namespace otfs
