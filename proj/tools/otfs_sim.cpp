// Command-line front end: Monte-Carlo BER sweeps, complexity reports and a
// built-in equivalence self-test for the quasi-banded LMMSE receiver.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "otfs/otfs.hpp"

namespace {

using namespace otfs;

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file '" + path + "'");
    return file;
}

int cmd_ber(const SimConfig& cfg) {
    const auto points = run_ber_sweep(cfg);
    std::ofstream file;
    std::ostream& os = open_out(cfg.out_path, file);
    write_ber_csv(points, cfg, os);
    return 0;
}

int cmd_complexity(const std::string& profile_name, std::vector<int> block_sizes, int m_max,
                   double speed_kmh, double fc_hz, double delta_f, const std::string& out_path) {
    const PowerDelayProfile profile = (profile_name == "eva" || profile_name == "evb" ||
                                       profile_name == "flat")
                                          ? PowerDelayProfile::builtin(profile_name)
                                          : PowerDelayProfile::load(profile_name);
    std::vector<ComplexityRow> rows;
    for (int n : block_sizes) {
        const auto part = run_complexity_sweep(profile, n, m_max, speed_kmh / 3.6, fc_hz, delta_f);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    std::ofstream file;
    std::ostream& os = open_out(out_path, file);
    write_complexity_csv(rows, os);

    for (int n : block_sizes) {
        double best = 0;
        for (const auto& r : rows)
            if (r.n == n && r.scheme == Waveform::Otfs) best = std::max(best, r.ratio);
        std::cerr << "profile=" << profile_name << " N=" << n
                  << ": max direct/proposed ratio = " << best << "\n";
    }
    return 0;
}

/// Fast-vs-dense equivalence sweep over random instances.
int cmd_selftest(int instances, std::uint64_t seed) {
    const std::pair<int, int> grids[] = {{4, 4}, {8, 8}, {16, 8}};
    const double nsrs[] = {1.0, 0.1, 0.01};
    RandomStream rng(seed);
    double worst = 0;
    for (int i = 0; i < instances; ++i) {
        const auto [m, n] = grids[i % 3];
        OtfsGrid g(m, n, 15e3);
        const double nsr = nsrs[i % 3];
        const int p = 1 + static_cast<int>(rng.bits() % 5);
        std::vector<DdPath> paths;
        for (int j = 0; j < p; ++j)
            paths.push_back(DdPath{rng.cgauss(), static_cast<int>(rng.bits() % static_cast<std::uint64_t>(m)),
                                   static_cast<int>(rng.bits() % static_cast<std::uint64_t>(n)) - n / 2});
        const DdChannel ch = DdChannel::from_paths(g, paths);
        std::vector<cplx> rx(static_cast<size_t>(g.frame_size()));
        for (auto& v : rx) v = rng.cgauss();
        const Waveform wf = (i % 2) ? Waveform::Ofdm : Waveform::Otfs;

        const LmmseFastReceiver receiver(ch, nsr, wf);
        const DdFrame fast = receiver.equalize(rx);
        const DdFrame dense = oracle::dense_lmmse(rx, ch, nsr, wf);
        double num = 0, den = 0;
        for (size_t k = 0; k < fast.data.size(); ++k) {
            num += std::norm(fast.data[k] - dense.data[k]);
            den += std::norm(dense.data[k]);
        }
        worst = std::max(worst, std::sqrt(num / den));
    }
    std::cout << "selftest: " << instances << " instances, worst relative deviation = " << worst
              << "\n";
    if (worst > 1e-8) {
        std::cout << "selftest: FAIL (tolerance 1e-8)\n";
        return 1;
    }
    std::cout << "selftest: PASS\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"delay-Doppler / OFDM modem simulator with a quasi-banded LMMSE receiver"};
    app.require_subcommand(1);
    app.set_config("--config")->description("key=value config file; command-line flags override");

    SimConfig cfg;
    std::string scheme = "otfs", receiver = "fast";
    bool full_scale = false;

    auto* ber = app.add_subcommand("ber", "run a Monte-Carlo BER sweep and emit CSV");
    ber->add_option("--m", cfg.m, "subcarriers (power of two)");
    ber->add_option("--n", cfg.n, "time slots (power of two)");
    ber->add_option("--delta-f", cfg.delta_f, "subcarrier spacing [Hz]");
    ber->add_option("--scheme", scheme, "otfs | ofdm");
    ber->add_option("--receiver", receiver, "fast | dense-oracle");
    ber->add_option("--qam", cfg.qam_order, "constellation order: 4, 16, 64");
    ber->add_option("--profile", cfg.profile, "built-in profile (eva, evb, flat) or .pdp path");
    ber->add_option("--speed-kmh", cfg.speed_kmh, "vehicular speed [km/h]");
    double fc_ghz = 4.0;
    ber->add_option("--fc-ghz", fc_ghz, "carrier frequency [GHz]");
    ber->add_option("--snr-db", cfg.snr_db, "SNR points [dB], Es/N0 per QAM symbol");
    ber->add_option("--frames", cfg.frames, "frames per SNR point");
    ber->add_option("--seed", cfg.seed, "RNG seed");
    ber->add_option("--threads", cfg.threads, "worker threads (result independent of count)");
    ber->add_flag("--cp", cfg.use_cp, "linear channel on a CP-extended frame");
    ber->add_flag("--full-scale", full_scale, "use the 512x128 frame (fast receiver only)");
    ber->add_option("--out", cfg.out_path, "output CSV path (default stdout)");

    std::string cx_profile = "eva", cx_out;
    std::vector<int> cx_blocks;
    int cx_m_max = 4096;
    double cx_speed = 500.0, cx_fc_ghz = 4.0, cx_df = 15e3;
    auto* cx = app.add_subcommand("complexity", "closed-form receiver cost sweep, CSV output");
    cx->add_option("--profile", cx_profile, "built-in profile or .pdp path");
    cx->add_option("--n", cx_blocks, "block length(s) N; default 16 and 128");
    cx->add_option("--m-max", cx_m_max, "largest subcarrier count in the sweep");
    cx->add_option("--speed-kmh", cx_speed, "vehicular speed [km/h]");
    cx->add_option("--fc-ghz", cx_fc_ghz, "carrier frequency [GHz]");
    cx->add_option("--delta-f", cx_df, "subcarrier spacing [Hz]");
    cx->add_option("--out", cx_out, "output CSV path (default stdout)");

    int st_instances = 60;
    std::uint64_t st_seed = 1;
    auto* st = app.add_subcommand("selftest", "fast-vs-dense receiver equivalence sweep");
    st->add_option("--instances", st_instances, "number of random instances");
    st->add_option("--seed", st_seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ber->parsed()) {
            cfg.fc_hz = fc_ghz * 1e9;
            if (full_scale) {
                cfg.m = 512;
                cfg.n = 128;
            }
            if (scheme == "otfs")
                cfg.scheme = Waveform::Otfs;
            else if (scheme == "ofdm")
                cfg.scheme = Waveform::Ofdm;
            else
                throw ConfigError("--scheme must be otfs or ofdm");
            if (receiver == "fast")
                cfg.receiver = ReceiverKind::Fast;
            else if (receiver == "dense-oracle")
                cfg.receiver = ReceiverKind::DenseOracle;
            else
                throw ConfigError("--receiver must be fast or dense-oracle");
            cfg.validate();
            return cmd_ber(cfg);
        }
        if (cx->parsed()) {
            if (cx_blocks.empty()) cx_blocks = {16, 128};
            return cmd_complexity(cx_profile, cx_blocks, cx_m_max, cx_speed, cx_fc_ghz * 1e9, cx_df,
                                  cx_out);
        }
        return cmd_selftest(st_instances, st_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
