#include <catch2/catch_amalgamated.hpp>

#include "otfs/channel.hpp"
#include "otfs/oracle.hpp"

using namespace otfs;

namespace {

std::vector<cplx> random_vec(int n, std::uint64_t seed) {
    RandomStream rng(seed);
    std::vector<cplx> v(static_cast<size_t>(n));
    for (auto& x : v) x = rng.cgauss();
    return v;
}

DdChannel random_channel(const OtfsGrid& g, int p, std::uint64_t seed, bool distinct = false) {
    RandomStream rng(seed);
    std::vector<DdPath> paths;
    for (int i = 0; i < p; ++i) {
        DdPath path;
        path.gain = rng.cgauss();
        for (;;) {
            path.delay_bin = static_cast<int>(rng.bits() % static_cast<std::uint64_t>(g.m));
            path.doppler_bin = static_cast<int>(rng.bits() % static_cast<std::uint64_t>(g.n)) -
                               (g.n > 1 ? g.n / 2 : 0);
            if (!distinct) break;
            bool clash = false;
            for (const auto& q : paths)
                if (q.delay_bin == path.delay_bin && q.doppler_bin == path.doppler_bin) clash = true;
            if (!clash) break;
        }
        paths.push_back(path);
    }
    return DdChannel::from_paths(g, paths);
}

double rel_err(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double num = 0, den = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

} // namespace

TEST_CASE("trivial single-path channels") {
    OtfsGrid g(4, 1, 15e3);
    const auto s = random_vec(4, 1);

    const DdChannel ident = DdChannel::from_paths(g, {DdPath{cplx(1, 0), 0, 0}});
    CHECK(rel_err(apply_channel(s, ident), s) == 0.0);
    CHECK(rel_err(apply_channel_adjoint(s, ident), s) == 0.0);

    const DdChannel delay = DdChannel::from_paths(g, {DdPath{cplx(1, 0), 1, 0}});
    const auto y = apply_channel(s, delay);
    CHECK(y[0] == s[3]);
    CHECK(y[1] == s[0]);
    CHECK(y[2] == s[1]);
    CHECK(y[3] == s[2]);
}

TEST_CASE("operator application matches the dense matrix") {
    OtfsGrid g(4, 4, 15e3);
    for (int p : {2, 3}) {
        const DdChannel ch = random_channel(g, p, 100 + static_cast<std::uint64_t>(p));
        const auto h = oracle::dense_channel_matrix(ch);
        const auto x = random_vec(g.frame_size(), 7);
        CHECK(rel_err(apply_channel(x, ch), oracle::from_eigen(h * oracle::to_eigen(x))) < 1e-12);
        CHECK(rel_err(apply_channel_adjoint(x, ch),
                      oracle::from_eigen(h.adjoint() * oracle::to_eigen(x))) < 1e-12);
    }
}

TEST_CASE("adjoint identity <Hx, y> == <x, H^H y>") {
    OtfsGrid g(8, 8, 15e3);
    const DdChannel ch = random_channel(g, 4, 55);
    const auto x = random_vec(g.frame_size(), 56);
    const auto y = random_vec(g.frame_size(), 57);
    const auto hx = apply_channel(x, ch);
    const auto hy = apply_channel_adjoint(y, ch);
    cplx lhs(0, 0), rhs(0, 0);
    for (int i = 0; i < g.frame_size(); ++i) {
        lhs += hx[static_cast<size_t>(i)] * std::conj(y[static_cast<size_t>(i)]);
        rhs += x[static_cast<size_t>(i)] * std::conj(hy[static_cast<size_t>(i)]);
    }
    CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-10);
}

TEST_CASE("H has at most P nonzeros per row for distinct path bins") {
    OtfsGrid g(8, 8, 15e3);
    const DdChannel ch = random_channel(g, 5, 60, /*distinct=*/true);
    const auto h = oracle::dense_channel_matrix(ch);
    for (int i = 0; i < g.frame_size(); ++i) {
        int nz = 0;
        for (int j = 0; j < g.frame_size(); ++j)
            if (std::abs(h(i, j)) > 0) ++nz;
        CHECK(nz <= ch.path_count());
    }
}

TEST_CASE("channel geometry for the vehicular-A profile at full scale") {
    OtfsGrid g(512, 128, 15e3);
    RandomStream rng(2024);
    const auto prof = PowerDelayProfile::builtin("eva");
    const DdChannel ch = build_channel_from_profile(prof, 500.0 / 3.6, 4e9, g, rng);
    CHECK(ch.alpha == 20);
    CHECK(ch.beta == 16);
    CHECK(ch.path_count() == 9);
    for (const auto& p : ch.paths) CHECK(std::abs(p.doppler_bin) <= 16);
}

TEST_CASE("zero speed collapses every Doppler bin") {
    OtfsGrid g(64, 32, 15e3);
    RandomStream rng(3);
    const DdChannel ch =
        build_channel_from_profile(PowerDelayProfile::builtin("eva"), 0.0, 4e9, g, rng);
    for (const auto& p : ch.paths) CHECK(p.doppler_bin == 0);
    CHECK(ch.beta == 0);
}

TEST_CASE("profile powers normalize to unit total") {
    for (const char* name : {"eva", "evb"}) {
        const auto prof = PowerDelayProfile::builtin(name);
        const auto p = prof.normalized_powers();
        double sum = 0;
        for (double v : p) sum += v;
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("bundled profile files match the built-in tables") {
    for (const char* name : {"eva", "evb"}) {
        const auto builtin = PowerDelayProfile::builtin(name);
        const auto file = PowerDelayProfile::load(std::string(OTFS_DATA_DIR) + "/" + name + ".pdp");
        REQUIRE(file.taps.size() == builtin.taps.size());
        for (size_t i = 0; i < file.taps.size(); ++i) {
            CHECK(file.taps[i].delay_ns == builtin.taps[i].delay_ns);
            CHECK(file.taps[i].power_db == builtin.taps[i].power_db);
        }
    }
    CHECK_THROWS_AS(PowerDelayProfile::load("/nonexistent.pdp"), ConfigError);
    CHECK_THROWS_AS(PowerDelayProfile::builtin("epa"), ConfigError);
}

TEST_CASE("a profile too wide for the grid is rejected") {
    OtfsGrid g(64, 1, 40e3);
    RandomStream rng(5);
    CHECK_THROWS_AS(
        build_channel_from_profile(PowerDelayProfile::builtin("evb"), 500.0 / 3.6, 4e9, g, rng),
        ConfigError);
}

TEST_CASE("awgn basics: zero variance, determinism, sample variance") {
    const auto x = random_vec(64, 8);
    NoiseModel off{0.0, 42};
    CHECK(add_awgn(x, off) == x);

    NoiseModel nm{0.5, 42};
    CHECK(add_awgn(x, nm) == add_awgn(x, nm)); // same seed, bit-identical

    RandomStream rng(12345);
    const int n = 1'000'000;
    double acc = 0;
    for (int i = 0; i < n; ++i) acc += std::norm(rng.cgauss(0.5));
    CHECK(std::abs(acc / n - 0.5) < 0.005);
}
