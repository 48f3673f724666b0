#include <catch2/catch_amalgamated.hpp>

#include "otfs/modem.hpp"
#include "otfs/oracle.hpp"
#include "otfs/random.hpp"

using namespace otfs;

namespace {

DdFrame random_frame(const OtfsGrid& g, std::uint64_t seed) {
    RandomStream rng(seed);
    DdFrame f(g);
    for (auto& v : f.data) v = rng.cgauss();
    return f;
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

TEST_CASE("otfs modulation of zeros is zeros, N=1 is a reshape") {
    OtfsGrid g(8, 4, 15e3);
    DdFrame z(g);
    for (const auto& v : otfs_modulate(z)) CHECK(v == cplx(0, 0));

    OtfsGrid g1(8, 1, 15e3);
    const DdFrame f = random_frame(g1, 3);
    const auto s = otfs_modulate(f);
    for (size_t i = 0; i < s.size(); ++i) CHECK(s[i] == f.data[i]);
}

TEST_CASE("otfs modulate matches the dense Kronecker operator") {
    OtfsGrid g(4, 4, 15e3);
    const DdFrame f = random_frame(g, 17);
    const auto a = oracle::dense_modulation_matrix(g, Waveform::Otfs);
    const auto want = oracle::from_eigen(a * oracle::to_eigen(f.data));
    CHECK(rel_err(otfs_modulate(f), want) < 1e-12);
}

TEST_CASE("otfs demodulation is the adjoint and inverts modulation") {
    OtfsGrid g(8, 8, 15e3);
    const DdFrame f = random_frame(g, 5);
    const auto rt = otfs_demodulate_mf(otfs_modulate(f), g);
    CHECK(rel_err(rt.data, f.data) < 1e-12);

    OtfsGrid g4(4, 4, 15e3);
    RandomStream rng(7);
    std::vector<cplx> r(static_cast<size_t>(g4.frame_size()));
    for (auto& v : r) v = rng.cgauss();
    const auto a = oracle::dense_modulation_matrix(g4, Waveform::Otfs);
    const auto want = oracle::from_eigen(a.adjoint() * oracle::to_eigen(r));
    CHECK(rel_err(otfs_demodulate_mf(r, g4).data, want) < 1e-12);
}

TEST_CASE("impulse demodulates to a single constant row") {
    OtfsGrid g(4, 4, 15e3);
    std::vector<cplx> r(static_cast<size_t>(g.frame_size()), cplx(0, 0));
    r[0] = cplx(1, 0);
    const DdFrame d = otfs_demodulate_mf(r, g);
    const double inv_sqrt_n = 1.0 / 2.0;
    for (int k = 0; k < g.n; ++k) {
        CHECK(std::abs(d.at(0, k) - cplx(inv_sqrt_n, 0)) < 1e-14);
        for (int l = 1; l < g.m; ++l) CHECK(std::abs(d.at(l, k)) < 1e-14);
    }
}

TEST_CASE("ofdm modulate/demodulate round-trip and dense oracle") {
    OtfsGrid g(8, 4, 15e3);
    const DdFrame f = random_frame(g, 21);
    const auto rt = ofdm_demodulate(ofdm_modulate(f), g);
    CHECK(rel_err(rt.data, f.data) < 1e-12);

    OtfsGrid g4(4, 4, 15e3);
    const DdFrame f4 = random_frame(g4, 23);
    const auto a = oracle::dense_modulation_matrix(g4, Waveform::Ofdm);
    const auto want = oracle::from_eigen(a * oracle::to_eigen(f4.data));
    CHECK(rel_err(ofdm_modulate(f4), want) < 1e-12);
}

TEST_CASE("single-carrier impulse column gives a constant-modulus time column") {
    OtfsGrid g(8, 2, 15e3);
    DdFrame f(g);
    f.at(3, 0) = cplx(1, 0);
    const auto s = ofdm_modulate(f);
    for (int l = 0; l < g.m; ++l)
        CHECK(std::abs(std::abs(s[static_cast<size_t>(l)]) - 1.0 / std::sqrt(8.0)) < 1e-12);
    for (int l = 0; l < g.m; ++l) CHECK(std::abs(s[static_cast<size_t>(g.m + l)]) < 1e-14);
}

TEST_CASE("modulation matrices are unitary and preserve energy") {
    for (Waveform wf : {Waveform::Otfs, Waveform::Ofdm}) {
        for (auto [m, n] : {std::pair{4, 4}, std::pair{8, 8}, std::pair{16, 4}}) {
            OtfsGrid g(m, n, 15e3);
            const auto a = oracle::dense_modulation_matrix(g, wf);
            const auto err = (a * a.adjoint() - oracle::Mat::Identity(g.frame_size(), g.frame_size()))
                                 .cwiseAbs()
                                 .maxCoeff();
            CHECK(err <= 1e-12);
        }
    }
    OtfsGrid g(16, 8, 15e3);
    const DdFrame f = random_frame(g, 9);
    for (Waveform wf : {Waveform::Otfs, Waveform::Ofdm}) {
        const auto s = modulate(f, wf);
        double es = 0, ed = 0;
        for (const auto& v : s) es += std::norm(v);
        for (const auto& v : f.data) ed += std::norm(v);
        CHECK(std::abs(es - ed) / ed < 1e-10);
    }
}

TEST_CASE("cyclic prefix add/remove") {
    std::vector<cplx> s = {cplx(1, 0), cplx(2, 0), cplx(3, 0), cplx(4, 0)};
    CHECK(add_cp(s, {0}) == s);
    const auto ext = add_cp(s, {2});
    const std::vector<cplx> want = {cplx(3, 0), cplx(4, 0), cplx(1, 0),
                                    cplx(2, 0), cplx(3, 0), cplx(4, 0)};
    CHECK(ext == want);
    CHECK(remove_cp(ext, {2}) == s);
    CHECK_THROWS_AS(add_cp(s, {5}), ConfigError);
}

TEST_CASE("CP turns the linear channel into the cyclic one") {
    OtfsGrid g(4, 4, 15e3);
    RandomStream rng(31);
    const DdChannel ch = DdChannel::from_paths(
        g, {DdPath{rng.cgauss(), 0, 1}, DdPath{rng.cgauss(), 2, -1}, DdPath{rng.cgauss(), 1, 2}});
    const DdFrame f = random_frame(g, 33);
    const auto s = otfs_modulate(f);

    const CpConfig cp{ch.alpha - 1};
    const auto lin = apply_channel_linear(add_cp(s, cp), ch, cp.cp_len);
    const auto via_cp = remove_cp(lin, cp);
    const auto cyclic = apply_channel(s, ch);
    CHECK(rel_err(via_cp, cyclic) < 1e-12);
}
