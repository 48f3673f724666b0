#include <catch2/catch_amalgamated.hpp>

#include "otfs/oracle.hpp"

using namespace otfs;
using oracle::Mat;
using oracle::Vec;

TEST_CASE("dense channel matrix basics") {
    OtfsGrid g(4, 1, 15e3);

    const auto ident =
        oracle::dense_channel_matrix(DdChannel::from_paths(g, {DdPath{cplx(1, 0), 0, 0}}));
    CHECK((ident - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

    // Unit delay: permutation shifting down by one.
    const auto shift =
        oracle::dense_channel_matrix(DdChannel::from_paths(g, {DdPath{cplx(1, 0), 1, 0}}));
    Mat want = Mat::Zero(4, 4);
    want(1, 0) = want(2, 1) = want(3, 2) = want(0, 3) = cplx(1, 0);
    CHECK((shift - want).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dense Doppler matrix on a 4-sample frame is diag{1, j, -1, -j}") {
    OtfsGrid g(2, 2, 15e3);
    const auto h =
        oracle::dense_channel_matrix(DdChannel::from_paths(g, {DdPath{cplx(1, 0), 0, 1}}));
    const cplx want[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == j)
                CHECK(std::abs(h(i, i) - want[i]) < 1e-15);
            else
                CHECK(h(i, j) == cplx(0, 0));
        }
    }
}

TEST_CASE("dense LMMSE recovers data through an identity channel at vanishing noise") {
    OtfsGrid g(4, 4, 15e3);
    const DdChannel ch = DdChannel::from_paths(g, {DdPath{cplx(1, 0), 0, 0}});
    RandomStream rng(3);
    DdFrame d(g);
    for (auto& v : d.data) v = rng.cgauss();
    const auto rx = otfs_modulate(d);
    const DdFrame est = oracle::dense_lmmse(rx, ch, 1e-12, Waveform::Otfs);
    for (size_t i = 0; i < d.data.size(); ++i) CHECK(std::abs(est.data[i] - d.data[i]) < 1e-6);
}

TEST_CASE("scalar dense LMMSE closed form at MN = 1") {
    OtfsGrid g(1, 1, 15e3);
    const cplx h(0.3, -1.1);
    const DdChannel ch = DdChannel::from_paths(g, {DdPath{h, 0, 0}});
    const std::vector<cplx> rx = {cplx(0.9, 0.4)};
    const DdFrame est = oracle::dense_lmmse(rx, ch, 0.5, Waveform::Otfs);
    const cplx want = std::conj(h) * rx[0] / (std::norm(h) + 0.5);
    CHECK(std::abs(est.data[0] - want) < 1e-14);
}

TEST_CASE("dense solve is self-consistent and the system matrix Hermitian") {
    OtfsGrid g(8, 8, 15e3);
    RandomStream rng(7);
    std::vector<DdPath> paths;
    for (int i = 0; i < 4; ++i)
        paths.push_back(DdPath{rng.cgauss(), static_cast<int>(rng.bits() % 8),
                               static_cast<int>(rng.bits() % 8) - 4});
    const DdChannel ch = DdChannel::from_paths(g, paths);
    const double nsr = 0.1;
    const int mn = g.frame_size();

    const Mat a = oracle::dense_modulation_matrix(g, Waveform::Otfs);
    const Mat ga = oracle::dense_channel_matrix(ch) * a;
    Mat phi = ga * ga.adjoint();
    phi += nsr * Mat::Identity(mn, mn);
    CHECK((phi - phi.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);

    RandomStream rng2(8);
    Vec rx(mn);
    for (int i = 0; i < mn; ++i) rx(i) = rng2.cgauss();
    const Vec y = phi.partialPivLu().solve(rx);
    CHECK((phi * y - rx).norm() / rx.norm() <= 1e-10);
}

TEST_CASE("size guards are hard errors") {
    OtfsGrid g_chan(128, 64, 15e3); // MN = 8192 > 4096
    const DdChannel big = DdChannel::from_paths(g_chan, {DdPath{cplx(1, 0), 0, 0}});
    CHECK_THROWS_AS(oracle::dense_channel_matrix(big), ResourceError);

    OtfsGrid g_lmmse(64, 32, 15e3); // MN = 2048 > 1024
    const DdChannel ch = DdChannel::from_paths(g_lmmse, {DdPath{cplx(1, 0), 0, 0}});
    const std::vector<cplx> rx(static_cast<size_t>(g_lmmse.frame_size()));
    CHECK_THROWS_AS(oracle::dense_lmmse(rx, ch, 0.1, Waveform::Otfs), ResourceError);
}
