#include "sel/noise.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstring>

using namespace sel;
using doctest::Approx;
using Kind = FourierMode::Kind;

TEST_CASE("real Fourier basis order")
{
    const SpectralGrid grid(16);
    const auto basis = real_fourier_basis(grid);
    const int box = 2 * (16 / 3) + 1;
    CHECK(basis.size() == static_cast<std::size_t>(box * box));

    REQUIRE(basis.size() >= 5);
    CHECK(basis[0] == FourierMode{Kind::constant, 0, 0});
    CHECK(basis[1] == FourierMode{Kind::cosine, 0, 1});
    CHECK(basis[2] == FourierMode{Kind::sine, 0, 1});
    CHECK(basis[3] == FourierMode{Kind::cosine, 1, 0});
    CHECK(basis[4] == FourierMode{Kind::sine, 1, 0});
    // |k|^2 = 2 next: (1,-1) precedes (1,1)
    CHECK(basis[5] == FourierMode{Kind::cosine, 1, -1});
    CHECK(basis[7] == FourierMode{Kind::cosine, 1, 1});

    for (std::size_t i = 1; i + 1 < basis.size(); ++i) {
        CHECK(basis[i].k_sq() <= basis[i + 1].k_sq());
    }
}

TEST_CASE("basis functions are orthonormal")
{
    const SpectralGrid grid(16);
    const auto basis = real_fourier_basis(grid);
    std::vector<ScalarField> f;
    for (std::size_t i = 0; i < 12; ++i) {
        f.push_back(mode_field(basis[i], grid));
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (std::size_t j = 0; j < f.size(); ++j) {
            const double g = inner(f[i].channel(0), f[j].channel(0), grid);
            CHECK(g == Approx(i == j ? 1.0 : 0.0).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("multiplier")
{
    CHECK(psi_multiplier(0, 2.0, 3.0) == Approx(2.0));
    CHECK(psi_multiplier(1, 1.0, 2.0) == Approx(1.0 / (1.0 + kTwoPi * kTwoPi)));
    CHECK(psi_multiplier(5, 0.5, 0.0) == Approx(0.5));
}

TEST_CASE("constant-mode model")
{
    const SpectralGrid grid(16);
    const NoiseModel m = build_noise_model(1, 3.0, 0.7, grid, 1);
    CHECK(m.c_psi == 0.0);
    for (double x : m.f_psi.values()) {
        CHECK(x == Approx(-0.49).epsilon(1e-14));
    }
    for (double x : m.basis_fields[0].values()) {
        CHECK(x == Approx(0.7).epsilon(1e-14));
    }
}

TEST_CASE("empty model")
{
    const SpectralGrid grid(16);
    const NoiseModel m = build_noise_model(0, 3.0, 1.0, grid, 1);
    CHECK(m.c_psi == 0.0);
    CHECK(kernels::max_abs(m.f_psi.values()) == 0.0);
    NoiseStreams rng(1, 0);
    const NoiseIncrement inc = sample_increment(m, 1e-3, rng);
    CHECK(inc.draws.empty());
    CHECK(kernels::max_abs(inc.field.values()) == 0.0);
}

TEST_CASE("two-mode model in x1")
{
    const SpectralGrid grid(16);
    const NoiseModel m = build_noise_model(
        std::vector<FourierMode>{{Kind::cosine, 1, 0}, {Kind::sine, 1, 0}}, 0.0, 1.0, grid, 1);
    for (double x : m.f_psi.values()) {
        CHECK(x == Approx(-2.0).epsilon(1e-13));
    }
    // each mode: int |grad(sqrt2 cos 2 pi x1)|^2 = 4 pi^2
    CHECK(m.c_psi == Approx(8.0 * kPi * kPi).epsilon(1e-14));
    CHECK(recompute_c_psi(m, grid) == Approx(m.c_psi).epsilon(1e-12));
}

TEST_CASE("model invariants across truncations")
{
    const SpectralGrid grid(24);
    for (int n : {3, 9, 25}) {
        const NoiseModel m = build_noise_model(n, 3.0, 1.3, grid, 5);
        CHECK(*std::max_element(m.f_psi.values().begin(), m.f_psi.values().end()) <= 0.0);
        CHECK(std::abs(recompute_c_psi(m, grid) - m.c_psi) <= 1e-12 * (1.0 + m.c_psi));
    }
}

TEST_CASE("correction field does not depend on mode order")
{
    const SpectralGrid grid(16);
    auto modes = real_fourier_basis(grid);
    modes.resize(9);
    const NoiseModel a = build_noise_model(modes, 2.0, 1.0, grid, 1);
    std::reverse(modes.begin(), modes.end());
    const NoiseModel b = build_noise_model(modes, 2.0, 1.0, grid, 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a.f_psi(0, i) == Approx(b.f_psi(0, i)).epsilon(1e-14));
    }
    CHECK(a.c_psi == Approx(b.c_psi).epsilon(1e-14));
}

TEST_CASE("bad model parameters")
{
    const SpectralGrid grid(8);
    CHECK_THROWS_AS(build_noise_model(-1, 3.0, 1.0, grid, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_noise_model(26, 3.0, 1.0, grid, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_noise_model(4, -1.0, 1.0, grid, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_noise_model(std::vector<FourierMode>{{Kind::cosine, 3, 0}}, 1.0, 1.0, grid, 1),
                    std::invalid_argument);
}

TEST_CASE("seed derivation is deterministic and spreads indices")
{
    CHECK(derive_seed(42, 0) == derive_seed(42, 0));
    CHECK(derive_seed(42, 0) != derive_seed(42, 1));
    CHECK(derive_seed(42, 0) != derive_seed(43, 0));
}

TEST_CASE("increments are deterministic and nested across truncations")
{
    const SpectralGrid grid(16);
    const NoiseModel small = build_noise_model(4, 3.0, 1.0, grid, 77);
    const NoiseModel big = build_noise_model(9, 3.0, 1.0, grid, 77);
    NoiseStreams r1(77, 4), r2(77, 9), r3(77, 4);
    for (int step = 0; step < 5; ++step) {
        const NoiseIncrement a = sample_increment(small, 1e-3, r1);
        const NoiseIncrement b = sample_increment(big, 1e-3, r2);
        const NoiseIncrement c = sample_increment(small, 1e-3, r3);
        for (std::size_t l = 0; l < 4; ++l) {
            CHECK(std::memcmp(a.draws[l].data(), b.draws[l].data(), sizeof(a.draws[l])) == 0);
        }
        CHECK(a.field == c.field);
    }
}

TEST_CASE("assembled increment is the stated combination")
{
    const SpectralGrid grid(16);
    const NoiseModel m = build_noise_model(5, 1.0, 1.0, grid, 3);
    NoiseStreams rng(3, 5);
    const NoiseIncrement inc = sample_increment(m, 0.01, rng);
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < grid.size(); i += 11) {
            double s = 0.0;
            for (std::size_t l = 0; l < 5; ++l) {
                s += inc.draws[l][c] * m.basis_fields[l](0, i);
            }
            CHECK(std::abs(inc.field(c, i) - s) <= 1e-14);
        }
    }
    CHECK_THROWS_AS(sample_increment(m, 0.0, rng), std::invalid_argument);
    NoiseStreams short_rng(3, 2);
    CHECK_THROWS_AS(sample_increment(m, 0.01, short_rng), std::invalid_argument);
}

TEST_CASE("increment variance scales linearly in dt")
{
    const SpectralGrid grid(8);
    const NoiseModel m = build_noise_model(1, 0.0, 1.0, grid, 9);
    const int draws = 100000;
    std::vector<double> dts{1e-4, 1e-3, 1e-2};
    std::vector<double> second;
    std::vector<double> se;
    for (double dt : dts) {
        NoiseStreams rng(derive_seed(9, static_cast<std::uint64_t>(dt * 1e6)), 1);
        double s = 0.0;
        double s2 = 0.0;
        for (int k = 0; k < draws; ++k) {
            const auto z = rng.standard_normals(0);
            const double x = dt * z[0] * z[0];
            s += x;
            s2 += x * x;
        }
        const double mean = s / draws;
        second.push_back(mean);
        se.push_back(std::sqrt((s2 / draws - mean * mean) / draws));
    }
    for (std::size_t i = 0; i < dts.size(); ++i) {
        CHECK(std::abs(second[i] - dts[i]) <= 3.0 * se[i]);
    }
    const double slope = std::log(second[2] / second[0]) / std::log(dts[2] / dts[0]);
    CHECK(slope == Approx(1.0).epsilon(0.01));
}

TEST_CASE("covariance law")
{
    const SpectralGrid grid(8);
    SUBCASE("constant mode, a = b = psi_1 e_1")
    {
        const NoiseModel m = build_noise_model(1, 0.0, 1.0, grid, 4);
        Vec3Field a(grid);
        for (double& x : a.channel(0)) {
            x = 1.0;
        }
        const CovarianceEstimate c = covariance_estimate(m, a, a, 1.0, 1.0, 4000, grid);
        CHECK(c.closed_form == Approx(1.0).epsilon(1e-14));
        CHECK(c.agrees());
    }
    SUBCASE("test field outside the range of psi")
    {
        const NoiseModel m = build_noise_model(3, 1.0, 1.0, grid, 4);
        const auto basis = real_fourier_basis(grid);
        Vec3Field a(grid);
        kernels::axpy(1.0, mode_field(basis[7], grid).channel(0), a.channel(1));
        const CovarianceEstimate c = covariance_estimate(m, a, a, 0.5, 0.3, 500, grid);
        CHECK(std::abs(c.closed_form) < 1e-15);
        CHECK(c.agrees());
    }
    SUBCASE("time zero")
    {
        const NoiseModel m = build_noise_model(3, 1.0, 1.0, grid, 4);
        Vec3Field a(grid);
        for (double& x : a.channel(2)) {
            x = 1.0;
        }
        const CovarianceEstimate c = covariance_estimate(m, a, a, 0.0, 0.7, 200, grid);
        CHECK(c.closed_form == 0.0);
        CHECK(c.estimate == 0.0);
    }
    SUBCASE("mixed times and components")
    {
        const NoiseModel m = build_noise_model(5, 0.5, 1.0, grid, 8);
        const DirectorField u = test::smooth_director(grid, 0.6);
        Vec3Field b = u.data;
        kernels::axpy(0.5, m.basis_fields[2].channel(0), b.channel(0));
        const CovarianceEstimate c = covariance_estimate(m, u.data, b, 0.4, 0.9, 4000, grid);
        CHECK(c.agrees());
    }
    const NoiseModel m = build_noise_model(1, 0.0, 1.0, grid, 4);
    Vec3Field a(grid);
    CHECK_THROWS_AS(covariance_estimate(m, a, a, 1.0, 1.0, 50, grid), std::invalid_argument);
}
