#include "sel/spectral.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace sel;
using doctest::Approx;

namespace {

double max_diff(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

}  // namespace

TEST_CASE("grid rejects odd or tiny resolutions")
{
    CHECK_THROWS_AS(SpectralGrid(7), std::invalid_argument);
    CHECK_THROWS_AS(SpectralGrid(6), std::invalid_argument);
    CHECK_NOTHROW(SpectralGrid(8));
}

TEST_CASE("forward transform matches a direct DFT")
{
    const SpectralGrid grid(8);
    const auto f = test::random_values(grid.size(), 3);
    const Spectrum modes = grid.forward(f);
    for (std::size_t m = 0; m < grid.spectral_size(); ++m) {
        const auto ref = test::naive_coefficient(f, 8, grid.k1(m), grid.k2(m));
        CHECK(std::abs(modes[m] - ref) < 1e-14);
    }
    const auto back = grid.inverse(modes);
    CHECK(max_diff(back, f) < 1e-14);
}

TEST_CASE("mode_index round-trips wavenumbers")
{
    const SpectralGrid grid(16);
    for (int k1 = -7; k1 <= 8; ++k1) {
        for (int k2 = 0; k2 <= 8; ++k2) {
            const std::size_t m = grid.mode_index(k1, k2);
            CHECK(grid.k1(m) == k1);
            CHECK(grid.k2(m) == k2);
        }
    }
    CHECK_THROWS_AS(grid.mode_index(0, 9), std::out_of_range);
    CHECK_THROWS_AS(grid.mode_index(9, 0), std::out_of_range);
}

TEST_CASE("spectral derivatives agree with analytic values and finite differences")
{
    const SpectralGrid grid(64);
    const ScalarField f = test::sample<1>(grid, [](std::size_t, double x, double y) {
        return std::sin(kTwoPi * x) * std::cos(2.0 * kTwoPi * y) + 0.3 * std::cos(kTwoPi * (x - y));
    });
    const Vec2Field g = gradient(f, grid);
    const ScalarField d1 = test::sample<1>(grid, [](std::size_t, double x, double y) {
        return kTwoPi * std::cos(kTwoPi * x) * std::cos(2.0 * kTwoPi * y) -
               0.3 * kTwoPi * std::sin(kTwoPi * (x - y));
    });
    CHECK(max_diff(g.channel(0), d1.channel(0)) < 1e-11);

    const auto fd = test::central_difference(f.channel(0), 64, 1);
    CHECK(max_diff(g.channel(1), fd) < 1e-3);

    const ScalarField lap = laplacian(f, grid);
    const ScalarField lap_ref = test::sample<1>(grid, [](std::size_t, double x, double y) {
        const double w = kTwoPi * kTwoPi;
        return -5.0 * w * std::sin(kTwoPi * x) * std::cos(2.0 * kTwoPi * y) -
               0.3 * 2.0 * w * std::cos(kTwoPi * (x - y));
    });
    CHECK(max_diff(lap.channel(0), lap_ref.channel(0)) < 1e-9);
}

TEST_CASE("Leray projection")
{
    const SpectralGrid grid(64);
    const Vec2Field f = test::sample<2>(grid, [](std::size_t c, double x, double y) {
        return c == 0 ? std::sin(kTwoPi * x) + std::cos(kTwoPi * (x + 3 * y)) + 0.7
                      : std::cos(2.0 * kTwoPi * y) * std::sin(kTwoPi * x) - 0.2;
    });
    const Vec2Field p = leray_project(f, grid);

    SUBCASE("idempotent")
    {
        const Vec2Field pp = leray_project(p, grid);
        CHECK(max_diff(pp.values(), p.values()) < 1e-14);
    }
    SUBCASE("divergence free")
    {
        CHECK(max_divergence(p, grid) <= 1e-12);
    }
    SUBCASE("annihilates gradients")
    {
        const ScalarField phi = test::sample<1>(grid, [](std::size_t, double x, double y) {
            return std::sin(kTwoPi * x) * std::sin(kTwoPi * 2.0 * y);
        });
        const Vec2Field g = leray_project(gradient(phi, grid), grid);
        for (double v : g.values()) {
            CHECK(std::abs(v) < 1e-12);
        }
    }
    SUBCASE("mean flow passes through")
    {
        CHECK(mean(p.channel(0)) == Approx(0.7).epsilon(1e-13));
        CHECK(mean(p.channel(1)) == Approx(-0.2).epsilon(1e-13));
    }
    SUBCASE("multiplier at k = (1, 2)")
    {
        // e1 cos(2 pi k.x) projects to (I - k k^T/|k|^2) e1 = (4/5, -2/5)
        const Vec2Field e = test::sample<2>(grid, [](std::size_t c, double x, double y) {
            return c == 0 ? std::cos(kTwoPi * (x + 2.0 * y)) : 0.0;
        });
        const Vec2Field q = leray_project(e, grid);
        const ScalarField w = test::sample<1>(grid, [](std::size_t, double x, double y) {
            return std::cos(kTwoPi * (x + 2.0 * y));
        });
        double err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            err = std::max(err, std::abs(q(0, i) - 0.8 * w(0, i)));
            err = std::max(err, std::abs(q(1, i) + 0.4 * w(0, i)));
        }
        CHECK(err < 1e-14);
    }
}

TEST_CASE("zero-mean Poisson solve")
{
    const SpectralGrid grid(32);
    const ScalarField f = test::sample<1>(grid, [](std::size_t, double x, double y) {
        return std::cos(kTwoPi * x) * std::sin(kTwoPi * y);
    });
    const ScalarField g = inv_laplacian_zero_mean(f, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(g(0, i) == Approx(-f(0, i) / (2.0 * kTwoPi * kTwoPi)).epsilon(1e-12));
    }
    ScalarField biased = f;
    for (double& x : biased.values()) {
        x += 1e-3;
    }
    CHECK_THROWS_AS(inv_laplacian_zero_mean(biased, grid), std::domain_error);
}

TEST_CASE("semigroups act as exact multipliers")
{
    const SpectralGrid grid(32);
    const double t = 0.01;
    const ScalarField f = test::sample<1>(grid, [](std::size_t, double x, double y) {
        return std::sin(kTwoPi * (x + y));
    });
    const ScalarField heat = semigroup_apply(f, t, SemigroupKind::heat, grid);
    const ScalarField bih = semigroup_apply(f, t, SemigroupKind::biharmonic, grid);
    const double lam = 2.0 * kTwoPi * kTwoPi;
    for (std::size_t i = 0; i < grid.size(); i += 37) {
        CHECK(heat(0, i) == Approx(std::exp(-lam * t) * f(0, i)).epsilon(1e-12));
        CHECK(bih(0, i) == Approx(std::exp(-lam * lam * t) * f(0, i)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(semigroup_apply(f, -1.0, SemigroupKind::heat, grid), std::invalid_argument);
    CHECK_THROWS_AS(semigroup_apply(f, t, SemigroupKind::stokes, grid), std::invalid_argument);

    const Vec2Field v = test::sample<2>(grid, [](std::size_t c, double x, double) {
        return c == 0 ? 0.0 : std::sin(kTwoPi * x);
    });
    const Vec2Field s = semigroup_apply(v, t, SemigroupKind::stokes, grid);
    CHECK(s(1, 5) == Approx(std::exp(-kTwoPi * kTwoPi * t) * v(1, 5)).epsilon(1e-12));
}

TEST_CASE("two-thirds rule keeps |k| <= N/3 per axis")
{
    const SpectralGrid grid(24);
    const int cut = grid.dealias_cutoff();
    CHECK(cut == 8);
    const auto wave = [&](int k) {
        return test::sample<1>(grid, [k](std::size_t, double x, double) { return std::cos(kTwoPi * k * x); });
    };
    const ScalarField kept = dealias(wave(cut), grid);
    const ScalarField cut_off = dealias(wave(cut + 1), grid);
    CHECK(max_diff(kept.values(), wave(cut).values()) < 1e-13);
    CHECK(kernels::max_abs(cut_off.values()) < 1e-13);
}

TEST_CASE("Nyquist components carry no derivative")
{
    const SpectralGrid grid(8);
    const ScalarField f = test::sample<1>(grid, [](std::size_t, double x, double) {
        return std::cos(kTwoPi * 4.0 * x);
    });
    CHECK(kernels::max_abs(gradient(f, grid).values()) < 1e-13);
}

TEST_CASE("quadratures and norms")
{
    const SpectralGrid grid(32);
    const ScalarField f = test::sample<1>(grid, [](std::size_t, double x, double y) {
        return 2.0 + std::sin(kTwoPi * x) * std::cos(kTwoPi * y);
    });
    CHECK(integrate(f.channel(0), grid) == Approx(2.0));
    // |f|^2 = 4 + 1/4
    CHECK(l2_norm_sq(f, grid) == Approx(4.25).epsilon(1e-13));
    CHECK(spectral_norm_sq(grid.forward(f.channel(0)), grid) == Approx(4.25).epsilon(1e-13));
    // grad of sin cos: (2pi)^2 * 2 * 1/4
    CHECK(gradient_norm_sq(f, grid) == Approx(kTwoPi * kTwoPi * 0.5).epsilon(1e-12));

    const ScalarField g = test::sample<1>(grid, [](std::size_t, double x, double) {
        return std::sin(kTwoPi * x);
    });
    // int sin^4 = 3/8
    CHECK(l4_norm_pow4(g, grid) == Approx(0.375).epsilon(1e-13));
    // |k| = 1: weight 1 / (1 + 4 pi^2), times |g|^2 = 1/2
    CHECK(inverse_lambda_norm_sq(g, grid) == Approx(0.5 / (1.0 + kTwoPi * kTwoPi)).epsilon(1e-12));
}

TEST_CASE("curl and divergence of a rotation field")
{
    const SpectralGrid grid(32);
    // stream function psi = sin(2 pi x) sin(2 pi y), v = (d2 psi, -d1 psi)
    const Vec2Field v = test::sample<2>(grid, [](std::size_t c, double x, double y) {
        return c == 0 ? kTwoPi * std::sin(kTwoPi * x) * std::cos(kTwoPi * y)
                      : -kTwoPi * std::cos(kTwoPi * x) * std::sin(kTwoPi * y);
    });
    CHECK(kernels::max_abs(divergence(v, grid).values()) < 1e-11);
    const ScalarField w = curl(v, grid);
    // curl = -Laplace psi = 2 (2 pi)^2 psi
    const double expect = 2.0 * kTwoPi * kTwoPi * std::sin(kTwoPi * 0.25) * std::sin(kTwoPi * 0.125);
    CHECK(w(0, 8 * 32 + 4) == Approx(expect).epsilon(1e-11));
}

TEST_CASE("non-finite input is rejected")
{
    std::vector<double> v{1.0, std::nan(""), 2.0};
    CHECK_THROWS_AS(require_finite(v, "probe"), std::domain_error);
}
