#include "sel/fields.hpp"
#include "sel/presets.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace sel;
using doctest::Approx;

namespace {

// Tension from fourth-order finite differences: Lap u + u |grad u|^2.
Vec3Field fd_tension(const Vec3Field& u, int n)
{
    Vec3Field tau(n);
    std::vector<double> g(u.points(), 0.0);
    std::array<std::vector<double>, 3> lap;
    for (std::size_t c = 0; c < 3; ++c) {
        const auto d1 = test::central_difference(u.channel(c), n, 0);
        const auto d2 = test::central_difference(u.channel(c), n, 1);
        const auto d11 = test::central_difference(d1, n, 0);
        const auto d22 = test::central_difference(d2, n, 1);
        lap[c].resize(u.points());
        for (std::size_t i = 0; i < u.points(); ++i) {
            g[i] += d1[i] * d1[i] + d2[i] * d2[i];
            lap[c][i] = d11[i] + d22[i];
        }
    }
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < u.points(); ++i) {
            tau(c, i) = lap[c][i] + u(c, i) * g[i];
        }
    }
    return tau;
}

}  // namespace

TEST_CASE("normalization onto the sphere")
{
    const SpectralGrid grid(16);
    Vec3Field u = test::sample<3>(grid, [](std::size_t c, double x, double) {
        return c == 2 ? 2.0 + std::sin(kTwoPi * x) : 0.5;
    });
    CHECK(constraint_error(u) > 0.1);
    const DirectorField d = normalize_to_sphere(u);
    CHECK(constraint_error(d.data) <= 1e-15);

    u(0, 3) = u(1, 3) = u(2, 3) = 0.0;
    CHECK_THROWS_AS(normalize_to_sphere(u), SingularityError);
}

TEST_CASE("equator map is harmonic")
{
    const SpectralGrid grid(32);
    const SimState s = equator_stationary(grid);
    const TensionField tau = tension(s.u, grid);
    CHECK(kernels::max_abs(tau.data.values()) < 1e-10);
    // |grad u|^2 = 4 pi^2 everywhere
    CHECK(energy(s.v, s.u, grid) == Approx(0.5 * kTwoPi * kTwoPi).epsilon(1e-13));
}

TEST_CASE("tension matches a finite-difference oracle")
{
    const SpectralGrid grid(128);
    const DirectorField u = test::smooth_director(grid);
    const TensionField tau = tension(u, grid);
    const Vec3Field ref = fd_tension(u.data, 128);
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < ref.values().size(); ++i) {
        err = std::max(err, std::abs(tau.data.values()[i] - ref.values()[i]));
        scale = std::max(scale, std::abs(ref.values()[i]));
    }
    CHECK(err < 1e-4 * scale);
}

TEST_CASE("tension is tangent to the sphere and satisfies the norm identity")
{
    const SpectralGrid grid(128);
    const DirectorField u = test::smooth_director(grid);
    const TensionField tau = tension(u, grid);
    CHECK(tension_orthogonality_error(u, tau) < 1e-8);
    CHECK(tension_identity_check(u, grid) < 1e-6);
}

TEST_CASE("tension rejects a director off the sphere")
{
    const SpectralGrid grid(16);
    DirectorField u = test::smooth_director(grid);
    u.data(2, 0) *= 1.1;
    CHECK_THROWS_AS(tension(u, grid), ConstraintError);
}

TEST_CASE("corrected tension subtracts transport")
{
    const SpectralGrid grid(32);
    const DirectorField u = test::smooth_director(grid);
    VelocityField v{test::sample<2>(grid, [](std::size_t c, double x, double y) {
        return c == 0 ? std::sin(kTwoPi * y) : 0.3 * std::sin(kTwoPi * x);
    })};
    const TensionField t0 = tension(u, grid);
    const TensionField t1 = corrected_tension(u, v, grid);
    const Vec3Field tr = transport(v.data, director_gradient(u.data, grid), grid);
    for (std::size_t i = 0; i < tr.values().size(); i += 53) {
        CHECK(t0.data.values()[i] - t1.data.values()[i] == Approx(tr.values()[i]).epsilon(1e-12));
    }
}

TEST_CASE("energy is invariant under a global rotation of the director")
{
    const SpectralGrid grid(32);
    const DirectorField u = test::smooth_director(grid);
    const double c = std::cos(0.7);
    const double s = std::sin(0.7);
    const std::array<double, 9> rz{c, -s, 0, s, c, 0, 0, 0, 1};
    const DirectorField ru{rotate(u.data, rz)};
    const VelocityField v{Vec2Field(grid)};
    CHECK(constraint_error(ru.data) < 1e-15);
    CHECK(energy(v, ru, grid) == Approx(energy(v, u, grid)).epsilon(1e-13));
}
