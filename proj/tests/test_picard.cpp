#include "sel/dynamics.hpp"
#include "sel/presets.hpp"
#include "sel/verify.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace sel;
using doctest::Approx;

TEST_CASE("cutoff function")
{
    CHECK(cutoff_theta(0.0) == 1.0);
    CHECK(cutoff_theta(1.0) == 1.0);
    CHECK(cutoff_theta(2.0) == 0.0);
    CHECK(cutoff_theta(7.0) == 0.0);
    CHECK(cutoff_theta(1.5) == Approx(0.5));
    // symmetric about 3/2
    CHECK(cutoff_theta(1.2) == Approx(1.0 - cutoff_theta(1.8)).epsilon(1e-14));
    double prev = 1.0;
    for (double x = 1.0; x <= 2.0; x += 0.01) {
        const double t = cutoff_theta(x);
        CHECK(t <= prev);
        prev = t;
    }
    // flat at the junctions
    CHECK(1.0 - cutoff_theta(1.01) < 1e-30);
    CHECK(cutoff_theta(1.99) < 1e-30);
}

TEST_CASE("constant director at rest is a fixed point")
{
    const SpectralGrid grid(16);
    PicardProblem p;
    p.v0 = Vec2Field(grid);
    p.u0 = Vec3Field(grid);
    for (double& x : p.u0.channel(2)) {
        x = 1.0;
    }
    const NoiseModel none = build_noise_model(0, 3.0, 1.0, grid, 0);
    const MildPath x = constant_path(p);
    CHECK(x.intervals() == 20);
    CHECK(x.h == Approx(5e-5));
    const MildPath y = picard_iterate(x, p, none, grid);
    CHECK(mild_path_distance(x, y, grid) == 0.0);
}

TEST_CASE("mild path distance")
{
    const SpectralGrid grid(16);
    PicardProblem p;
    const SimState s = smooth_small(grid);
    p.v0 = s.v.data;
    p.u0 = s.u.data;
    const MildPath a = constant_path(p);
    CHECK(mild_path_distance(a, a, grid) == 0.0);
    MildPath b = a;
    for (double& x : b.v.back().channel(0)) {
        x += 0.5;
    }
    // |0.5|_{L4} on the unit torus
    CHECK(mild_path_distance(a, b, grid) == Approx(0.5).epsilon(1e-13));
    b.v.pop_back();
    b.u.pop_back();
    CHECK_THROWS_AS(mild_path_distance(a, b, grid), std::invalid_argument);
}

TEST_CASE("problem validation")
{
    const SpectralGrid grid(16);
    const NoiseModel none = build_noise_model(0, 3.0, 1.0, grid, 0);
    PicardProblem p;
    const SimState s = smooth_small(grid);
    p.v0 = s.v.data;
    p.u0 = s.u.data;
    const MildPath x = constant_path(p);

    PicardProblem bad = p;
    bad.radius = 0.0;
    CHECK_THROWS_AS(picard_iterate(x, bad, none, grid), std::invalid_argument);
    bad = p;
    bad.noise.resize(3);
    CHECK_THROWS_AS(picard_iterate(x, bad, none, grid), std::invalid_argument);
    bad = p;
    bad.intervals = 10;
    CHECK_THROWS_AS(picard_iterate(x, bad, none, grid), std::invalid_argument);
}

TEST_CASE("short-time map contracts on a small grid")
{
    const SpectralGrid grid(16);
    const NoiseModel model = build_noise_model(4, 3.0, 1.0, grid, 3);
    PicardProblem p;
    const SimState s = smooth_small(grid);
    p.v0 = s.v.data;
    p.u0 = s.u.data;
    p.noise = picard_noise(model, p.horizon, p.intervals, 8);
    REQUIRE(p.noise.size() == 20);
    const PicardReport r = measure_picard(p, model, 3, 5, 1, grid);
    CHECK(r.lipschitz_ratios.size() == 3);
    CHECK(r.max_lipschitz < 1.0);
    CHECK(!r.contraction_ratios.empty());
    CHECK(r.max_contraction < 0.9);
    CHECK(picard_noise(build_noise_model(0, 3.0, 1.0, grid, 0), 1e-3, 20, 1).empty());
}
