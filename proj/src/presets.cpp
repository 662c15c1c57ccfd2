#include "sel/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace sel {

namespace {

template <typename F>
void fill(const SpectralGrid& grid, F&& f)
{
    const int n = grid.n();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            f(static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b), grid.coordinate(a),
              grid.coordinate(b));
        }
    }
}

Vec3Field constant_director(const SpectralGrid& grid)
{
    Vec3Field u(grid);
    for (double& x : u.channel(2)) {
        x = 1.0;
    }
    return u;
}

double smoothstep(double x)
{
    if (x <= 0.0) {
        return 0.0;
    }
    if (x >= 1.0) {
        return 1.0;
    }
    return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

}  // namespace

SimState equator_stationary(const SpectralGrid& grid)
{
    Vec3Field u(grid);
    fill(grid, [&](std::size_t i, double x1, double) {
        u(0, i) = std::cos(kTwoPi * x1);
        u(1, i) = std::sin(kTwoPi * x1);
    });
    return make_state(Vec2Field(grid), std::move(u));
}

SimState bump_concentrated(const SpectralGrid& grid, double lambda)
{
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("bump_concentrated: lambda must be positive");
    }
    Vec3Field u(grid);
    fill(grid, [&](std::size_t i, double x1, double x2) {
        const double d1 = x1 - 0.5;
        const double d2 = x2 - 0.5;
        const double r = std::hypot(d1, d2);
        const double angle = 2.0 * std::atan(r / lambda) * (1.0 - smoothstep((r - 0.2) / 0.15));
        const double c = r > 0.0 ? d1 / r : 1.0;
        const double s = r > 0.0 ? d2 / r : 0.0;
        u(0, i) = std::sin(angle) * c;
        u(1, i) = std::sin(angle) * s;
        u(2, i) = std::cos(angle);
    });
    return make_state(Vec2Field(grid), std::move(u));
}

SimState smooth_small(const SpectralGrid& grid)
{
    Vec3Field u(grid);
    Vec2Field v(grid);
    fill(grid, [&](std::size_t i, double x1, double x2) {
        u(0, i) = 0.07 * std::cos(kTwoPi * x1);
        u(1, i) = 0.07 * std::sin(kTwoPi * x2);
        u(2, i) = 1.0 + 0.03 * std::cos(kTwoPi * (x1 + x2));
        v(0, i) = 0.1 * std::sin(kTwoPi * x2);
        v(1, i) = 0.05 * std::sin(kTwoPi * x1);
    });
    return make_state(std::move(v), std::move(u));
}

SimState shear(const SpectralGrid& grid)
{
    Vec2Field v(grid);
    fill(grid, [&](std::size_t i, double, double x2) { v(0, i) = std::sin(kTwoPi * x2); });
    return make_state(std::move(v), constant_director(grid));
}

SimState taylor_green(const SpectralGrid& grid)
{
    Vec2Field v(grid);
    fill(grid, [&](std::size_t i, double x1, double x2) {
        v(0, i) = std::sin(kTwoPi * x1) * std::cos(kTwoPi * x2);
        v(1, i) = -std::cos(kTwoPi * x1) * std::sin(kTwoPi * x2);
    });
    return make_state(std::move(v), constant_director(grid));
}

std::vector<std::string> preset_names()
{
    return {"equator_stationary", "bump_concentrated", "smooth_small", "shear", "taylor_green"};
}

SimState preset_by_name(const std::string& name, const SpectralGrid& grid)
{
    if (name == "equator_stationary") {
        return equator_stationary(grid);
    }
    if (name == "bump_concentrated") {
        return bump_concentrated(grid);
    }
    if (name == "smooth_small") {
        return smooth_small(grid);
    }
    if (name == "shear") {
        return shear(grid);
    }
    if (name == "taylor_green") {
        return taylor_green(grid);
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

ScalarField random_band_limited(const SpectralGrid& grid, int kmax, std::mt19937_64& rng)
{
    if (kmax < 0 || kmax > grid.dealias_cutoff()) {
        throw std::invalid_argument("random_band_limited: kmax outside the dealiased range");
    }
    std::normal_distribution<double> normal;
    ScalarField f(grid);
    for (const FourierMode& m : real_fourier_basis(grid)) {
        if (std::abs(m.k1) > kmax || std::abs(m.k2) > kmax) {
            continue;
        }
        const double c = normal(rng) / (1.0 + m.k_sq());
        kernels::axpy(c, mode_field(m, grid).channel(0), f.channel(0));
    }
    return f;
}

DirectorField random_unit_field(const SpectralGrid& grid, int kmax, double amplitude,
                                std::mt19937_64& rng)
{
    Vec3Field u = constant_director(grid);
    for (std::size_t c = 0; c < 3; ++c) {
        const ScalarField r = random_band_limited(grid, kmax, rng);
        kernels::axpy(amplitude, r.channel(0), u.channel(c));
    }
    return normalize_to_sphere(std::move(u));
}

VelocityField random_velocity(const SpectralGrid& grid, int kmax, double amplitude,
                              std::mt19937_64& rng)
{
    Vec2Field v(grid);
    for (std::size_t c = 0; c < 2; ++c) {
        const ScalarField r = random_band_limited(grid, kmax, rng);
        kernels::axpy(amplitude, r.channel(0), v.channel(c));
    }
    return VelocityField{leray_project(v, grid)};
}

std::vector<Vec3Field> random_director_path(const SpectralGrid& grid, int kmax,
                                            double amplitude, int samples,
                                            std::mt19937_64& rng)
{
    if (samples < 1) {
        throw std::invalid_argument("random_director_path: need at least one sample");
    }
    std::array<Vec3Field, 2> basis{Vec3Field(grid), Vec3Field(grid)};
    for (Vec3Field& b : basis) {
        for (std::size_t c = 0; c < 3; ++c) {
            const ScalarField r = random_band_limited(grid, kmax, rng);
            kernels::axpy(amplitude, r.channel(0), b.channel(c));
        }
    }
    std::vector<Vec3Field> path;
    path.reserve(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        const double phase = kTwoPi * k / samples;
        Vec3Field u = constant_director(grid);
        kernels::axpy(std::cos(phase), basis[0].values(), u.values());
        kernels::axpy(std::sin(phase), basis[1].values(), u.values());
        path.push_back(normalize_to_sphere(std::move(u)).data);
    }
    return path;
}

}  // namespace sel
