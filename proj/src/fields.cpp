#include "sel/fields.hpp"

#include <algorithm>
#include <cmath>

namespace sel {

double constraint_error(const Vec3Field& u)
{
    double worst = 0.0;
    const auto x = u.channel(0);
    const auto y = u.channel(1);
    const auto z = u.channel(2);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double m = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
        worst = std::max(worst, std::abs(m - 1.0));
    }
    return worst;
}

DirectorField normalize_to_sphere(Vec3Field u)
{
    require_finite(u, "normalize_to_sphere");
    // Check before dividing so that the input is untouched on failure.
    const auto x = u.channel(0);
    const auto y = u.channel(1);
    const auto z = u.channel(2);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double m = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
        if (m < kSingularModulus) {
            throw SingularityError("director modulus " + std::to_string(m) +
                                   " below 1e-8 at grid index " + std::to_string(i));
        }
    }
    kernels::normalize(vec3(u));
    return DirectorField{std::move(u)};
}

DirectorGradient director_gradient(const Vec3Field& u, const SpectralGrid& grid)
{
    return {partial(u, 0, grid), partial(u, 1, grid)};
}

ScalarField gradient_energy_density(const DirectorGradient& du, const SpectralGrid& grid)
{
    ScalarField g(grid);
    auto out = g.channel(0);
    std::vector<double> tmp(grid.size());
    kernels::dot3(vec3(du.d1), vec3(du.d1), out);
    kernels::dot3(vec3(du.d2), vec3(du.d2), tmp);
    kernels::axpy(1.0, tmp, out);
    return dealias(g, grid);
}

Vec3Field dealiased_product(const ScalarField& s, const Vec3Field& u, const SpectralGrid& grid)
{
    Vec3Field out(grid);
    for (std::size_t c = 0; c < 3; ++c) {
        kernels::multiply(s.channel(0), u.channel(c), out.channel(c));
    }
    return dealias(out, grid);
}

Vec3Field transport(const Vec2Field& v, const DirectorGradient& du, const SpectralGrid& grid)
{
    Vec3Field out(grid);
    for (std::size_t c = 0; c < 3; ++c) {
        kernels::multiply(v.channel(0), du.d1.channel(c), out.channel(c));
        std::vector<double> tmp(grid.size());
        kernels::multiply(v.channel(1), du.d2.channel(c), tmp);
        kernels::axpy(1.0, tmp, out.channel(c));
    }
    return dealias(out, grid);
}

namespace {

void require_on_sphere(const Vec3Field& u, const char* what)
{
    const double err = constraint_error(u);
    if (!(err <= kTensionConstraintTol)) {
        throw ConstraintError(std::string(what) + ": director violates |u| = 1 by " +
                              std::to_string(err));
    }
}

}  // namespace

TensionField tension(const DirectorField& u, const SpectralGrid& grid)
{
    require_grid(u.data, grid, "tension");
    require_on_sphere(u.data, "tension");
    const DirectorGradient du = director_gradient(u.data, grid);
    const ScalarField g = gradient_energy_density(du, grid);
    Vec3Field tau = laplacian(u.data, grid);
    const Vec3Field gu = dealiased_product(g, u.data, grid);
    kernels::axpy(1.0, gu.values(), tau.values());
    return TensionField{std::move(tau)};
}

TensionField corrected_tension(const DirectorField& u, const VelocityField& v,
                               const SpectralGrid& grid)
{
    TensionField tau = tension(u, grid);
    const Vec3Field t = transport(v.data, director_gradient(u.data, grid), grid);
    kernels::axpy(-1.0, t.values(), tau.data.values());
    return tau;
}

double tension_orthogonality_error(const DirectorField& u, const TensionField& tau)
{
    std::vector<double> d(u.data.points());
    kernels::dot3(vec3(u.data), vec3(tau.data), d);
    return kernels::max_abs(d);
}

double energy(const VelocityField& v, const DirectorField& u, const SpectralGrid& grid)
{
    return 0.5 * (l2_norm_sq(v.data, grid) + gradient_norm_sq(u.data, grid));
}

double tension_identity_check(const DirectorField& u, const SpectralGrid& grid)
{
    const TensionField tau = tension(u, grid);
    const Vec3Field lap = laplacian(u.data, grid);
    const DirectorGradient du = director_gradient(u.data, grid);
    std::vector<double> grad_sq(grid.size());
    std::vector<double> tmp(grid.size());
    kernels::dot3(vec3(du.d1), vec3(du.d1), grad_sq);
    kernels::dot3(vec3(du.d2), vec3(du.d2), tmp);
    kernels::axpy(1.0, tmp, grad_sq);
    std::vector<double> tau_sq(grid.size());
    std::vector<double> lap_sq(grid.size());
    kernels::dot3(vec3(tau.data), vec3(tau.data), tau_sq);
    kernels::dot3(vec3(lap), vec3(lap), lap_sq);
    double worst = 0.0;
    for (std::size_t i = 0; i < tau_sq.size(); ++i) {
        worst = std::max(worst, std::abs(tau_sq[i] - (lap_sq[i] - grad_sq[i] * grad_sq[i])));
    }
    return worst;
}

Vec3Field rotate(const Vec3Field& u, const std::array<double, 9>& r)
{
    Vec3Field out(u.n());
    for (std::size_t i = 0; i < u.points(); ++i) {
        const double a = u(0, i), b = u(1, i), c = u(2, i);
        out(0, i) = r[0] * a + r[1] * b + r[2] * c;
        out(1, i) = r[3] * a + r[4] * b + r[5] * c;
        out(2, i) = r[6] * a + r[7] * b + r[8] * c;
    }
    return out;
}

}  // namespace sel
