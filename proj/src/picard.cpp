#include "sel/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sel {

double cutoff_theta(double x)
{
    if (x <= 1.0) {
        return 1.0;
    }
    if (x >= 2.0) {
        return 0.0;
    }
    const auto g = [](double s) { return std::exp(-1.0 / s); };
    const double a = g(2.0 - x);
    return a / (a + g(x - 1.0));
}

namespace {

double l4_norm(const GridField<2>& f, const SpectralGrid& grid)
{
    return std::pow(l4_norm_pow4(f, grid), 0.25);
}

// |y|_{L4} and |grad y|_{L4} (Frobenius modulus of the gradient).
std::pair<double, double> w14_parts(const Vec3Field& y, const SpectralGrid& grid)
{
    const DirectorGradient dy = director_gradient(y, grid);
    std::vector<double> g(grid.size());
    std::vector<double> tmp(grid.size());
    kernels::dot3(vec3(dy.d1), vec3(dy.d1), g);
    kernels::dot3(vec3(dy.d2), vec3(dy.d2), tmp);
    kernels::axpy(1.0, tmp, g);
    return {std::pow(l4_norm_pow4(y, grid), 0.25), std::pow(inner(g, g, grid), 0.25)};
}

void check_problem(const PicardProblem& p, const NoiseModel& model, const SpectralGrid& grid)
{
    if (!(p.radius > 0.0)) {
        throw std::invalid_argument("picard: radius must be positive");
    }
    if (!(p.horizon > 0.0) || p.intervals < 1) {
        throw std::invalid_argument("picard: horizon and interval count must be positive");
    }
    require_grid(p.v0, grid, "picard");
    require_grid(p.u0, grid, "picard");
    if (!p.noise.empty() && p.noise.size() != static_cast<std::size_t>(p.intervals)) {
        throw std::invalid_argument("picard: need one noise increment per interval");
    }
    if (model.truncation_n > 0 && model.f_psi.n() != grid.n()) {
        throw std::invalid_argument("picard: noise model built on another grid");
    }
}

}  // namespace

double picard_cutoff_norm(const Vec2Field& w, const Vec3Field& y, const SpectralGrid& grid)
{
    const auto [y4, dy4] = w14_parts(y, grid);
    return std::max(l4_norm(w, grid), y4 + dy4);
}

MildPath constant_path(const PicardProblem& problem)
{
    MildPath p;
    p.h = problem.horizon / problem.intervals;
    p.v.assign(static_cast<std::size_t>(problem.intervals) + 1, problem.v0);
    p.u.assign(static_cast<std::size_t>(problem.intervals) + 1, problem.u0);
    return p;
}

MildPath picard_iterate(const MildPath& input, const PicardProblem& problem,
                        const NoiseModel& model, const SpectralGrid& grid)
{
    check_problem(problem, model, grid);
    const std::size_t m_total = static_cast<std::size_t>(problem.intervals);
    if (input.v.size() != m_total + 1 || input.u.size() != m_total + 1) {
        throw std::invalid_argument("picard_iterate: input path has the wrong length");
    }
    const double h = problem.horizon / problem.intervals;
    MildPath out;
    out.h = h;
    out.v.reserve(m_total + 1);
    out.u.reserve(m_total + 1);
    out.v.push_back(problem.v0);
    out.u.push_back(problem.u0);

    for (std::size_t m = 0; m < m_total; ++m) {
        const Vec2Field& w = input.v[m];
        const Vec3Field& y = input.u[m];
        const double theta = cutoff_theta(picard_cutoff_norm(w, y, grid) / problem.radius);
        const DirectorGradient dy = director_gradient(y, grid);

        // velocity: V_{m+1} = e^{hA} (V_m - h P[Theta (w.grad w + div(grad y (.) grad y))])
        Vec2Field vm = out.v.back();
        if (theta != 0.0) {
            Vec2Field nl(grid);
            const Vec2Field d1w = partial(w, 0, grid);
            const Vec2Field d2w = partial(w, 1, grid);
            std::vector<double> tmp(grid.size());
            for (std::size_t c = 0; c < 2; ++c) {
                kernels::multiply(w.channel(0), d1w.channel(c), nl.channel(c));
                kernels::multiply(w.channel(1), d2w.channel(c), tmp);
                kernels::axpy(1.0, tmp, nl.channel(c));
            }
            Vec2Field row1(grid), row2(grid);
            kernels::dot3(vec3(dy.d1), vec3(dy.d1), row1.channel(0));
            kernels::dot3(vec3(dy.d1), vec3(dy.d2), row1.channel(1));
            kernels::dot3(vec3(dy.d2), vec3(dy.d1), row2.channel(0));
            kernels::dot3(vec3(dy.d2), vec3(dy.d2), row2.channel(1));
            row1 = dealias(row1, grid);
            row2 = dealias(row2, grid);
            nl = dealias(nl, grid);
            kernels::axpy(1.0, divergence(row1, grid).channel(0), nl.channel(0));
            kernels::axpy(1.0, divergence(row2, grid).channel(0), nl.channel(1));
            kernels::axpy(-h * theta, nl.values(), vm.values());
        }
        out.v.push_back(semigroup_apply(vm, h, SemigroupKind::stokes, grid));

        // director: U_{m+1} = e^{h Lap} (U_m + h[Theta(y|grad y|^2 - w.grad y) + F y] + y x dW)
        Vec3Field um = out.u.back();
        Vec3Field f(grid);
        if (theta != 0.0) {
            ScalarField g(grid);
            std::vector<double> tmp(grid.size());
            kernels::dot3(vec3(dy.d1), vec3(dy.d1), g.channel(0));
            kernels::dot3(vec3(dy.d2), vec3(dy.d2), tmp);
            kernels::axpy(1.0, tmp, g.channel(0));
            g = dealias(g, grid);
            for (std::size_t c = 0; c < 3; ++c) {
                kernels::multiply(g.channel(0), y.channel(c), f.channel(c));
                kernels::multiply(w.channel(0), dy.d1.channel(c), tmp);
                kernels::axpy(-1.0, tmp, f.channel(c));
                kernels::multiply(w.channel(1), dy.d2.channel(c), tmp);
                kernels::axpy(-1.0, tmp, f.channel(c));
            }
            for (double& x : f.values()) {
                x *= theta;
            }
        }
        if (model.truncation_n > 0) {
            std::vector<double> tmp(grid.size());
            for (std::size_t c = 0; c < 3; ++c) {
                kernels::multiply(model.f_psi.channel(0), y.channel(c), tmp);
                kernels::axpy(1.0, tmp, f.channel(c));
            }
        }
        f = dealias(f, grid);
        kernels::axpy(h, f.values(), um.values());
        if (!problem.noise.empty() && !problem.noise[m].draws.empty()) {
            Vec3Field rot(grid);
            kernels::cross(vec3(y), vec3(problem.noise[m].field), vec3(rot));
            kernels::axpy(1.0, dealias(rot, grid).values(), um.values());
        }
        out.u.push_back(semigroup_apply(um, h, SemigroupKind::heat, grid));
    }
    return out;
}

double mild_path_distance(const MildPath& a, const MildPath& b, const SpectralGrid& grid)
{
    if (a.v.size() != b.v.size() || a.u.size() != b.u.size()) {
        throw std::invalid_argument("mild_path_distance: paths have different lengths");
    }
    double worst = 0.0;
    for (std::size_t m = 0; m < a.v.size(); ++m) {
        Vec2Field dw = a.v[m];
        kernels::axpy(-1.0, b.v[m].values(), dw.values());
        Vec3Field dy = a.u[m];
        kernels::axpy(-1.0, b.u[m].values(), dy.values());
        const auto [y4, dy4] = w14_parts(dy, grid);
        worst = std::max(worst, l4_norm(dw, grid) + y4 + dy4);
    }
    return worst;
}

}  // namespace sel
