#include "sel/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sel {

void SchemeConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("SchemeConfig: dt must be positive and finite");
    }
    if (n_steps < 0) {
        throw std::invalid_argument("SchemeConfig: n_steps must be >= 0");
    }
    if (!(constraint_tol > 0.0)) {
        throw std::invalid_argument("SchemeConfig: constraint_tol must be positive");
    }
}

SimState make_state(Vec2Field v, Vec3Field u, double t)
{
    if (v.n() != u.n()) {
        throw std::invalid_argument("make_state: v and u live on different grids");
    }
    const SpectralGrid grid(v.n());
    SimState s;
    s.t = t;
    s.v = VelocityField{leray_project(v, grid)};
    s.u = normalize_to_sphere(std::move(u));
    return s;
}

const ScalarField& ito_correction(const NoiseModel& model)
{
    return model.f_psi;
}

namespace {

template <std::size_t C>
GridField<C> maybe_dealias(GridField<C> f, bool on, const SpectralGrid& grid)
{
    return on ? dealias(f, grid) : f;
}

bool all_finite(std::span<const double> x)
{
    for (double a : x) {
        if (!std::isfinite(a)) {
            return false;
        }
    }
    return true;
}

// v . grad v + div(grad u (.) grad u), products optionally dealiased.
Vec2Field momentum_nonlinearity(const Vec2Field& v, const DirectorGradient& du, bool dl,
                                const SpectralGrid& grid)
{
    const std::size_t pts = grid.size();
    const Vec2Field d1v = partial(v, 0, grid);
    const Vec2Field d2v = partial(v, 1, grid);
    Vec2Field adv(grid);
    std::vector<double> tmp(pts);
    for (std::size_t c = 0; c < 2; ++c) {
        kernels::multiply(v.channel(0), d1v.channel(c), adv.channel(c));
        kernels::multiply(v.channel(1), d2v.channel(c), tmp);
        kernels::axpy(1.0, tmp, adv.channel(c));
    }
    adv = maybe_dealias(std::move(adv), dl, grid);

    // S_ij = d_i u . d_j u, symmetric.
    ScalarField s11(grid), s12(grid), s22(grid);
    kernels::dot3(vec3(du.d1), vec3(du.d1), s11.channel(0));
    kernels::dot3(vec3(du.d1), vec3(du.d2), s12.channel(0));
    kernels::dot3(vec3(du.d2), vec3(du.d2), s22.channel(0));
    s11 = maybe_dealias(std::move(s11), dl, grid);
    s12 = maybe_dealias(std::move(s12), dl, grid);
    s22 = maybe_dealias(std::move(s22), dl, grid);
    Vec2Field row1(grid), row2(grid);
    std::copy(s11.channel(0).begin(), s11.channel(0).end(), row1.channel(0).begin());
    std::copy(s12.channel(0).begin(), s12.channel(0).end(), row1.channel(1).begin());
    std::copy(s12.channel(0).begin(), s12.channel(0).end(), row2.channel(0).begin());
    std::copy(s22.channel(0).begin(), s22.channel(0).end(), row2.channel(1).begin());
    const ScalarField div1 = divergence(row1, grid);
    const ScalarField div2 = divergence(row2, grid);
    kernels::axpy(1.0, div1.channel(0), adv.channel(0));
    kernels::axpy(1.0, div2.channel(0), adv.channel(1));
    return adv;
}

Vec3Field pointwise_cross(const Vec3Field& a, const Vec3Field& b)
{
    Vec3Field out(a.n());
    kernels::cross(vec3(a), vec3(b), vec3(out));
    return out;
}

// (1 + dt 4 pi^2 |k|^2)^-1 applied to every channel.
template <std::size_t C>
void implicit_heat_solve(GridField<C>& f, double dt, const SpectralGrid& grid)
{
    std::vector<double> mult(grid.spectral_size());
    for (std::size_t m = 0; m < mult.size(); ++m) {
        mult[m] = 1.0 / (1.0 + dt * 4.0 * kPi * kPi * grid.k_sq(m));
    }
    Spectrum modes(grid.spectral_size());
    for (std::size_t c = 0; c < C; ++c) {
        grid.forward(f.channel(c), modes);
        kernels::scale_modes(modes, mult);
        grid.inverse(modes, f.channel(c));
    }
}

}  // namespace

SimState advance(const SimState& state, const NoiseIncrement& increment,
                 const NoiseModel& model, const SchemeConfig& cfg, const SpectralGrid& grid)
{
    cfg.validate();
    require_grid(state.v.data, grid, "advance");
    require_grid(state.u.data, grid, "advance");
    const bool dl = cfg.dealias;
    const double dt = cfg.dt;
    const Vec2Field& v = state.v.data;
    const Vec3Field& u = state.u.data;
    const DirectorGradient du = director_gradient(u, grid);

    // velocity
    Vec2Field v_rhs = v;
    const Vec2Field nl = momentum_nonlinearity(v, du, dl, grid);
    kernels::axpy(-dt, nl.values(), v_rhs.values());
    Spectrum a = grid.forward(v_rhs.channel(0));
    Spectrum b = grid.forward(v_rhs.channel(1));
    leray_project_modes(a, b, grid);
    Vec2Field v_next(grid);
    grid.inverse(a, v_next.channel(0));
    grid.inverse(b, v_next.channel(1));
    implicit_heat_solve(v_next, dt, grid);

    // director
    ScalarField g(grid);
    {
        std::vector<double> tmp(grid.size());
        kernels::dot3(vec3(du.d1), vec3(du.d1), g.channel(0));
        kernels::dot3(vec3(du.d2), vec3(du.d2), tmp);
        kernels::axpy(1.0, tmp, g.channel(0));
    }
    g = maybe_dealias(std::move(g), dl, grid);
    Vec3Field drift(grid);
    for (std::size_t c = 0; c < 3; ++c) {
        kernels::multiply(g.channel(0), u.channel(c), drift.channel(c));
    }
    drift = maybe_dealias(std::move(drift), dl, grid);

    Vec3Field adv(grid);
    {
        std::vector<double> tmp(grid.size());
        for (std::size_t c = 0; c < 3; ++c) {
            kernels::multiply(v.channel(0), du.d1.channel(c), adv.channel(c));
            kernels::multiply(v.channel(1), du.d2.channel(c), tmp);
            kernels::axpy(1.0, tmp, adv.channel(c));
        }
    }
    adv = maybe_dealias(std::move(adv), dl, grid);
    kernels::axpy(-1.0, adv.values(), drift.values());

    Vec3Field noise(grid);
    if (!increment.draws.empty()) {
        require_grid(increment.field, grid, "advance");
        noise = pointwise_cross(u, increment.field);
        if (cfg.integrator == Integrator::heun_stratonovich) {
            // midpoint rotation: u x dW + (u x dW) x dW / 2
            const Vec3Field second = pointwise_cross(noise, increment.field);
            kernels::axpy(0.5, second.values(), noise.values());
        } else {
            Vec3Field fu(grid);
            for (std::size_t c = 0; c < 3; ++c) {
                kernels::multiply(model.f_psi.channel(0), u.channel(c), fu.channel(c));
            }
            fu = maybe_dealias(std::move(fu), dl, grid);
            kernels::axpy(1.0, fu.values(), drift.values());
        }
        noise = maybe_dealias(std::move(noise), dl, grid);
    }

    Vec3Field u_star = u;
    kernels::axpy(dt, drift.values(), u_star.values());
    kernels::axpy(1.0, noise.values(), u_star.values());
    implicit_heat_solve(u_star, dt, grid);

    if (!all_finite(v_next.values()) || !all_finite(u_star.values())) {
        throw BlowUpError("non-finite state at t = " + std::to_string(state.t + dt));
    }

    SimState next;
    next.t = state.t + dt;
    next.step_index = state.step_index + 1;
    next.v = VelocityField{std::move(v_next)};
    next.u = normalize_to_sphere(std::move(u_star));
    const double err = constraint_error(next.u.data);
    if (!(err <= cfg.constraint_tol)) {
        throw ConstraintError("renormalized director off the sphere by " + std::to_string(err));
    }
    return next;
}

SimState step(const SimState& state, const NoiseModel& model, const SchemeConfig& cfg,
              const SpectralGrid& grid, NoiseStreams& rng)
{
    NoiseIncrement inc;
    if (model.truncation_n > 0) {
        inc = sample_increment(model, cfg.dt, rng);
    }
    return advance(state, inc, model, cfg, grid);
}

PressureField recover_pressure(const SimState& state, const SpectralGrid& grid)
{
    const Vec2Field& v = state.v.data;
    const DirectorGradient du = director_gradient(state.u.data, grid);
    // Q_ij = v^i v^j + d_i u . d_j u
    std::array<ScalarField, 3> q{ScalarField(grid), ScalarField(grid), ScalarField(grid)};
    std::vector<double> tmp(grid.size());
    kernels::multiply(v.channel(0), v.channel(0), q[0].channel(0));
    kernels::multiply(v.channel(0), v.channel(1), q[1].channel(0));
    kernels::multiply(v.channel(1), v.channel(1), q[2].channel(0));
    kernels::dot3(vec3(du.d1), vec3(du.d1), tmp);
    kernels::axpy(1.0, tmp, q[0].channel(0));
    kernels::dot3(vec3(du.d1), vec3(du.d2), tmp);
    kernels::axpy(1.0, tmp, q[1].channel(0));
    kernels::dot3(vec3(du.d2), vec3(du.d2), tmp);
    kernels::axpy(1.0, tmp, q[2].channel(0));

    // source = -d_ij Q_ij
    Spectrum s0 = grid.forward(q[0].channel(0));
    const Spectrum s1 = grid.forward(q[1].channel(0));
    const Spectrum s2 = grid.forward(q[2].channel(0));
    const double c = 4.0 * kPi * kPi;
    for (std::size_t m = 0; m < s0.size(); ++m) {
        const double k1 = grid.k1_eff(m);
        const double k2 = grid.k2_eff(m);
        s0[m] = c * (k1 * k1 * s0[m] + 2.0 * k1 * k2 * s1[m] + k2 * k2 * s2[m]);
    }
    dealias_modes(s0, grid);
    ScalarField source(grid);
    grid.inverse(s0, source.channel(0));
    return PressureField{inv_laplacian_zero_mean(source, grid)};
}

}  // namespace sel
