#include "sel/diagnostics.hpp"

#include "sel/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sel {

namespace {

// Pointwise |d1 u|^2 + |d2 u|^2, not dealiased (quadrature input).
std::vector<double> grad_sq_density(const DirectorGradient& du, std::size_t points)
{
    std::vector<double> g(points);
    std::vector<double> tmp(points);
    kernels::dot3(vec3(du.d1), vec3(du.d1), g);
    kernels::dot3(vec3(du.d2), vec3(du.d2), tmp);
    kernels::axpy(1.0, tmp, g);
    return g;
}

template <std::size_t C>
std::vector<double> modulus_sq(const GridField<C>& f)
{
    std::vector<double> out(f.points(), 0.0);
    for (std::size_t c = 0; c < C; ++c) {
        const auto ch = f.channel(c);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += ch[i] * ch[i];
        }
    }
    return out;
}

// Sum over channels and both axes of |d_alpha f_c|^2, pointwise.
template <std::size_t C>
std::vector<double> gradient_density(const GridField<C>& f, const SpectralGrid& grid)
{
    std::vector<double> out(f.points(), 0.0);
    for (int axis = 0; axis < 2; ++axis) {
        const auto d = modulus_sq(partial(f, axis, grid));
        kernels::axpy(1.0, d, out);
    }
    return out;
}

// sum_alpha d_alpha u . (u x d_alpha dW), pointwise.
std::vector<double> martingale_density(const Vec3Field& u, const DirectorGradient& du,
                                       const Vec3Field& dw, const SpectralGrid& grid)
{
    std::vector<double> out(u.points(), 0.0);
    std::vector<double> tmp(u.points());
    Vec3Field rot(grid);
    for (int axis = 0; axis < 2; ++axis) {
        const Vec3Field ddw = partial(dw, axis, grid);
        kernels::cross(vec3(u), vec3(ddw), vec3(rot));
        kernels::dot3(vec3(axis == 0 ? du.d1 : du.d2), vec3(rot), tmp);
        kernels::axpy(1.0, tmp, out);
    }
    return out;
}

}  // namespace

EnergyLedger EnergyLedger::start(const VelocityField& v, const DirectorField& u,
                                 const SpectralGrid& grid)
{
    EnergyLedger l;
    l.e0 = energy(v, u, grid);
    l.e_t = l.e0;
    return l;
}

EnergyLedger ledger_update(const EnergyLedger& ledger, const VelocityField& v0,
                           const DirectorField& u0, const VelocityField& v1,
                           const DirectorField& u1, const NoiseIncrement& increment, double dt,
                           double c_psi, const SpectralGrid& grid)
{
    EnergyLedger out = ledger;
    const double grad_v = gradient_norm_sq(v0.data, grid);
    const TensionField tau = tension(u0, grid);
    const double tau_sq = l2_norm_sq(tau.data, grid);
    const DirectorGradient du = director_gradient(u0.data, grid);

    out.dissipation += dt * (grad_v + tau_sq);
    out.grad_v_integral += dt * grad_v;
    out.lap_u_integral += dt * l2_norm_sq(laplacian(u0.data, grid), grid);
    out.grad_u_integral += dt * (l2_norm_sq(du.d1, grid) + l2_norm_sq(du.d2, grid));
    if (!increment.draws.empty()) {
        out.martingale_x +=
            integrate(martingale_density(u0.data, du, increment.field, grid), grid);
    }
    out.trace_drift += dt * c_psi;
    out.t += dt;
    out.e_t = energy(v1, u1, grid);
    out.residual = out.e_t - out.e0 + out.dissipation - out.trace_drift - out.martingale_x;
    return out;
}

ConcentrationMonitor::ConcentrationMonitor(double rho, double epsilon1, const SpectralGrid& grid)
    : rho_(rho), epsilon1_(epsilon1), n_(grid.n())
{
    if (!(rho >= grid.spacing())) {
        throw std::invalid_argument("ConcentrationMonitor: rho " + std::to_string(rho) +
                                    " is below one grid cell");
    }
    if (!(rho < 0.5)) {
        throw std::invalid_argument("ConcentrationMonitor: rho must be below 1/2");
    }
    if (!(epsilon1 > 0.0)) {
        throw std::invalid_argument("ConcentrationMonitor: epsilon1 must be positive");
    }
    const double r_cells = rho * n_;
    const int reach = static_cast<int>(std::floor(r_cells));
    for (int da = -reach; da <= reach; ++da) {
        for (int db = -reach; db <= reach; ++db) {
            if (static_cast<double>(da * da + db * db) <= r_cells * r_cells) {
                offsets_.push_back({da, db});
            }
        }
    }
}

double ConcentrationMonitor::ball_area() const noexcept
{
    return static_cast<double>(offsets_.size()) / (static_cast<double>(n_) * n_);
}

double ConcentrationMonitor::point_weight() const noexcept
{
    return std::numbers::pi * rho_ * rho_ / static_cast<double>(offsets_.size());
}

LocalEnergySup ball_integral_sup(std::span<const double> density,
                                 const ConcentrationMonitor& monitor, const SpectralGrid& grid)
{
    if (monitor.grid_n() != grid.n()) {
        throw std::invalid_argument("ball_integral_sup: monitor built for another grid");
    }
    std::vector<double> sums(grid.size());
    kernels::ball_sums(density, grid.n(), monitor.ball_mask(), sums);
    LocalEnergySup best;
    best.value = sums[0];
    for (std::size_t i = 1; i < sums.size(); ++i) {
        if (sums[i] > best.value) {
            best.value = sums[i];
            best.argmax = i;
        }
    }
    best.value *= monitor.point_weight();
    return best;
}

std::vector<double> energy_density(const VelocityField& v, const Vec3Field& u,
                                   const SpectralGrid& grid)
{
    std::vector<double> d = grad_sq_density(director_gradient(u, grid), grid.size());
    kernels::axpy(1.0, modulus_sq(v.data), d);
    for (double& x : d) {
        x *= 0.5;
    }
    return d;
}

LocalEnergySup local_energy_sup(const VelocityField& v, const DirectorField& u,
                                const ConcentrationMonitor& monitor, const SpectralGrid& grid)
{
    return ball_integral_sup(energy_density(v, u.data, grid), monitor, grid);
}

double concentration_time(std::span<const SupSample> samples, double epsilon1, double horizon)
{
    for (const SupSample& s : samples) {
        if (s.sup_value >= epsilon1) {
            return s.t;
        }
    }
    return horizon;
}

template <std::size_t C>
double ladyzhenskaya_check(const GridField<C>& phi, const SpectralGrid& grid)
{
    require_finite(phi, "ladyzhenskaya_check");
    const double l2 = l2_norm_sq(phi, grid);
    if (l2 == 0.0) {
        return 0.0;
    }
    return l4_norm_pow4(phi, grid) / (l2 * (l2 + gradient_norm_sq(phi, grid)));
}

template double ladyzhenskaya_check(const GridField<1>&, const SpectralGrid&);
template double ladyzhenskaya_check(const GridField<2>&, const SpectralGrid&);
template double ladyzhenskaya_check(const GridField<3>&, const SpectralGrid&);

StruweRatio struwe_check(std::span<const Vec3Field> path, double dt, double rho,
                         const SpectralGrid& grid)
{
    if (path.size() < 100) {
        throw std::invalid_argument("struwe_check: at least 100 samples are required");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("struwe_check: dt must be positive");
    }
    const ConcentrationMonitor balls(rho, 1.0, grid);
    StruweRatio r;
    for (const Vec3Field& u : path) {
        require_grid(u, grid, "struwe_check");
        const DirectorGradient du = director_gradient(u, grid);
        const std::vector<double> g = grad_sq_density(du, grid.size());
        r.lhs += dt * inner(g, g, grid);
        r.sup_ball = std::max(r.sup_ball, ball_integral_sup(g, balls, grid).value);
        const double hess =
            integrate(gradient_density(du.d1, grid), grid) +
            integrate(gradient_density(du.d2, grid), grid);
        r.rhs_integral += dt * (hess + integrate(g, grid) / (rho * rho));
    }
    const double denom = r.sup_ball * r.rhs_integral;
    r.ratio = denom > 0.0 ? r.lhs / denom : 0.0;
    return r;
}

double l2h2_monitor(std::span<const SampleRecord> records, const L2H2Inputs& in)
{
    const double kappa = in.mu1 * in.epsilon1;
    if (!(kappa < 1.0) || !(kappa >= 0.0)) {
        throw std::invalid_argument("l2h2_monitor: absorption needs 0 <= mu1 * epsilon1 < 1");
    }
    if (!(in.rho > 0.0)) {
        throw std::invalid_argument("l2h2_monitor: rho must be positive");
    }
    const SampleRecord* last = nullptr;
    for (const SampleRecord& r : records) {
        if (r.t <= in.zeta) {
            last = &r;
        }
    }
    if (last == nullptr) {
        return 0.0;
    }
    const double bracket = last->e0 - last->energy - last->grad_v_integral +
                           last->martingale_x + last->trace_drift +
                           kappa / (in.rho * in.rho) * last->grad_u_integral;
    return bracket / (1.0 - kappa) - last->lap_u_integral;
}

double gronwall_psi(const VelocityField& v1, const DirectorField& u1, const VelocityField& v2,
                    const DirectorField& u2, const SpectralGrid& grid)
{
    Vec2Field g = v1.data;
    kernels::axpy(-1.0, v2.data.values(), g.values());
    Vec3Field f = u1.data;
    kernels::axpy(-1.0, u2.data.values(), f.values());
    return 0.5 * (inverse_lambda_norm_sq(g, grid) + l2_norm_sq(f, grid));
}

double gronwall_rate(const VelocityField& v, const DirectorField& u, const SpectralGrid& grid)
{
    const std::vector<double> g = grad_sq_density(director_gradient(u.data, grid), grid.size());
    return 1.0 + l4_norm_pow4(v.data, grid) + inner(g, g, grid);
}

GronwallResult gronwall_monitor(std::span<const TwinSample> samples, double dt,
                                const SpectralGrid& grid)
{
    if (samples.empty()) {
        throw std::invalid_argument("gronwall_monitor: no samples");
    }
    GronwallResult r;
    const TwinSample& first = samples.front();
    const TwinSample& last = samples.back();
    r.psi0 = gronwall_psi(first.v1, first.u1, first.v2, first.u2, grid);
    r.psi_t = gronwall_psi(last.v1, last.u1, last.v2, last.u2, grid);
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        const TwinSample& s = samples[k];
        r.driver += dt * (gronwall_rate(s.v1, s.u1, grid) + gronwall_rate(s.v2, s.u2, grid));
    }
    if (r.psi0 == 0.0) {
        r.identical_data = true;
        if (r.psi_t > 1e-12) {
            throw std::domain_error("gronwall_monitor: identical data diverged, Psi(T) = " +
                                    std::to_string(r.psi_t));
        }
        return r;
    }
    r.log_growth = std::log(r.psi_t / r.psi0);
    return r;
}

LocalBalanceMonitor::LocalBalanceMonitor(std::size_t center, double rho, const VelocityField& v,
                                         const DirectorField& u, const NoiseModel& model,
                                         const SpectralGrid& grid)
    : rho_(rho)
{
    if (!(rho >= grid.spacing()) || !(rho < 0.5)) {
        throw std::invalid_argument("LocalBalanceMonitor: rho out of range");
    }
    const int n = grid.n();
    const int ca = static_cast<int>(center / static_cast<std::size_t>(n));
    const int cb = static_cast<int>(center % static_cast<std::size_t>(n));
    phi_sq_.resize(grid.size());
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int da = std::min(std::abs(a - ca), n - std::abs(a - ca));
            const int db = std::min(std::abs(b - cb), n - std::abs(b - cb));
            const double r = std::hypot(da, db) / n;
            // 1 on B(x, rho/2), 0 outside B(x, rho)
            const double phi = cutoff_theta(2.0 * r / rho);
            phi_sq_[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = phi * phi;
        }
    }
    for (const ScalarField& psi : model.basis_fields) {
        c_phi_psi_ += inner(phi_sq_, gradient_density(psi, grid), grid);
    }
    e_phi0_ = local_energy(v, u, grid);
    e_phi_ = e_phi0_;
}

double LocalBalanceMonitor::local_energy(const VelocityField& v, const DirectorField& u,
                                         const SpectralGrid& grid) const
{
    return inner(phi_sq_, energy_density(v, u.data, grid), grid);
}

void LocalBalanceMonitor::update(const VelocityField& v, const DirectorField& u,
                                 const ScalarField& pressure, const NoiseIncrement& increment,
                                 double dt, const VelocityField& v_next,
                                 const DirectorField& u_next, const SpectralGrid& grid)
{
    const DirectorGradient du = director_gradient(u.data, grid);
    std::vector<double> diss = gradient_density(v.data, grid);
    kernels::axpy(1.0, modulus_sq(tension(u, grid).data), diss);
    dissipation_ += dt * inner(phi_sq_, diss, grid);
    if (!increment.draws.empty()) {
        martingale_ += inner(phi_sq_, martingale_density(u.data, du, increment.field, grid), grid);
    }
    const std::vector<double> g = grad_sq_density(du, grid.size());
    const std::vector<double> v_sq = modulus_sq(v.data);
    const auto p = pressure.channel(0);
    std::vector<double> integrand(grid.size());
    for (std::size_t i = 0; i < integrand.size(); ++i) {
        const double vm = std::sqrt(v_sq[i]);
        integrand[i] = vm * v_sq[i] + (vm + 1.0) * g[i] + vm * std::abs(p[i]);
    }
    integral_ += dt * (1.0 + 1.0 / (rho_ * rho_)) * integrate(integrand, grid);
    t_ += dt;
    e_phi_ = local_energy(v_next, u_next, grid);
}

double LocalBalanceMonitor::lhs() const noexcept
{
    return e_phi_ - e_phi0_ + 0.5 * dissipation_ - martingale_ - c_phi_psi_ * t_;
}

double LocalBalanceMonitor::fitted_c0() const noexcept
{
    return integral_ > 0.0 ? lhs() / integral_ : 0.0;
}

}  // namespace sel
