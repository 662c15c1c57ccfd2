#include "sel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sel {

namespace {

using V3 = std::array<double, 3>;

V3 cross3(const V3& a, const V3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// u x (s e_j), channel-wise, for a scalar field s.
Vec3Field cross_with_axis(const Vec3Field& u, std::span<const double> s, int j)
{
    Vec3Field e(u.n());
    std::copy(s.begin(), s.end(), e.channel(static_cast<std::size_t>(j)).begin());
    Vec3Field out(u.n());
    kernels::cross(vec3(u), vec3(e), vec3(out));
    return out;
}

Vec3Field scaled_axis(std::span<const double> s, int j, int n)
{
    Vec3Field e(n);
    std::copy(s.begin(), s.end(), e.channel(static_cast<std::size_t>(j)).begin());
    return e;
}

}  // namespace

double check_geometric_fact(const std::array<double, 3>& zeta)
{
    V3 sum{0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
        V3 e{0.0, 0.0, 0.0};
        e[static_cast<std::size_t>(i)] = 1.0;
        const V3 t = cross3(cross3(zeta, e), e);
        for (std::size_t c = 0; c < 3; ++c) {
            sum[c] += t[c];
        }
    }
    double r = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        const double d = sum[c] + 2.0 * zeta[c];
        r += d * d;
    }
    return std::sqrt(r);
}

TraceReport trace_terms(const DirectorField& u, const NoiseModel& model, const SpectralGrid& grid)
{
    const double err = constraint_error(u.data);
    if (!(err <= kTensionConstraintTol)) {
        throw ConstraintError("trace_terms: director violates |u| = 1 by " +
                              std::to_string(err));
    }
    const int n = grid.n();
    const DirectorGradient du = director_gradient(u.data, grid);
    std::vector<double> a1_density(grid.size(), 0.0);
    std::vector<double> a2_density(grid.size(), 0.0);
    std::vector<double> tmp(grid.size());
    Vec3Field work(grid);
    for (const ScalarField& psi : model.basis_fields) {
        const Vec2Field dpsi = gradient(psi, grid);
        for (int j = 0; j < 3; ++j) {
            const Vec3Field u_x_psi = cross_with_axis(u.data, psi.channel(0), j);
            for (int a = 0; a < 2; ++a) {
                const auto ds = dpsi.channel(static_cast<std::size_t>(a));
                const Vec3Field& dau = a == 0 ? du.d1 : du.d2;
                // A1: d_a u . ((u x psi e_j) x d_a psi e_j)
                const Vec3Field dpsi_e = scaled_axis(ds, j, n);
                kernels::cross(vec3(u_x_psi), vec3(dpsi_e), vec3(work));
                kernels::dot3(vec3(dau), vec3(work), tmp);
                kernels::axpy(0.5, tmp, a1_density);
                // A2: (u x d_a psi e_j) . (d_a u x psi e_j) + |u x d_a psi e_j|^2
                const Vec3Field u_x_dpsi = cross_with_axis(u.data, ds, j);
                const Vec3Field dau_x_psi = cross_with_axis(dau, psi.channel(0), j);
                kernels::dot3(vec3(u_x_dpsi), vec3(dau_x_psi), tmp);
                kernels::axpy(0.5, tmp, a2_density);
                kernels::dot3(vec3(u_x_dpsi), vec3(u_x_dpsi), tmp);
                kernels::axpy(0.5, tmp, a2_density);
            }
        }
    }
    TraceReport r;
    r.a1_max_abs = kernels::max_abs(a1_density);
    r.a1_value = integrate(a1_density, grid);
    r.a2_value = integrate(a2_density, grid);
    r.c_psi = recompute_c_psi(model, grid);
    r.a2_expected = r.c_psi;
    r.a2_doubled = 2.0 * r.c_psi;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r.geometric_residual = std::max(
            r.geometric_residual, check_geometric_fact({u.data(0, i), u.data(1, i), u.data(2, i)}));
    }
    return r;
}

double StratoResult::min_order() const
{
    double m = std::numeric_limits<double>::infinity();
    for (double o : observed_order) {
        m = std::min(m, o);
    }
    return m;
}

StratoResult strato_ito_equivalence(const DirectorField& u0, const NoiseModel& model,
                                    const StratoConfig& cfg, const SpectralGrid& grid)
{
    if (cfg.dts.empty() || cfg.paths < 1 || !(cfg.horizon > 0.0)) {
        throw std::invalid_argument("strato_ito_equivalence: empty dt list, no paths or horizon");
    }
    require_grid(u0.data, grid, "strato_ito_equivalence");
    const double fine = *std::min_element(cfg.dts.begin(), cfg.dts.end());
    if (!(fine > 0.0)) {
        throw std::invalid_argument("strato_ito_equivalence: dt must be positive");
    }
    const long fine_steps = std::lround(cfg.horizon / fine);
    if (std::abs(fine_steps * fine - cfg.horizon) > 1e-9 * cfg.horizon) {
        throw std::invalid_argument("strato_ito_equivalence: horizon is not a multiple of dt");
    }
    std::vector<long> ratios;
    for (double dt : cfg.dts) {
        const long r = std::lround(dt / fine);
        if (r < 1 || std::abs(r * fine - dt) > 1e-9 * dt || fine_steps % r != 0) {
            throw std::invalid_argument(
                "strato_ito_equivalence: each dt must be an integer multiple of the finest");
        }
        ratios.push_back(r);
    }
    const std::size_t pts = grid.size();
    const std::size_t n_modes = static_cast<std::size_t>(model.truncation_n);
    const double f_sign = cfg.flip_correction_sign ? -1.0 : 1.0;
    const auto f_psi = model.f_psi.channel(0);

    StratoResult res;
    res.dts = cfg.dts;
    res.strong_error.assign(cfg.dts.size(), 0.0);

    for (int p = 0; p < cfg.paths; ++p) {
        NoiseStreams rng(derive_seed(model.seed, static_cast<std::uint64_t>(p)), model.truncation_n);
        std::vector<std::vector<std::array<double, 3>>> fine_draws(
            static_cast<std::size_t>(fine_steps));
        const double sd = std::sqrt(fine);
        for (auto& step_draws : fine_draws) {
            step_draws.resize(n_modes);
            for (std::size_t l = 0; l < n_modes; ++l) {
                auto z = rng.standard_normals(static_cast<int>(l));
                for (double& x : z) {
                    x *= sd;
                }
                step_draws[l] = z;
            }
        }
        for (std::size_t d = 0; d < cfg.dts.size(); ++d) {
            const long r = ratios[d];
            const double dt = cfg.dts[d];
            Vec3Field heun = u0.data;
            Vec3Field ito = u0.data;
            Vec3Field rot(grid);
            Vec3Field rot2(grid);
            double worst = 0.0;
            for (long k = 0; k < fine_steps / r; ++k) {
                std::vector<std::array<double, 3>> draws(n_modes, {0.0, 0.0, 0.0});
                for (long q = 0; q < r; ++q) {
                    const auto& src = fine_draws[static_cast<std::size_t>(k * r + q)];
                    for (std::size_t l = 0; l < n_modes; ++l) {
                        for (std::size_t c = 0; c < 3; ++c) {
                            draws[l][c] += src[l][c];
                        }
                    }
                }
                const Vec3Field dw = assemble_increment(model, draws, grid);
                // Heun: u + u x dW + (u x dW) x dW / 2
                kernels::cross(vec3(heun), vec3(dw), vec3(rot));
                kernels::cross(vec3(rot), vec3(dw), vec3(rot2));
                kernels::axpy(1.0, rot.values(), heun.values());
                kernels::axpy(0.5, rot2.values(), heun.values());
                // Ito-Euler: u + dt F u + u x dW
                kernels::cross(vec3(ito), vec3(dw), vec3(rot));
                for (std::size_t c = 0; c < 3; ++c) {
                    auto ch = ito.channel(c);
                    for (std::size_t i = 0; i < pts; ++i) {
                        ch[i] += f_sign * dt * f_psi[i] * ch[i];
                    }
                }
                kernels::axpy(1.0, rot.values(), ito.values());

                Vec3Field diff = heun;
                kernels::axpy(-1.0, ito.values(), diff.values());
                worst = std::max(worst, std::sqrt(l2_norm_sq(diff, grid)));
                res.heun_norm_drift = std::max(res.heun_norm_drift, constraint_error(heun));
            }
            res.strong_error[d] += worst / cfg.paths;
        }
    }
    for (std::size_t d = 0; d + 1 < cfg.dts.size(); ++d) {
        res.observed_order.push_back(std::log(res.strong_error[d] / res.strong_error[d + 1]) /
                                     std::log(cfg.dts[d] / cfg.dts[d + 1]));
    }
    return res;
}

std::vector<double> galerkin_cauchy(const SimState& init, const GalerkinConfig& cfg,
                                    const SpectralGrid& grid)
{
    cfg.scheme.validate();
    if (cfg.truncations.size() < 2) {
        throw std::invalid_argument("galerkin_cauchy: need at least two truncations");
    }
    for (std::size_t i = 0; i + 1 < cfg.truncations.size(); ++i) {
        if (cfg.truncations[i + 1] < cfg.truncations[i]) {
            throw std::invalid_argument("galerkin_cauchy: truncations must be nested (increasing)");
        }
    }
    if (!cfg.seeds.empty()) {
        if (cfg.seeds.size() != cfg.truncations.size()) {
            throw std::invalid_argument("galerkin_cauchy: one seed per truncation expected");
        }
        for (std::uint64_t s : cfg.seeds) {
            if (s != cfg.seed) {
                throw std::invalid_argument(
                    "galerkin_cauchy: nested truncations must share one seed");
            }
        }
    }
    const std::size_t m = cfg.truncations.size();
    const int n_max = cfg.truncations.back();
    std::vector<NoiseModel> models;
    for (int n : cfg.truncations) {
        models.push_back(build_noise_model(n, cfg.decay_exponent, cfg.amplitude, grid, cfg.seed));
    }
    NoiseStreams rng(cfg.seed, n_max);
    std::vector<SimState> states(m, init);
    std::vector<double> dist(m - 1, 0.0);

    const auto measure = [&]() {
        for (std::size_t i = 0; i + 1 < m; ++i) {
            Vec2Field dv = states[i + 1].v.data;
            kernels::axpy(-1.0, states[i].v.data.values(), dv.values());
            Vec3Field dun = states[i + 1].u.data;
            kernels::axpy(-1.0, states[i].u.data.values(), dun.values());
            const double d =
                std::sqrt(l2_norm_sq(dv, grid)) + std::sqrt(gradient_norm_sq(dun, grid));
            dist[i] = std::max(dist[i], d);
        }
    };
    measure();
    for (std::int64_t k = 0; k < cfg.scheme.n_steps; ++k) {
        std::vector<std::array<double, 3>> all(static_cast<std::size_t>(n_max));
        const double sd = std::sqrt(cfg.scheme.dt);
        for (int l = 0; l < n_max; ++l) {
            auto z = rng.standard_normals(l);
            for (double& x : z) {
                x *= sd;
            }
            all[static_cast<std::size_t>(l)] = z;
        }
        for (std::size_t i = 0; i < m; ++i) {
            NoiseIncrement inc;
            inc.draws.assign(all.begin(), all.begin() + cfg.truncations[i]);
            inc.field = assemble_increment(models[i], inc.draws, grid);
            states[i] = advance(states[i], inc, models[i], cfg.scheme, grid);
        }
        measure();
    }
    return dist;
}

}  // namespace sel

namespace sel {

GalerkinEnsemble galerkin_ensemble(const SimState& init, const GalerkinConfig& base, int paths,
                                   std::uint64_t master_seed, const SpectralGrid& grid)
{
    if (paths < 1) {
        throw std::invalid_argument("galerkin_ensemble: need at least one path");
    }
    GalerkinEnsemble out;
    int decreasing = 0;
    for (int p = 0; p < paths; ++p) {
        GalerkinConfig cfg = base;
        cfg.seed = derive_seed(master_seed, static_cast<std::uint64_t>(p));
        cfg.seeds.clear();
        std::vector<double> d = galerkin_cauchy(init, cfg, grid);
        bool dec = true;
        for (std::size_t i = 0; i + 1 < d.size(); ++i) {
            dec = dec && d[i + 1] < d[i];
        }
        decreasing += dec ? 1 : 0;
        out.distances.push_back(std::move(d));
    }
    out.fraction_decreasing = static_cast<double>(decreasing) / paths;
    return out;
}

std::vector<NoiseIncrement> picard_noise(const NoiseModel& model, double horizon, int intervals,
                                         std::uint64_t seed)
{
    std::vector<NoiseIncrement> noise;
    if (model.truncation_n == 0) {
        return noise;
    }
    NoiseStreams rng(seed, model.truncation_n);
    for (int m = 0; m < intervals; ++m) {
        noise.push_back(sample_increment(model, horizon / intervals, rng));
    }
    return noise;
}

PicardReport measure_picard(const PicardProblem& problem, const NoiseModel& model, int pairs,
                            int iterations, std::uint64_t seed, const SpectralGrid& grid)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> scale(0.25, 1.5);
    const auto random_path = [&]() {
        MildPath p = constant_path(problem);
        const double a = scale(rng);
        for (std::size_t m = 0; m < p.v.size(); ++m) {
            p.v[m] = random_velocity(grid, 4, a, rng).data;
            p.u[m] = random_unit_field(grid, 4, 0.6 * a, rng).data;
        }
        return p;
    };
    PicardReport r;
    for (int k = 0; k < pairs; ++k) {
        const MildPath a = random_path();
        const MildPath b = random_path();
        const double num = mild_path_distance(picard_iterate(a, problem, model, grid),
                                              picard_iterate(b, problem, model, grid), grid);
        const double ratio = num / mild_path_distance(a, b, grid);
        r.lipschitz_ratios.push_back(ratio);
        r.max_lipschitz = std::max(r.max_lipschitz, ratio);
    }
    MildPath x = constant_path(problem);
    for (int it = 0; it < iterations; ++it) {
        MildPath y = picard_iterate(x, problem, model, grid);
        r.iterate_differences.push_back(mild_path_distance(x, y, grid));
        x = std::move(y);
    }
    for (std::size_t i = 0; i + 1 < r.iterate_differences.size(); ++i) {
        // below this the differences are round-off
        if (r.iterate_differences[i + 1] < 1e-11) {
            break;
        }
        const double q = r.iterate_differences[i + 1] / r.iterate_differences[i];
        r.contraction_ratios.push_back(q);
        r.max_contraction = std::max(r.max_contraction, q);
    }
    return r;
}

double empirical_mu1(const SpectralGrid& grid, double rho, int paths, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const int kmax = std::min(3, grid.dealias_cutoff());
    double mu1 = 0.0;
    for (int p = 0; p < paths; ++p) {
        const auto path = random_director_path(grid, kmax, 0.6, 100, rng);
        mu1 = std::max(mu1, struwe_check(path, 0.01, rho, grid).ratio);
    }
    return mu1;
}

InequalityReport inequality_corpora(const SpectralGrid& grid, double rho, int fields, int paths,
                                    std::uint64_t seed)
{
    InequalityReport r;
    std::mt19937_64 rng(seed);
    const int kmax = std::min(6, grid.dealias_cutoff());
    for (int k = 0; k < fields; ++k) {
        const double x = ladyzhenskaya_check(random_band_limited(grid, kmax, rng), grid);
        r.ladyzhenskaya.push_back(x);
        r.mu0 = std::max(r.mu0, x);
    }
    ScalarField one(grid);
    for (double& x : one.values()) {
        x = 1.0;
    }
    r.constant_ratio = ladyzhenskaya_check(one, grid);
    r.mu0 = std::max(r.mu0, r.constant_ratio);

    std::mt19937_64 path_rng(derive_seed(seed, 1));
    const int path_kmax = std::min(3, grid.dealias_cutoff());
    for (int p = 0; p < paths; ++p) {
        const auto path = random_director_path(grid, path_kmax, 0.6, 100, path_rng);
        const double x = struwe_check(path, 0.01, rho, grid).ratio;
        r.struwe.push_back(x);
        r.mu1 = std::max(r.mu1, x);
    }
    r.epsilon1 = r.mu1 > 0.0 ? auto_epsilon1(r.mu1) : 0.0;
    return r;
}

}  // namespace sel

namespace sel {

SimState perturb_director(const SimState& state, std::size_t mode, int component, double size,
                          const SpectralGrid& grid)
{
    const std::vector<FourierMode> basis = real_fourier_basis(grid);
    if (mode >= basis.size() || component < 0 || component > 2) {
        throw std::invalid_argument("perturb_director: mode or component out of range");
    }
    Vec3Field u = state.u.data;
    kernels::axpy(size, mode_field(basis[mode], grid).channel(0),
                  u.channel(static_cast<std::size_t>(component)));
    return make_state(state.v.data, std::move(u), state.t);
}

GronwallResult twin_run(const SimState& a, const SimState& b, const NoiseModel& model,
                        const SchemeConfig& cfg, const SpectralGrid& grid)
{
    cfg.validate();
    NoiseStreams rng(model.seed, model.truncation_n);
    std::vector<TwinSample> samples;
    samples.reserve(static_cast<std::size_t>(cfg.n_steps) + 1);
    SimState x = a;
    SimState y = b;
    samples.push_back({x.v, x.u, y.v, y.u});
    for (std::int64_t k = 0; k < cfg.n_steps; ++k) {
        NoiseIncrement inc;
        if (model.truncation_n > 0) {
            inc = sample_increment(model, cfg.dt, rng);
        }
        x = advance(x, inc, model, cfg, grid);
        y = advance(y, inc, model, cfg, grid);
        samples.push_back({x.v, x.u, y.v, y.u});
    }
    return gronwall_monitor(samples, cfg.dt, grid);
}

}  // namespace sel
