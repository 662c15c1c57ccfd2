#include "sel/diagnostics.hpp"
#include "sel/dynamics.hpp"
#include "sel/presets.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sel;
using doctest::Approx;

TEST_CASE("ledger of the equator map balances exactly without noise")
{
    const SpectralGrid grid(32);
    const NoiseModel m = build_noise_model(0, 3.0, 1.0, grid, 0);
    SchemeConfig cfg;
    cfg.dt = 1e-4;
    SimState s = equator_stationary(grid);
    EnergyLedger ledger = EnergyLedger::start(s.v, s.u, grid);
    CHECK(ledger.e0 == Approx(2.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-12));
    for (int k = 0; k < 50; ++k) {
        const SimState next = advance(s, NoiseIncrement{}, m, cfg, grid);
        ledger = ledger_update(ledger, s.v, s.u, next.v, next.u, NoiseIncrement{}, cfg.dt,
                               m.c_psi, grid);
        s = next;
    }
    CHECK(ledger.t == Approx(5e-3));
    CHECK(std::abs(ledger.residual) <= 1e-10);
    CHECK(ledger.martingale_x == 0.0);
    CHECK(ledger.trace_drift == 0.0);
}

TEST_CASE("ball quadrature of a constant density")
{
    // equator map: |grad u|^2 = 4 pi^2 everywhere, v = 0
    const SpectralGrid grid(128);
    const SimState s = equator_stationary(grid);
    const double pi = std::numbers::pi;
    for (const int cells : {8, 9, 10, 12, 16}) {
        const double rho = cells / 128.0;
        const ConcentrationMonitor mon(rho, 1.0, grid);
        const LocalEnergySup sup = local_energy_sup(s.v, s.u, mon, grid);
        CHECK(std::abs(sup.value / (2.0 * pi * pi * pi * rho * rho) - 1.0) < 0.02);
        CHECK(std::abs(mon.ball_area() / (pi * rho * rho) - 1.0) < 0.04);
    }
    CHECK_THROWS_AS(ConcentrationMonitor(0.5 / 128.0, 1.0, grid), std::invalid_argument);
    CHECK_THROWS_AS(ConcentrationMonitor(0.5, 1.0, grid), std::invalid_argument);
    CHECK_THROWS_AS(ConcentrationMonitor(0.1, 0.0, grid), std::invalid_argument);
}

TEST_CASE("ball integral sup against brute force")
{
    const int n = 32;
    const SpectralGrid grid(n);
    const ConcentrationMonitor mon(5.0 / n, 1.0, grid);
    const std::vector<double> d = test::random_values(grid.size(), 17, 0.0, 1.0);

    double best = -1.0;
    std::size_t arg = 0;
    const double r2 = 25.0;
    for (int ca = 0; ca < n; ++ca) {
        for (int cb = 0; cb < n; ++cb) {
            double s = 0.0;
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    const int da = std::min(std::abs(a - ca), n - std::abs(a - ca));
                    const int db = std::min(std::abs(b - cb), n - std::abs(b - cb));
                    if (da * da + db * db <= r2) {
                        s += d[static_cast<std::size_t>(a) * n + b];
                    }
                }
            }
            if (s > best) {
                best = s;
                arg = static_cast<std::size_t>(ca) * n + cb;
            }
        }
    }
    const LocalEnergySup sup = ball_integral_sup(d, mon, grid);
    CHECK(sup.value == Approx(best * mon.point_weight()).epsilon(1e-12));
    CHECK(sup.argmax == arg);

    const std::vector<double> zero(grid.size(), 0.0);
    const LocalEnergySup z = ball_integral_sup(zero, mon, grid);
    CHECK(z.value == 0.0);
    CHECK(z.argmax == 0);

    const SpectralGrid other(16);
    CHECK_THROWS_AS(ball_integral_sup(std::vector<double>(other.size()), mon, other),
                    std::invalid_argument);
}

TEST_CASE("bump concentrates at the centre")
{
    const SpectralGrid grid(64);
    const SimState s = bump_concentrated(grid);
    const ConcentrationMonitor mon(0.125, 4.0, grid);
    const LocalEnergySup sup = local_energy_sup(s.v, s.u, mon, grid);
    const int a = static_cast<int>(sup.argmax / 64);
    const int b = static_cast<int>(sup.argmax % 64);
    CHECK(std::abs(a - 32) <= 1);
    CHECK(std::abs(b - 32) <= 1);
    CHECK(sup.value > 4.0);
}

TEST_CASE("concentration time")
{
    const std::vector<SupSample> s{{0.0, 0.5}, {0.1, 2.0}, {0.2, 3.0}};
    CHECK(concentration_time(s, 1.0, 1.0) == 0.1);
    CHECK(concentration_time(s, 3.0, 1.0) == 0.2);
    CHECK(concentration_time(s, 0.5, 1.0) == 0.0);
    CHECK(concentration_time(s, 5.0, 0.7) == 0.7);
    CHECK(concentration_time({}, 1.0, 0.3) == 0.3);
}

TEST_CASE("Ladyzhenskaya ratio")
{
    const SpectralGrid grid(16);
    ScalarField zero(grid);
    CHECK(ladyzhenskaya_check(zero, grid) == 0.0);
    ScalarField c(grid);
    for (double& x : c.channel(0)) {
        x = 3.0;
    }
    CHECK(ladyzhenskaya_check(c, grid) == Approx(1.0).epsilon(1e-14));
    // phi = sin(2 pi x1): int phi^4 = 3/8, int phi^2 = 1/2, int |grad phi|^2 = 2 pi^2
    const ScalarField s = test::sample<1>(
        grid, [](std::size_t, double x, double) { return std::sin(2.0 * std::numbers::pi * x); });
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(ladyzhenskaya_check(s, grid) == Approx(0.375 / (0.5 * (0.5 + 2.0 * pi2))).epsilon(1e-12));
}

TEST_CASE("Struwe ratio")
{
    const SpectralGrid grid(16);
    std::vector<Vec3Field> path(99, equator_stationary(grid).u.data);
    CHECK_THROWS_AS(struwe_check(path, 0.01, 0.125, grid), std::invalid_argument);
    path.push_back(path.front());
    CHECK_THROWS_AS(struwe_check(path, 0.0, 0.125, grid), std::invalid_argument);

    std::vector<Vec3Field> flat(100, shear(grid).u.data);
    const StruweRatio z = struwe_check(flat, 0.01, 0.125, grid);
    CHECK(z.ratio == 0.0);
    CHECK(z.lhs == 0.0);

    // equator: |grad u|^2 = 4 pi^2 everywhere, no Hessian beyond 16 pi^4
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const StruweRatio r = struwe_check(path, 0.01, 0.125, grid);
    CHECK(r.lhs == Approx(16.0 * pi2 * pi2).epsilon(1e-10));
    CHECK(r.sup_ball == Approx(4.0 * pi2 * std::numbers::pi * 0.125 * 0.125).epsilon(1e-10));
    CHECK(r.rhs_integral == Approx(16.0 * pi2 * pi2 + 4.0 * pi2 / (0.125 * 0.125)).epsilon(1e-10));
}

TEST_CASE("L2-H2 monitor")
{
    SampleRecord r;
    r.t = 0.5;
    r.e0 = 2.0;
    r.energy = 1.0;
    r.grad_v_integral = 0.25;
    r.martingale_x = 0.1;
    r.trace_drift = 0.05;
    r.grad_u_integral = 0.4;
    r.lap_u_integral = 1.0;
    const std::vector<SampleRecord> rec{r};
    const L2H2Inputs in{0.1, 2.0, 0.5, 1.0};
    // kappa = 0.2: (0.9 + 0.2 * 4 * 0.4) / 0.8 - 1
    CHECK(l2h2_monitor(rec, in) == Approx((0.9 + 0.32) / 0.8 - 1.0).epsilon(1e-14));
    CHECK(l2h2_monitor(rec, L2H2Inputs{0.1, 2.0, 0.5, 0.4}) == 0.0);
    CHECK(l2h2_monitor({}, in) == 0.0);
    CHECK_THROWS_AS(l2h2_monitor(rec, L2H2Inputs{0.5, 2.0, 0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(l2h2_monitor(rec, L2H2Inputs{0.1, 2.0, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("Gronwall monitor")
{
    const SpectralGrid grid(16);
    const SimState a = smooth_small(grid);
    TwinSample same{a.v, a.u, a.v, a.u};
    const std::vector<TwinSample> twins(3, same);
    const GronwallResult g = gronwall_monitor(twins, 0.1, grid);
    CHECK(g.identical_data);
    CHECK(g.psi_t == 0.0);
    CHECK(g.driver == Approx(0.4 * gronwall_rate(a.v, a.u, grid)));

    // constant offset in u: Psi = |c|^2 / 2 on the unit torus
    DirectorField shifted = a.u;
    for (double& x : shifted.data.channel(1)) {
        x += 0.3;
    }
    TwinSample off{a.v, a.u, a.v, shifted};
    CHECK(gronwall_psi(off.v1, off.u1, off.v2, off.u2, grid) == Approx(0.045).epsilon(1e-12));
    const std::vector<TwinSample> growth{off, off};
    CHECK(gronwall_monitor(growth, 0.1, grid).log_growth == Approx(0.0).epsilon(1e-14));

    const std::vector<TwinSample> broken{same, off};
    CHECK_THROWS_AS(gronwall_monitor(broken, 0.1, grid), std::domain_error);
    CHECK_THROWS_AS(gronwall_monitor({}, 0.1, grid), std::invalid_argument);
}

TEST_CASE("local balance is trivial for a stationary harmonic map")
{
    const SpectralGrid grid(32);
    const NoiseModel m = build_noise_model(0, 3.0, 1.0, grid, 0);
    SchemeConfig cfg;
    cfg.dt = 1e-4;
    SimState s = equator_stationary(grid);
    LocalBalanceMonitor mon(16 * 32 + 16, 0.25, s.v, s.u, m, grid);
    for (int k = 0; k < 10; ++k) {
        const SimState next = advance(s, NoiseIncrement{}, m, cfg, grid);
        mon.update(s.v, s.u, recover_pressure(s, grid).data, NoiseIncrement{}, cfg.dt, next.v,
                   next.u, grid);
        s = next;
    }
    CHECK(std::abs(mon.lhs()) < 1e-10);
    CHECK(mon.integral_term() > 0.0);
    CHECK_THROWS_AS(LocalBalanceMonitor(0, 0.6, s.v, s.u, m, grid), std::invalid_argument);
}

TEST_CASE("martingale term has zero mean")
{
    const SpectralGrid grid(16);
    const NoiseModel m = build_noise_model(4, 3.0, 1.0, grid, 5);
    SchemeConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 20;
    const int paths = 200;
    std::vector<double> x;
    for (int p = 0; p < paths; ++p) {
        NoiseStreams rng(derive_seed(5, static_cast<std::uint64_t>(p)), m.truncation_n);
        const RunResult r = run_with_continuation(smooth_small(grid), m, cfg,
                                                  MonitorConfig{0.125, 1e9, 20}, grid, rng);
        x.push_back(r.trajectory.ledger.martingale_x);
    }
    double mean = 0.0;
    for (double v : x) {
        mean += v / paths;
    }
    double var = 0.0;
    for (double v : x) {
        var += (v - mean) * (v - mean) / (paths - 1);
    }
    const double se = std::sqrt(var / paths);
    CHECK(se > 0.0);
    CHECK(std::abs(mean) <= 4.0 * se);
}
