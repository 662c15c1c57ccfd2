#pragma once

#include "sel/fields.hpp"
#include "sel/kernels.hpp"
#include "sel/noise.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace sel {

/// Running terms of the pathwise energy balance
///   E(t) - E(0) + int (|grad v|^2 + |tau_u|^2) = t C_psi + X(t).
///
/// The three extra integrals feed the L2-H2 absorption monitor. All time
/// integrals use the left endpoint of each step, matching the Ito filtration
/// of the stepper.
struct EnergyLedger
{
    double t = 0.0;
    double e0 = 0.0;
    double e_t = 0.0;
    double dissipation = 0.0;
    double martingale_x = 0.0;
    double trace_drift = 0.0;
    double residual = 0.0;

    double lap_u_integral = 0.0;
    double grad_v_integral = 0.0;
    double grad_u_integral = 0.0;

    static EnergyLedger start(const VelocityField& v, const DirectorField& u,
                              const SpectralGrid& grid);
};

/// Advances the ledger across one step from (v0,u0) to (v1,u1) driven by
/// `increment`. Dissipation and the martingale increment
///   sum_alpha <d_alpha u, u x d_alpha(Delta W)>
/// are evaluated at the pre-step state.
EnergyLedger ledger_update(const EnergyLedger& ledger, const VelocityField& v0,
                           const DirectorField& u0, const VelocityField& v1,
                           const DirectorField& u1, const NoiseIncrement& increment, double dt,
                           double c_psi, const SpectralGrid& grid);

/// Ball-quadrature monitor for the local energy (1/2) int_{B(x,rho)} (|v|^2 + |grad u|^2).
class ConcentrationMonitor
{
  public:
    /// Throws std::invalid_argument when rho is below one grid cell or
    /// epsilon1 is not positive.
    ConcentrationMonitor(double rho, double epsilon1, const SpectralGrid& grid);

    double rho() const noexcept { return rho_; }
    double epsilon1() const noexcept { return epsilon1_; }
    int grid_n() const noexcept { return n_; }
    std::span<const kernels::BallOffset> ball_mask() const noexcept { return offsets_; }
    /// Area of the discrete ball (mask size times cell area).
    double ball_area() const noexcept;
    /// Quadrature weight per mask point: pi rho^2 / mask size, exact for constants.
    double point_weight() const noexcept;

  private:
    double rho_;
    double epsilon1_;
    int n_;
    std::vector<kernels::BallOffset> offsets_;
};

struct LocalEnergySup
{
    double value = 0.0;
    std::size_t argmax = 0;
};

/// Sup over grid centers of int_{B(x,rho)} density; ties go to the lowest
/// row-major index.
LocalEnergySup ball_integral_sup(std::span<const double> density,
                                 const ConcentrationMonitor& monitor, const SpectralGrid& grid);

LocalEnergySup local_energy_sup(const VelocityField& v, const DirectorField& u,
                                const ConcentrationMonitor& monitor, const SpectralGrid& grid);

/// Pointwise (|v|^2 + |grad u|^2) / 2.
std::vector<double> energy_density(const VelocityField& v, const Vec3Field& u,
                                   const SpectralGrid& grid);

struct SupSample
{
    double t = 0.0;
    double sup_value = 0.0;
};

/// First sample time with sup_value >= epsilon1; `horizon` when none crosses.
double concentration_time(std::span<const SupSample> samples, double epsilon1, double horizon);

/// int |phi|^4 / [ (int |phi|^2)(int |phi|^2 + |grad phi|^2) ], 0 for phi = 0.
template <std::size_t C>
double ladyzhenskaya_check(const GridField<C>& phi, const SpectralGrid& grid);

struct StruweRatio
{
    double ratio = 0.0;
    /// iint |grad u|^4
    double lhs = 0.0;
    /// sup_{t,x} int_{B(x,rho)} |grad u|^2
    double sup_ball = 0.0;
    /// iint |D^2 u|^2 + |grad u|^2 / rho^2
    double rhs_integral = 0.0;
};

/// Struwe's localized interpolation ratio with v := grad u over a uniformly
/// sampled path. Requires at least 100 samples.
StruweRatio struwe_check(std::span<const Vec3Field> path, double dt, double rho,
                         const SpectralGrid& grid);

/// Default epsilon1 from an empirical Struwe constant: half of 1/mu1.
inline double auto_epsilon1(double mu1) { return 0.5 / mu1; }

/// One sampled point of a monitored trajectory (also the NDJSON record).
struct SampleRecord
{
    double t = 0.0;
    double energy = 0.0;
    double dissipation = 0.0;
    double martingale_x = 0.0;
    double trace_drift = 0.0;
    double residual = 0.0;
    double local_sup = 0.0;
    std::size_t local_argmax = 0;
    double constraint_err = 0.0;
    double divergence_err = 0.0;
    std::optional<double> zeta;
    int bubbling_count = 0;

    double e0 = 0.0;
    double lap_u_integral = 0.0;
    double grad_v_integral = 0.0;
    double grad_u_integral = 0.0;
};

struct L2H2Inputs
{
    double mu1 = 0.0;
    double epsilon1 = 0.0;
    double rho = 0.0;
    /// Concentration time; records after it are ignored.
    double zeta = 0.0;
};

/// RHS - LHS of the absorbed L2-H2 inequality
///   int |Lap u|^2 <= (1 - mu1 eps1)^-1 [E(0) - E(t) - int |grad v|^2 + X(t) + t C_psi
///                                        + mu1 eps1 rho^-2 int |grad u|^2]
/// at the last record with t <= zeta (0 when there is none). Nonnegative
/// means the inequality held on this path. Throws std::invalid_argument
/// unless mu1 * epsilon1 < 1.
double l2h2_monitor(std::span<const SampleRecord> records, const L2H2Inputs& inputs);

/// Weighted distance Psi = (|Lambda^{-1/2}(v1 - v2)|^2 + |u1 - u2|^2) / 2.
double gronwall_psi(const VelocityField& v1, const DirectorField& u1, const VelocityField& v2,
                    const DirectorField& u2, const SpectralGrid& grid);

/// 1 + |v|_{L4}^4 + |grad u|_{L4}^4.
double gronwall_rate(const VelocityField& v, const DirectorField& u, const SpectralGrid& grid);

struct TwinSample
{
    VelocityField v1;
    DirectorField u1;
    VelocityField v2;
    DirectorField u2;
};

struct GronwallResult
{
    double psi0 = 0.0;
    double psi_t = 0.0;
    double log_growth = 0.0;
    double driver = 0.0;
    /// Psi(0) == 0: the uniqueness branch, log_growth is not defined.
    bool identical_data = false;
};

/// Twin trajectories sampled every `dt`. Throws std::domain_error when the
/// data are identical but Psi(T) exceeds 1e-12.
GronwallResult gronwall_monitor(std::span<const TwinSample> samples, double dt,
                                const SpectralGrid& grid);

/// Reporting monitor for the localized energy balance on a smooth cutoff of
/// B(center, rho): tracks both sides and fits the constant C0. Never a gate.
class LocalBalanceMonitor
{
  public:
    LocalBalanceMonitor(std::size_t center, double rho, const VelocityField& v,
                        const DirectorField& u, const NoiseModel& model,
                        const SpectralGrid& grid);

    /// One step from the pre-step state (v, u) with pressure `pressure`.
    void update(const VelocityField& v, const DirectorField& u, const ScalarField& pressure,
                const NoiseIncrement& increment, double dt, const VelocityField& v_next,
                const DirectorField& u_next, const SpectralGrid& grid);

    /// E^phi(t) - E^phi(0) + (1/2) int phi^2 (|grad v|^2 + |tau|^2) - X^phi - C^phi t
    double lhs() const noexcept;
    /// (1 + rho^-2) iint (|v|^3 + (|v|+1)|grad u|^2 + |v||pi|)
    double integral_term() const noexcept { return integral_; }
    /// lhs / integral_term (0 when the integral vanishes).
    double fitted_c0() const noexcept;

  private:
    double local_energy(const VelocityField& v, const DirectorField& u,
                        const SpectralGrid& grid) const;

    double rho_;
    std::vector<double> phi_sq_;
    double c_phi_psi_ = 0.0;
    double e_phi0_ = 0.0;
    double e_phi_ = 0.0;
    double dissipation_ = 0.0;
    double martingale_ = 0.0;
    double t_ = 0.0;
    double integral_ = 0.0;
};

}  // namespace sel
