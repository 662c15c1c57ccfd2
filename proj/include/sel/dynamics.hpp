#pragma once

#include "sel/diagnostics.hpp"
#include "sel/fields.hpp"
#include "sel/noise.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sel {

struct SimState
{
    double t = 0.0;
    VelocityField v;
    DirectorField u;
    std::int64_t step_index = 0;
};

enum class Integrator { ito_semi_implicit, heun_stratonovich };

struct SchemeConfig
{
    double dt = 1e-4;
    std::int64_t n_steps = 0;
    Integrator integrator = Integrator::ito_semi_implicit;
    bool dealias = true;
    double constraint_tol = 1e-10;

    double horizon() const noexcept { return dt * static_cast<double>(n_steps); }
    /// Throws std::invalid_argument on dt <= 0, negative n_steps or tolerance.
    void validate() const;
};

/// Builds a valid state: v is Leray-projected, u renormalized.
SimState make_state(Vec2Field v, Vec3Field u, double t = 0.0);

/// Itô drift coefficient multiplying u that converts the Stratonovich noise
/// u x o dW: equals F_psi = -sum_l psi_l^2 (pointwise).
const ScalarField& ito_correction(const NoiseModel& model);

/// One semi-implicit Euler-Maruyama step driven by a given increment:
///   (1 + dt 4pi^2|k|^2) vhat' = vhat - dt P[v.grad v + div(grad u (.) grad u)]^
///   (1 + dt 4pi^2|k|^2) uhat* = (u + dt(|grad u|^2 u - v.grad u + F_psi u) + u x dW)^
///   u' = u* / |u*|
/// with every product dealiased. The Heun variant replaces u x dW by the
/// midpoint rotation and drops the F_psi drift.
///
/// Throws SingularityError when |u*| < 1e-8 and BlowUpError on non-finite data.
SimState advance(const SimState& state, const NoiseIncrement& increment,
                 const NoiseModel& model, const SchemeConfig& cfg, const SpectralGrid& grid);

/// Samples the increment from `rng` and advances.
SimState step(const SimState& state, const NoiseModel& model, const SchemeConfig& cfg,
              const SpectralGrid& grid, NoiseStreams& rng);

/// Zero-mean pressure solving
///   Lap pi = -d_ij(v^i v^j) - d_ij(d_i u . d_j u).
struct PressureField
{
    ScalarField data;
};

PressureField recover_pressure(const SimState& state, const SpectralGrid& grid);

// ---------------------------------------------------------------------------
// Truncated mild-solution (Picard) map.

/// Smooth cutoff: 1 on [0,1], 0 on [2, inf), C-infinity in between.
double cutoff_theta(double x);

/// Paths sampled at t_m = m * h, m = 0..M.
struct MildPath
{
    double h = 0.0;
    std::vector<Vec2Field> v;
    std::vector<Vec3Field> u;

    std::size_t intervals() const noexcept { return v.empty() ? 0 : v.size() - 1; }
};

struct PicardProblem
{
    Vec2Field v0;
    Vec3Field u0;
    double radius = 10.0;
    double horizon = 1e-3;
    int intervals = 20;
    /// One increment per interval (empty draws for a noiseless model).
    std::vector<NoiseIncrement> noise;
};

/// Cutoff norm max(|w|_{L4}, |y|_{L4} + |grad y|_{L4}).
double picard_cutoff_norm(const Vec2Field& w, const Vec3Field& y, const SpectralGrid& grid);

/// Gamma_{X0,R}(w, y): semigroup convolutions by the left-endpoint rectangle
/// rule with exact per-mode semigroup factors.
MildPath picard_iterate(const MildPath& input, const PicardProblem& problem,
                        const NoiseModel& model, const SpectralGrid& grid);

/// sup_t (|dw|_{L4} + |dy|_{L4} + |grad dy|_{L4}).
double mild_path_distance(const MildPath& a, const MildPath& b, const SpectralGrid& grid);

/// The path constantly equal to the initial data.
MildPath constant_path(const PicardProblem& problem);

// ---------------------------------------------------------------------------
// Continuation across concentration events.

struct MonitorConfig
{
    double rho = 0.1;
    double epsilon1 = 1.0;
    int sample_stride = 1;
};

struct IntervalSummary
{
    double t_start = 0.0;
    double t_end = 0.0;
    double energy_start = 0.0;
    double energy_end = 0.0;
    double max_local_sup = 0.0;
};

struct ContinuationRecord
{
    std::vector<double> bubbling_times;
    int restart_count = 0;
    std::vector<IntervalSummary> intervals;
    bool unresolved = false;
    double unresolved_time = 0.0;
    std::string unresolved_message;
    /// Restarts use the renormalized current state, not a weak limit.
    bool surrogate_restart = true;

    /// J: the number of smooth pieces.
    int pieces() const noexcept { return restart_count + 1; }
};

struct TrajectorySummary
{
    std::vector<SampleRecord> samples;
    SimState final_state;
    EnergyLedger ledger;
    double max_abs_residual = 0.0;
    double max_constraint_err = 0.0;
    double max_divergence_err = 0.0;
};

struct RunResult
{
    TrajectorySummary trajectory;
    ContinuationRecord continuation;
};

using SampleSink = std::function<void(const SampleRecord&, const SimState&)>;

/// Steps to the horizon, sampling every `sample_stride` steps (and at t = 0).
/// A sample whose local sup reaches epsilon1 while armed records tau_j,
/// restarts from the renormalized state and disarms until the sup drops
/// below epsilon1 again. A SingularityError or BlowUpError ends the run and
/// is recorded as an unresolved event.
RunResult run_with_continuation(const SimState& init, const NoiseModel& model,
                                const SchemeConfig& cfg, const MonitorConfig& monitor_cfg,
                                const SpectralGrid& grid, NoiseStreams& rng,
                                const SampleSink& sink = {});

}  // namespace sel
