#pragma once

#include "sel/dynamics.hpp"
#include "sel/presets.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace sel {

/// |sum_i (zeta x e_i) x e_i + 2 zeta|.
double check_geometric_fact(const std::array<double, 3>& zeta);

struct TraceReport
{
    /// max over the grid of the A1 integrand, summed over l, j, alpha.
    double a1_max_abs = 0.0;
    double a1_value = 0.0;
    double a2_value = 0.0;
    /// C_psi recomputed from the model by spectral differentiation. Direct
    /// summation gives A2 = C_psi (sum_j |u x e_j|^2 = 2 cancels the 1/2).
    double a2_expected = 0.0;
    /// The doubled value 2 C_psi quoted alongside the trace identity.
    double a2_doubled = 0.0;
    double c_psi = 0.0;
    /// Worst geometric-identity residual over the unit vectors of u.
    double geometric_residual = 0.0;
};

/// A1 = 1/2 sum <d_a u, (u x psi_l e_j) x d_a psi_l e_j>,
/// A2 = 1/2 sum [<u x d_a psi_l e_j, d_a u x psi_l e_j> + |u x d_a psi_l e_j|^2],
/// both by direct summation over l, j = 1..3, alpha = 1..2.
TraceReport trace_terms(const DirectorField& u, const NoiseModel& model, const SpectralGrid& grid);

struct StratoConfig
{
    std::vector<double> dts{1e-3, 5e-4, 2.5e-4};
    double horizon = 0.1;
    int paths = 200;
    /// Negative control: uses -F_psi in place of F_psi in the Ito drift.
    bool flip_correction_sign = false;
};

struct StratoResult
{
    std::vector<double> dts;
    /// Ensemble mean over paths of sup_t |u_heun - u_ito|_{L2}, one per dt.
    std::vector<double> strong_error;
    /// log2-slope between consecutive dts: log(e_i / e_{i+1}) / log(dt_i / dt_{i+1}).
    std::vector<double> observed_order;
    /// max over paths, times and grid points of | |u_heun| - 1 |, no renormalization.
    double heun_norm_drift = 0.0;

    double min_order() const;
};

/// Pure rotation problem du = u x o dW integrated pointwise by Heun and by
/// Ito-Euler with drift F_psi u, on the same Brownian path (finest dt summed
/// into the coarser ones). Every dt must be an integer multiple of the finest.
StratoResult strato_ito_equivalence(const DirectorField& u0, const NoiseModel& model,
                                    const StratoConfig& cfg, const SpectralGrid& grid);

struct GalerkinConfig
{
    SchemeConfig scheme;
    std::vector<int> truncations{4, 9, 16, 25};
    double decay_exponent = 3.0;
    double amplitude = 1.0;
    std::uint64_t seed = 0;
    /// Optional seed per truncation; all entries must equal `seed`.
    std::vector<std::uint64_t> seeds;
};

/// sup_t (|v_{n_{i+1}} - v_{n_i}|_{L2} + |grad(u_{n_{i+1}} - u_{n_i})|_{L2}) for
/// consecutive truncations sharing mode-wise Brownian paths.
std::vector<double> galerkin_cauchy(const SimState& init, const GalerkinConfig& cfg,
                                    const SpectralGrid& grid);

struct GalerkinEnsemble
{
    std::vector<std::vector<double>> distances;
    /// Fraction of paths whose distance sequence is strictly decreasing.
    double fraction_decreasing = 0.0;
};

/// galerkin_cauchy over `paths` seeds derive_seed(master_seed, p).
GalerkinEnsemble galerkin_ensemble(const SimState& init, const GalerkinConfig& base, int paths,
                                   std::uint64_t master_seed, const SpectralGrid& grid);

struct PicardReport
{
    /// |Gamma(p2) - Gamma(p1)| / |p2 - p1| per random input pair.
    std::vector<double> lipschitz_ratios;
    double max_lipschitz = 0.0;
    /// |X_{k+1} - X_k| along the fixed-point iteration from the constant path.
    std::vector<double> iterate_differences;
    /// Consecutive ratios of iterate_differences, stopped at the round-off floor.
    std::vector<double> contraction_ratios;
    double max_contraction = 0.0;
};

/// Random input pairs are band-limited (|k| <= 4) paths whose cutoff norms
/// straddle the radius, so both branches of the cutoff are exercised.
PicardReport measure_picard(const PicardProblem& problem, const NoiseModel& model, int pairs,
                            int iterations, std::uint64_t seed, const SpectralGrid& grid);

/// Noise increments for a Picard problem, one per interval.
std::vector<NoiseIncrement> picard_noise(const NoiseModel& model, double horizon, int intervals,
                                         std::uint64_t seed);

struct InequalityReport
{
    std::vector<double> ladyzhenskaya;
    double constant_ratio = 0.0;
    double mu0 = 0.0;
    std::vector<double> struwe;
    double mu1 = 0.0;
    double epsilon1 = 0.0;
};

/// Ladyzhenskaya ratios of `fields` random band-limited scalars and Struwe
/// ratios of `paths` random director paths (100 samples each) at radius rho.
InequalityReport inequality_corpora(const SpectralGrid& grid, double rho, int fields, int paths,
                                    std::uint64_t seed);

/// state with size * (basis function `mode`) added to director component
/// `component`, renormalized.
SimState perturb_director(const SimState& state, std::size_t mode, int component, double size,
                          const SpectralGrid& grid);

/// Twin trajectories from a and b driven by one noise path (model.seed).
GronwallResult twin_run(const SimState& a, const SimState& b, const NoiseModel& model,
                        const SchemeConfig& cfg, const SpectralGrid& grid);

/// Empirical mu1 from the Struwe corpus alone.
double empirical_mu1(const SpectralGrid& grid, double rho, int paths, std::uint64_t seed);

}  // namespace sel
