#pragma once

#include "sel/spectral.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace sel {

/// One real Fourier basis function of L^2(torus):
///   constant: 1,  cosine: sqrt(2) cos(2 pi k.x),  sine: sqrt(2) sin(2 pi k.x).
struct FourierMode
{
    enum class Kind { constant, cosine, sine };
    Kind kind = Kind::constant;
    int k1 = 0;
    int k2 = 0;

    int k_sq() const noexcept { return k1 * k1 + k2 * k2; }
    friend bool operator==(const FourierMode&, const FourierMode&) = default;
};

/// Real orthonormal basis in the fixed order used for every noise model.
///
/// Wavenumbers are taken from the half plane {k1 > 0} u {k1 = 0, k2 > 0}
/// restricted to the dealiased box |k1|, |k2| <= floor(N/3), sorted by
/// (|k|^2, k1, k2) ascending; each wavenumber contributes its cosine and then
/// its sine. The constant function comes first. The first five entries are
///   1, sqrt2 cos 2pi x2, sqrt2 sin 2pi x2, sqrt2 cos 2pi x1, sqrt2 sin 2pi x1.
std::vector<FourierMode> real_fourier_basis(const SpectralGrid& grid);

ScalarField mode_field(const FourierMode& mode, const SpectralGrid& grid);

/// psi as the radial multiplier amplitude * (1 + 4 pi^2 |k|^2)^(-s/2).
double psi_multiplier(int k_sq, double amplitude, double decay_exponent);

/// Truncated trace-class Wiener structure W_n = sum_{l<n} B_l psi f_l.
struct NoiseModel
{
    int truncation_n = 0;
    double decay_exponent = 0.0;
    double amplitude = 0.0;
    std::uint64_t seed = 0;
    std::vector<FourierMode> modes;
    /// psi_l = psi f_l on the grid.
    std::vector<ScalarField> basis_fields;
    /// F_psi(x) = -sum_l psi_l(x)^2.
    ScalarField f_psi;
    /// C_psi = sum_l |grad psi_l|^2_{L2}, from the closed form per mode.
    double c_psi = 0.0;
};

/// Model built from the first n entries of real_fourier_basis. Throws
/// std::invalid_argument when n exceeds the available dealiased modes.
NoiseModel build_noise_model(int n, double decay_exponent, double amplitude,
                             const SpectralGrid& grid, std::uint64_t seed);

/// Model built from an explicit list of basis functions.
NoiseModel build_noise_model(std::vector<FourierMode> modes, double decay_exponent,
                             double amplitude, const SpectralGrid& grid, std::uint64_t seed);

/// C_psi recomputed from the basis fields by spectral differentiation.
double recompute_c_psi(const NoiseModel& model, const SpectralGrid& grid);

/// SplitMix64 finalizer applied to master + (index + 1) * golden gamma. Used to
/// derive one independent seed per noise mode and per ensemble path.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Per-mode Brownian streams. Stream l is seeded with derive_seed(seed, l) so
/// the draws for mode l never depend on how many modes a model retains.
class NoiseStreams
{
  public:
    NoiseStreams(std::uint64_t seed, int n_modes);

    int n_modes() const noexcept { return static_cast<int>(engines_.size()); }
    std::uint64_t seed() const noexcept { return seed_; }

    /// Three independent standard normals from the stream of `mode`.
    std::array<double, 3> standard_normals(int mode);

  private:
    std::uint64_t seed_;
    std::vector<std::mt19937_64> engines_;
    std::vector<std::normal_distribution<double>> normals_;
};

struct NoiseIncrement
{
    /// Delta beta_l in R^3, one per retained mode.
    std::vector<std::array<double, 3>> draws;
    /// Delta W = sum_l Delta beta_l psi_l.
    Vec3Field field;
};

/// Draws 3 n independent N(0, dt) values in mode order and assembles Delta W.
NoiseIncrement sample_increment(const NoiseModel& model, double dt, NoiseStreams& rng);

/// Assembles sum_l draws_l psi_l.
Vec3Field assemble_increment(const NoiseModel& model,
                             const std::vector<std::array<double, 3>>& draws,
                             const SpectralGrid& grid);

struct CovarianceEstimate
{
    double estimate = 0.0;
    double standard_error = 0.0;
    /// min(t, s) sum_i <psi* a^i, psi* b^i>.
    double closed_form = 0.0;

    bool agrees(double n_sigma = 4.0) const;
};

/// Monte-Carlo estimate of E[<W(t), a><W(s), b>] next to its closed form.
CovarianceEstimate covariance_estimate(const NoiseModel& model, const Vec3Field& a,
                                       const Vec3Field& b, double t, double s, int paths,
                                       const SpectralGrid& grid);

}  // namespace sel
