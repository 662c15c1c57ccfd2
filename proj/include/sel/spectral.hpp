#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace sel {

using Complex = std::complex<double>;
/// Half-complex spectrum of one real channel, N x (N/2+1), row-major.
using Spectrum = std::vector<Complex>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Uniform N x N grid on the unit torus (0,1)^2 together with its wavenumber
/// tables and FFT plans.
///
/// Physical sample (a, b) sits at x = (a/N, b/N) and is stored at a*N + b.
/// Spectral coefficient (i, j) is stored at i*(N/2+1) + j and carries the
/// wavenumber k = (k1(i), j). Coefficients are normalized Fourier
/// coefficients, f(x) = sum_k fhat(k) exp(2 pi i k.x).
///
/// The object is immutable after construction and can be shared between
/// threads.
class SpectralGrid
{
  public:
    explicit SpectralGrid(int n_points);

    int n() const noexcept { return n_; }
    int n_half() const noexcept { return n_ / 2 + 1; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }
    std::size_t spectral_size() const noexcept
    {
        return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_half());
    }
    double spacing() const noexcept { return 1.0 / n_; }
    double cell_area() const noexcept { return 1.0 / (static_cast<double>(n_) * n_); }
    double coordinate(int index) const noexcept { return static_cast<double>(index) / n_; }

    /// Integer wavenumbers of spectral slot `mode` (range -N/2+1..N/2).
    int k1(std::size_t mode) const noexcept { return k1_[mode / n_half()]; }
    int k2(std::size_t mode) const noexcept { return static_cast<int>(mode % n_half()); }

    /// Wavenumbers used by derivative multipliers: Nyquist components are zero.
    double k1_eff(std::size_t mode) const noexcept { return k1_eff_[mode]; }
    double k2_eff(std::size_t mode) const noexcept { return k2_eff_[mode]; }
    /// |k_eff|^2 (integer valued).
    double k_sq(std::size_t mode) const noexcept { return k_sq_[mode]; }
    /// True iff |k1|, |k2| <= floor(N/3).
    bool dealias_keep(std::size_t mode) const noexcept { return dealias_[mode] != 0; }
    int dealias_cutoff() const noexcept { return n_ / 3; }

    /// Multiplicity of a half-complex slot in a full-spectrum sum (1 or 2).
    double hermitian_weight(std::size_t mode) const noexcept { return weight_[mode]; }

    /// Spectral slot holding wavenumber (k1, k2); k2 must be in [0, N/2].
    std::size_t mode_index(int k1, int k2) const;

    void forward(std::span<const double> values, std::span<Complex> modes) const;
    void inverse(std::span<const Complex> modes, std::span<double> values) const;
    Spectrum forward(std::span<const double> values) const;
    std::vector<double> inverse(std::span<const Complex> modes) const;

  private:
    struct Plans;

    int n_;
    std::vector<int> k1_;
    std::vector<double> k1_eff_;
    std::vector<double> k2_eff_;
    std::vector<double> k_sq_;
    std::vector<double> weight_;
    std::vector<std::uint8_t> dealias_;
    std::shared_ptr<const Plans> plans_;
};

/// Real samples on a SpectralGrid with a fixed number of channels, stored
/// channel after channel, each channel row-major.
template <std::size_t Channels>
class GridField
{
  public:
    static constexpr std::size_t channels = Channels;

    GridField() = default;
    explicit GridField(int n)
        : n_(n), data_(Channels * static_cast<std::size_t>(n) * n, 0.0)
    {
    }
    explicit GridField(const SpectralGrid& grid) : GridField(grid.n()) {}

    int n() const noexcept { return n_; }
    std::size_t points() const noexcept { return static_cast<std::size_t>(n_) * n_; }

    std::span<double> channel(std::size_t c)
    {
        return {data_.data() + c * points(), points()};
    }
    std::span<const double> channel(std::size_t c) const
    {
        return {data_.data() + c * points(), points()};
    }
    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    double& operator()(std::size_t c, std::size_t i) { return data_[c * points() + i]; }
    double operator()(std::size_t c, std::size_t i) const { return data_[c * points() + i]; }

    friend bool operator==(const GridField&, const GridField&) = default;

  private:
    int n_ = 0;
    std::vector<double> data_;
};

using ScalarField = GridField<1>;
using Vec2Field = GridField<2>;
using Vec3Field = GridField<3>;

enum class SemigroupKind { heat, stokes, biharmonic };

/// Throws std::domain_error if any sample is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);

template <std::size_t C>
void require_finite(const GridField<C>& f, const char* what)
{
    require_finite(f.values(), what);
}

template <std::size_t C>
void require_grid(const GridField<C>& f, const SpectralGrid& grid, const char* what)
{
    if (f.n() != grid.n()) {
        throw std::invalid_argument(std::string(what) + ": field resolution does not match grid");
    }
}

Vec2Field gradient(const ScalarField& f, const SpectralGrid& grid);
/// Partial derivative along axis 0 or 1 of every channel.
template <std::size_t C>
GridField<C> partial(const GridField<C>& f, int axis, const SpectralGrid& grid);
template <std::size_t C>
GridField<C> laplacian(const GridField<C>& f, const SpectralGrid& grid);
ScalarField divergence(const Vec2Field& f, const SpectralGrid& grid);
/// Scalar curl d1 f2 - d2 f1.
ScalarField curl(const Vec2Field& f, const SpectralGrid& grid);

/// Helmholtz-Leray projection onto divergence-free fields. The k = 0 mode is
/// passed through.
Vec2Field leray_project(const Vec2Field& f, const SpectralGrid& grid);
void leray_project_modes(Spectrum& first, Spectrum& second, const SpectralGrid& grid);

/// Zero-mean solution g of Laplace(g) = f. Throws std::domain_error when the
/// mean of f exceeds 1e-10 in magnitude.
ScalarField inv_laplacian_zero_mean(const ScalarField& f, const SpectralGrid& grid);

/// exp(t Laplace) (heat), projected heat (stokes), exp(-t Laplace^2) (biharmonic).
template <std::size_t C>
GridField<C> semigroup_apply(const GridField<C>& f, double t, SemigroupKind kind,
                             const SpectralGrid& grid);

/// Applies the 2/3-rule mask to every channel.
template <std::size_t C>
GridField<C> dealias(const GridField<C>& f, const SpectralGrid& grid);
void dealias_modes(Spectrum& modes, const SpectralGrid& grid);

/// Max over the grid of the spectral divergence magnitude.
double max_divergence(const Vec2Field& f, const SpectralGrid& grid);

/// Grid quadrature of f over the unit torus (fixed summation order).
double integrate(std::span<const double> f, const SpectralGrid& grid);
double mean(std::span<const double> f);
/// Integral of the pointwise product (fixed summation order).
double inner(std::span<const double> a, std::span<const double> b, const SpectralGrid& grid);

template <std::size_t C>
double l2_norm_sq(const GridField<C>& f, const SpectralGrid& grid)
{
    double s = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
        s += inner(f.channel(c), f.channel(c), grid);
    }
    return s;
}

/// Sum over all wavenumbers of |fhat(k)|^2 from a half-complex spectrum.
double spectral_norm_sq(std::span<const Complex> modes, const SpectralGrid& grid);

/// Squared L^2 norm of the gradient of every channel, summed.
template <std::size_t C>
double gradient_norm_sq(const GridField<C>& f, const SpectralGrid& grid);

/// Integral of |f|^4 with |f| the Euclidean norm over channels.
template <std::size_t C>
double l4_norm_pow4(const GridField<C>& f, const SpectralGrid& grid);

/// |Lambda^{-1/2} f|^2 with Lambda the multiplier 1 + 4 pi^2 |k|^2.
template <std::size_t C>
double inverse_lambda_norm_sq(const GridField<C>& f, const SpectralGrid& grid);

}  // namespace sel
