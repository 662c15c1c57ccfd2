#include "sel/spectral.hpp"

#include "sel/kernels.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

namespace sel {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

using Index = std::ptrdiff_t;

}  // namespace

struct SpectralGrid::Plans
{
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;

    explicit Plans(int n)
    {
        std::vector<double> real(static_cast<std::size_t>(n) * n);
        std::vector<Complex> modes(static_cast<std::size_t>(n) * (n / 2 + 1));
        auto* cplx = reinterpret_cast<fftw_complex*>(modes.data());
        std::lock_guard lock(planner_mutex());
        forward = fftw_plan_dft_r2c_2d(n, n, real.data(), cplx, FFTW_ESTIMATE | FFTW_UNALIGNED);
        inverse = fftw_plan_dft_c2r_2d(n, n, cplx, real.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_DESTROY_INPUT);
        if (forward == nullptr || inverse == nullptr) {
            throw std::runtime_error("SpectralGrid: FFTW planning failed");
        }
    }
    Plans(const Plans&) = delete;
    Plans& operator=(const Plans&) = delete;
    ~Plans()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(inverse);
    }
};

SpectralGrid::SpectralGrid(int n_points) : n_(n_points)
{
    if (n_points < 8 || n_points % 2 != 0) {
        throw std::invalid_argument("SpectralGrid: N must be even and >= 8, got " +
                                    std::to_string(n_points));
    }
    const int half = n_half();
    const int nyquist = n_ / 2;
    const int cutoff = n_ / 3;
    k1_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        k1_[static_cast<std::size_t>(i)] = i <= nyquist ? i : i - n_;
    }
    const std::size_t total = spectral_size();
    k1_eff_.resize(total);
    k2_eff_.resize(total);
    k_sq_.resize(total);
    weight_.resize(total);
    dealias_.resize(total);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < half; ++j) {
            const std::size_t m = static_cast<std::size_t>(i) * half + static_cast<std::size_t>(j);
            const int a = k1_[static_cast<std::size_t>(i)];
            const int b = j;
            const double ae = (a == nyquist) ? 0.0 : a;
            const double be = (b == nyquist) ? 0.0 : b;
            k1_eff_[m] = ae;
            k2_eff_[m] = be;
            k_sq_[m] = ae * ae + be * be;
            weight_[m] = (j == 0 || j == nyquist) ? 1.0 : 2.0;
            dealias_[m] = (std::abs(a) <= cutoff && std::abs(b) <= cutoff) ? 1 : 0;
        }
    }
    plans_ = std::make_shared<const Plans>(n_);
}

std::size_t SpectralGrid::mode_index(int a, int b) const
{
    if (b < 0 || b > n_ / 2 || a <= -n_ / 2 || a > n_ / 2) {
        throw std::out_of_range("SpectralGrid::mode_index: wavenumber outside the grid");
    }
    const int i = a >= 0 ? a : a + n_;
    return static_cast<std::size_t>(i) * n_half() + static_cast<std::size_t>(b);
}

void SpectralGrid::forward(std::span<const double> values, std::span<Complex> modes) const
{
    if (values.size() != size() || modes.size() != spectral_size()) {
        throw std::invalid_argument("SpectralGrid::forward: size mismatch");
    }
    fftw_execute_dft_r2c(plans_->forward, const_cast<double*>(values.data()),
                         reinterpret_cast<fftw_complex*>(modes.data()));
    const double scale = 1.0 / static_cast<double>(size());
    for (Complex& c : modes) {
        c *= scale;
    }
}

void SpectralGrid::inverse(std::span<const Complex> modes, std::span<double> values) const
{
    if (values.size() != size() || modes.size() != spectral_size()) {
        throw std::invalid_argument("SpectralGrid::inverse: size mismatch");
    }
    Spectrum scratch(modes.begin(), modes.end());
    fftw_execute_dft_c2r(plans_->inverse, reinterpret_cast<fftw_complex*>(scratch.data()),
                         values.data());
}

Spectrum SpectralGrid::forward(std::span<const double> values) const
{
    Spectrum out(spectral_size());
    forward(values, out);
    return out;
}

std::vector<double> SpectralGrid::inverse(std::span<const Complex> modes) const
{
    std::vector<double> out(size());
    inverse(modes, out);
    return out;
}

void require_finite(std::span<const double> values, const char* what)
{
    for (double x : values) {
        if (!std::isfinite(x)) {
            throw std::domain_error(std::string(what) + ": non-finite sample in input field");
        }
    }
}

namespace {

// modes *= i * 2 pi * k_axis (Nyquist components already zero in k_eff).
void differentiate(Spectrum& modes, int axis, const SpectralGrid& grid)
{
#pragma omp parallel for schedule(static)
    for (Index s = 0; s < static_cast<Index>(modes.size()); ++s) {
        const auto m = static_cast<std::size_t>(s);
        const double k = axis == 0 ? grid.k1_eff(m) : grid.k2_eff(m);
        modes[m] *= Complex(0.0, kTwoPi * k);
    }
}

std::vector<double> laplace_symbol(const SpectralGrid& grid)
{
    std::vector<double> sym(grid.spectral_size());
    for (std::size_t m = 0; m < sym.size(); ++m) {
        sym[m] = -4.0 * kPi * kPi * grid.k_sq(m);
    }
    return sym;
}

}  // namespace

template <std::size_t C>
GridField<C> partial(const GridField<C>& f, int axis, const SpectralGrid& grid)
{
    require_grid(f, grid, "partial");
    GridField<C> out(grid);
    Spectrum modes(grid.spectral_size());
    for (std::size_t c = 0; c < C; ++c) {
        grid.forward(f.channel(c), modes);
        differentiate(modes, axis, grid);
        grid.inverse(modes, out.channel(c));
    }
    return out;
}

Vec2Field gradient(const ScalarField& f, const SpectralGrid& grid)
{
    require_grid(f, grid, "gradient");
    require_finite(f, "gradient");
    Vec2Field out(grid);
    const Spectrum base = grid.forward(f.channel(0));
    for (int axis = 0; axis < 2; ++axis) {
        Spectrum modes = base;
        differentiate(modes, axis, grid);
        grid.inverse(modes, out.channel(static_cast<std::size_t>(axis)));
    }
    return out;
}

template <std::size_t C>
GridField<C> laplacian(const GridField<C>& f, const SpectralGrid& grid)
{
    require_grid(f, grid, "laplacian");
    GridField<C> out(grid);
    const std::vector<double> sym = laplace_symbol(grid);
    Spectrum modes(grid.spectral_size());
    for (std::size_t c = 0; c < C; ++c) {
        grid.forward(f.channel(c), modes);
        kernels::scale_modes(modes, sym);
        grid.inverse(modes, out.channel(c));
    }
    return out;
}

ScalarField divergence(const Vec2Field& f, const SpectralGrid& grid)
{
    require_grid(f, grid, "divergence");
    Spectrum a = grid.forward(f.channel(0));
    Spectrum b = grid.forward(f.channel(1));
    differentiate(a, 0, grid);
    differentiate(b, 1, grid);
    for (std::size_t m = 0; m < a.size(); ++m) {
        a[m] += b[m];
    }
    ScalarField out(grid);
    grid.inverse(a, out.channel(0));
    return out;
}

ScalarField curl(const Vec2Field& f, const SpectralGrid& grid)
{
    require_grid(f, grid, "curl");
    Spectrum a = grid.forward(f.channel(1));
    Spectrum b = grid.forward(f.channel(0));
    differentiate(a, 0, grid);
    differentiate(b, 1, grid);
    for (std::size_t m = 0; m < a.size(); ++m) {
        a[m] -= b[m];
    }
    ScalarField out(grid);
    grid.inverse(a, out.channel(0));
    return out;
}

void leray_project_modes(Spectrum& first, Spectrum& second, const SpectralGrid& grid)
{
#pragma omp parallel for schedule(static)
    for (Index s = 0; s < static_cast<Index>(first.size()); ++s) {
        const auto m = static_cast<std::size_t>(s);
        const double ks = grid.k_sq(m);
        if (ks == 0.0) {
            continue;
        }
        const double a = grid.k1_eff(m);
        const double b = grid.k2_eff(m);
        const Complex f1 = first[m];
        const Complex f2 = second[m];
        const Complex kf = (a * f1 + b * f2) / ks;
        first[m] = f1 - a * kf;
        second[m] = f2 - b * kf;
    }
}

Vec2Field leray_project(const Vec2Field& f, const SpectralGrid& grid)
{
    require_grid(f, grid, "leray_project");
    require_finite(f, "leray_project");
    Spectrum a = grid.forward(f.channel(0));
    Spectrum b = grid.forward(f.channel(1));
    leray_project_modes(a, b, grid);
    Vec2Field out(grid);
    grid.inverse(a, out.channel(0));
    grid.inverse(b, out.channel(1));
    return out;
}

ScalarField inv_laplacian_zero_mean(const ScalarField& f, const SpectralGrid& grid)
{
    require_grid(f, grid, "inv_laplacian_zero_mean");
    require_finite(f, "inv_laplacian_zero_mean");
    const double m = mean(f.channel(0));
    if (std::abs(m) > 1e-10) {
        throw std::domain_error("inv_laplacian_zero_mean: source has mean " + std::to_string(m) +
                                "; the periodic Poisson problem is unsolvable");
    }
    Spectrum modes = grid.forward(f.channel(0));
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const double ks = grid.k_sq(k);
        modes[k] = ks == 0.0 ? Complex(0.0, 0.0) : modes[k] / (-4.0 * kPi * kPi * ks);
    }
    ScalarField out(grid);
    grid.inverse(modes, out.channel(0));
    return out;
}

template <std::size_t C>
GridField<C> semigroup_apply(const GridField<C>& f, double t, SemigroupKind kind,
                             const SpectralGrid& grid)
{
    require_grid(f, grid, "semigroup_apply");
    if (!(t >= 0.0)) {
        throw std::invalid_argument("semigroup_apply: time must be nonnegative");
    }
    if (kind == SemigroupKind::stokes && C != 2) {
        throw std::invalid_argument("semigroup_apply: the Stokes semigroup acts on 2-vector fields");
    }
    std::vector<double> decay(grid.spectral_size());
    for (std::size_t m = 0; m < decay.size(); ++m) {
        const double lam = 4.0 * kPi * kPi * grid.k_sq(m);
        decay[m] = kind == SemigroupKind::biharmonic ? std::exp(-lam * lam * t) : std::exp(-lam * t);
    }
    std::array<Spectrum, C> modes;
    for (std::size_t c = 0; c < C; ++c) {
        modes[c] = grid.forward(f.channel(c));
        kernels::scale_modes(modes[c], decay);
    }
    if constexpr (C == 2) {
        if (kind == SemigroupKind::stokes) {
            leray_project_modes(modes[0], modes[1], grid);
        }
    }
    GridField<C> out(grid);
    for (std::size_t c = 0; c < C; ++c) {
        grid.inverse(modes[c], out.channel(c));
    }
    return out;
}

void dealias_modes(Spectrum& modes, const SpectralGrid& grid)
{
    for (std::size_t m = 0; m < modes.size(); ++m) {
        if (!grid.dealias_keep(m)) {
            modes[m] = Complex(0.0, 0.0);
        }
    }
}

template <std::size_t C>
GridField<C> dealias(const GridField<C>& f, const SpectralGrid& grid)
{
    require_grid(f, grid, "dealias");
    GridField<C> out(grid);
    Spectrum modes(grid.spectral_size());
    for (std::size_t c = 0; c < C; ++c) {
        grid.forward(f.channel(c), modes);
        dealias_modes(modes, grid);
        grid.inverse(modes, out.channel(c));
    }
    return out;
}

double max_divergence(const Vec2Field& f, const SpectralGrid& grid)
{
    return kernels::max_abs(divergence(f, grid).channel(0));
}

double integrate(std::span<const double> f, const SpectralGrid& grid)
{
    return kernels::sum(f) * grid.cell_area();
}

double mean(std::span<const double> f)
{
    return f.empty() ? 0.0 : kernels::sum(f) / static_cast<double>(f.size());
}

double inner(std::span<const double> a, std::span<const double> b, const SpectralGrid& grid)
{
    return kernels::dot(a, b) * grid.cell_area();
}

double spectral_norm_sq(std::span<const Complex> modes, const SpectralGrid& grid)
{
    double s = 0.0;
    for (std::size_t m = 0; m < modes.size(); ++m) {
        s += grid.hermitian_weight(m) * std::norm(modes[m]);
    }
    return s;
}

template <std::size_t C>
double gradient_norm_sq(const GridField<C>& f, const SpectralGrid& grid)
{
    double s = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
        s += l2_norm_sq(partial(f, axis, grid), grid);
    }
    return s;
}

template <std::size_t C>
double l4_norm_pow4(const GridField<C>& f, const SpectralGrid& grid)
{
    std::vector<double> sq(f.points(), 0.0);
    for (std::size_t c = 0; c < C; ++c) {
        const auto ch = f.channel(c);
        for (std::size_t i = 0; i < sq.size(); ++i) {
            sq[i] += ch[i] * ch[i];
        }
    }
    return inner(sq, sq, grid);
}

template <std::size_t C>
double inverse_lambda_norm_sq(const GridField<C>& f, const SpectralGrid& grid)
{
    double s = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
        const Spectrum modes = grid.forward(f.channel(c));
        for (std::size_t m = 0; m < modes.size(); ++m) {
            s += grid.hermitian_weight(m) * std::norm(modes[m]) /
                 (1.0 + 4.0 * kPi * kPi * grid.k_sq(m));
        }
    }
    return s;
}

#define SEL_INSTANTIATE(C)                                                                     \
    template GridField<C> partial(const GridField<C>&, int, const SpectralGrid&);               \
    template GridField<C> laplacian(const GridField<C>&, const SpectralGrid&);                  \
    template GridField<C> semigroup_apply(const GridField<C>&, double, SemigroupKind,           \
                                          const SpectralGrid&);                                 \
    template GridField<C> dealias(const GridField<C>&, const SpectralGrid&);                    \
    template double gradient_norm_sq(const GridField<C>&, const SpectralGrid&);                 \
    template double l4_norm_pow4(const GridField<C>&, const SpectralGrid&);                     \
    template double inverse_lambda_norm_sq(const GridField<C>&, const SpectralGrid&);

SEL_INSTANTIATE(1)
SEL_INSTANTIATE(2)
SEL_INSTANTIATE(3)

#undef SEL_INSTANTIATE

}  // namespace sel
