#include "sel/noise.hpp"

#include "sel/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace sel {

std::vector<FourierMode> real_fourier_basis(const SpectralGrid& grid)
{
    const int cutoff = grid.dealias_cutoff();
    std::vector<std::array<int, 2>> half_plane;
    for (int a = 0; a <= cutoff; ++a) {
        for (int b = -cutoff; b <= cutoff; ++b) {
            if (a > 0 || b > 0) {
                half_plane.push_back({a, b});
            }
        }
    }
    std::sort(half_plane.begin(), half_plane.end(), [](const auto& p, const auto& q) {
        return std::make_tuple(p[0] * p[0] + p[1] * p[1], p[0], p[1]) <
               std::make_tuple(q[0] * q[0] + q[1] * q[1], q[0], q[1]);
    });
    std::vector<FourierMode> basis;
    basis.reserve(1 + 2 * half_plane.size());
    basis.push_back({FourierMode::Kind::constant, 0, 0});
    for (const auto& k : half_plane) {
        basis.push_back({FourierMode::Kind::cosine, k[0], k[1]});
        basis.push_back({FourierMode::Kind::sine, k[0], k[1]});
    }
    return basis;
}

ScalarField mode_field(const FourierMode& mode, const SpectralGrid& grid)
{
    ScalarField f(grid);
    const int n = grid.n();
    const double root2 = std::sqrt(2.0);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const double phase =
                kTwoPi * (mode.k1 * grid.coordinate(a) + mode.k2 * grid.coordinate(b));
            double value = 1.0;
            if (mode.kind == FourierMode::Kind::cosine) {
                value = root2 * std::cos(phase);
            } else if (mode.kind == FourierMode::Kind::sine) {
                value = root2 * std::sin(phase);
            }
            f(0, static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)) = value;
        }
    }
    return f;
}

double psi_multiplier(int k_sq, double amplitude, double decay_exponent)
{
    return amplitude * std::pow(1.0 + 4.0 * kPi * kPi * k_sq, -0.5 * decay_exponent);
}

NoiseModel build_noise_model(std::vector<FourierMode> modes, double decay_exponent,
                             double amplitude, const SpectralGrid& grid, std::uint64_t seed)
{
    if (!(decay_exponent >= 0.0)) {
        throw std::invalid_argument("build_noise_model: decay exponent must be >= 0");
    }
    if (!std::isfinite(amplitude)) {
        throw std::invalid_argument("build_noise_model: amplitude must be finite");
    }
    const int cutoff = grid.dealias_cutoff();
    for (const FourierMode& m : modes) {
        if (std::abs(m.k1) > cutoff || std::abs(m.k2) > cutoff) {
            throw std::invalid_argument("build_noise_model: mode outside the dealiased range");
        }
    }
    NoiseModel model;
    model.truncation_n = static_cast<int>(modes.size());
    model.decay_exponent = decay_exponent;
    model.amplitude = amplitude;
    model.seed = seed;
    model.modes = std::move(modes);
    model.f_psi = ScalarField(grid);
    auto f_psi = model.f_psi.channel(0);
    for (const FourierMode& m : model.modes) {
        ScalarField psi = mode_field(m, grid);
        const double scale = psi_multiplier(m.k_sq(), amplitude, decay_exponent);
        for (double& x : psi.values()) {
            x *= scale;
        }
        for (std::size_t i = 0; i < f_psi.size(); ++i) {
            f_psi[i] -= psi(0, i) * psi(0, i);
        }
        model.c_psi += scale * scale * 4.0 * kPi * kPi * m.k_sq();
        model.basis_fields.push_back(std::move(psi));
    }
    return model;
}

NoiseModel build_noise_model(int n, double decay_exponent, double amplitude,
                             const SpectralGrid& grid, std::uint64_t seed)
{
    if (n < 0) {
        throw std::invalid_argument("build_noise_model: truncation must be >= 0");
    }
    std::vector<FourierMode> basis = real_fourier_basis(grid);
    if (static_cast<std::size_t>(n) > basis.size()) {
        throw std::invalid_argument("build_noise_model: truncation " + std::to_string(n) +
                                    " exceeds the " + std::to_string(basis.size()) +
                                    " dealiased modes of an N=" + std::to_string(grid.n()) +
                                    " grid");
    }
    basis.resize(static_cast<std::size_t>(n));
    return build_noise_model(std::move(basis), decay_exponent, amplitude, grid, seed);
}

double recompute_c_psi(const NoiseModel& model, const SpectralGrid& grid)
{
    double total = 0.0;
    for (const ScalarField& psi : model.basis_fields) {
        total += gradient_norm_sq(psi, grid);
    }
    return total;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

NoiseStreams::NoiseStreams(std::uint64_t seed, int n_modes) : seed_(seed)
{
    if (n_modes < 0) {
        throw std::invalid_argument("NoiseStreams: negative mode count");
    }
    engines_.reserve(static_cast<std::size_t>(n_modes));
    for (int l = 0; l < n_modes; ++l) {
        engines_.emplace_back(derive_seed(seed, static_cast<std::uint64_t>(l)));
    }
    normals_.resize(static_cast<std::size_t>(n_modes));
}

std::array<double, 3> NoiseStreams::standard_normals(int mode)
{
    auto& engine = engines_.at(static_cast<std::size_t>(mode));
    auto& normal = normals_[static_cast<std::size_t>(mode)];
    return {normal(engine), normal(engine), normal(engine)};
}

namespace {

Vec3Field assemble(const NoiseModel& model, const std::vector<std::array<double, 3>>& draws,
                   int n)
{
    Vec3Field field(n);
    for (std::size_t l = 0; l < draws.size(); ++l) {
        for (std::size_t j = 0; j < 3; ++j) {
            kernels::axpy(draws[l][j], model.basis_fields[l].channel(0), field.channel(j));
        }
    }
    return field;
}

}  // namespace

Vec3Field assemble_increment(const NoiseModel& model,
                             const std::vector<std::array<double, 3>>& draws,
                             const SpectralGrid& grid)
{
    return assemble(model, draws, grid.n());
}

NoiseIncrement sample_increment(const NoiseModel& model, double dt, NoiseStreams& rng)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("sample_increment: dt must be positive");
    }
    if (rng.n_modes() < model.truncation_n) {
        throw std::invalid_argument("sample_increment: fewer Brownian streams than noise modes");
    }
    const int n = model.f_psi.n();
    NoiseIncrement inc;
    const double sd = std::sqrt(dt);
    inc.draws.resize(static_cast<std::size_t>(model.truncation_n));
    for (int l = 0; l < model.truncation_n; ++l) {
        auto z = rng.standard_normals(l);
        for (double& x : z) {
            x *= sd;
        }
        inc.draws[static_cast<std::size_t>(l)] = z;
    }
    inc.field = assemble(model, inc.draws, n);
    return inc;
}

bool CovarianceEstimate::agrees(double n_sigma) const
{
    return std::abs(estimate - closed_form) <= n_sigma * standard_error + 1e-14;
}

CovarianceEstimate covariance_estimate(const NoiseModel& model, const Vec3Field& a,
                                       const Vec3Field& b, double t, double s, int paths,
                                       const SpectralGrid& grid)
{
    if (paths < 100) {
        throw std::invalid_argument("covariance_estimate: at least 100 paths are required");
    }
    if (t < 0.0 || s < 0.0) {
        throw std::invalid_argument("covariance_estimate: times must be nonnegative");
    }
    const std::size_t n = static_cast<std::size_t>(model.truncation_n);
    // psi* a^i as coefficients: (psi* a^i)_l = <psi_l, a^i>.
    std::vector<std::array<double, 3>> pa(n), pb(n);
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t i = 0; i < 3; ++i) {
            pa[l][i] = inner(model.basis_fields[l].channel(0), a.channel(i), grid);
            pb[l][i] = inner(model.basis_fields[l].channel(0), b.channel(i), grid);
        }
    }
    const double early = std::min(t, s);
    const double late = std::max(t, s);
    CovarianceEstimate out;
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t i = 0; i < 3; ++i) {
            out.closed_form += early * pa[l][i] * pb[l][i];
        }
    }
    std::vector<double> samples(static_cast<std::size_t>(paths));
    for (int p = 0; p < paths; ++p) {
        NoiseStreams rng(derive_seed(model.seed, static_cast<std::uint64_t>(p)), model.truncation_n);
        double wa = 0.0;
        double wb = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
            const auto z1 = rng.standard_normals(static_cast<int>(l));
            const auto z2 = rng.standard_normals(static_cast<int>(l));
            for (std::size_t i = 0; i < 3; ++i) {
                const double b_early = std::sqrt(early) * z1[i];
                const double b_late = b_early + std::sqrt(late - early) * z2[i];
                const double bt = t <= s ? b_early : b_late;
                const double bs = t <= s ? b_late : b_early;
                wa += bt * pa[l][i];
                wb += bs * pb[l][i];
            }
        }
        samples[static_cast<std::size_t>(p)] = wa * wb;
    }
    double m = 0.0;
    for (double x : samples) {
        m += x;
    }
    m /= paths;
    double var = 0.0;
    for (double x : samples) {
        var += (x - m) * (x - m);
    }
    var /= (paths - 1);
    out.estimate = m;
    out.standard_error = std::sqrt(var / paths);
    return out;
}

}  // namespace sel
