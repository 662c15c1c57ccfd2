#pragma once

#include "sel/kernels.hpp"
#include "sel/spectral.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace sel {

/// Raised when the director leaves the sphere (|u| below 1e-8 before
/// renormalization): an unresolved concentration.
class SingularityError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when a state acquires non-finite values.
class BlowUpError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when a geometric operation receives a director off the sphere.
class ConstraintError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Divergence-free velocity v.
struct VelocityField
{
    Vec2Field data;
};

/// Unit-norm director u.
struct DirectorField
{
    Vec3Field data;
};

/// tau_u = Laplace(u) + u |grad u|^2, or its transported variant.
struct TensionField
{
    Vec3Field data;
};

inline constexpr double kSingularModulus = 1e-8;
inline constexpr double kTensionConstraintTol = 1e-6;

inline kernels::Vec3Span vec3(Vec3Field& f)
{
    return {f.channel(0), f.channel(1), f.channel(2)};
}
inline kernels::ConstVec3Span vec3(const Vec3Field& f)
{
    return {f.channel(0), f.channel(1), f.channel(2)};
}

/// max over the grid of | |u(x)| - 1 |.
double constraint_error(const Vec3Field& u);

/// Pointwise u / |u|. Throws SingularityError when some |u| < 1e-8.
DirectorField normalize_to_sphere(Vec3Field u);

/// Spectral partial derivatives (d1 u, d2 u) of a 3-vector field.
struct DirectorGradient
{
    Vec3Field d1;
    Vec3Field d2;
};

DirectorGradient director_gradient(const Vec3Field& u, const SpectralGrid& grid);

/// |grad u|^2 assembled in physical space, then dealiased.
ScalarField gradient_energy_density(const DirectorGradient& du, const SpectralGrid& grid);

/// Dealiased pointwise product s * u.
Vec3Field dealiased_product(const ScalarField& s, const Vec3Field& u, const SpectralGrid& grid);

/// v . grad u, dealiased.
Vec3Field transport(const Vec2Field& v, const DirectorGradient& du, const SpectralGrid& grid);

TensionField tension(const DirectorField& u, const SpectralGrid& grid);
TensionField corrected_tension(const DirectorField& u, const VelocityField& v,
                               const SpectralGrid& grid);

/// max over the grid of |u . tau|.
double tension_orthogonality_error(const DirectorField& u, const TensionField& tau);

/// E = (|v|^2_{L2} + |grad u|^2_{L2}) / 2.
double energy(const VelocityField& v, const DirectorField& u, const SpectralGrid& grid);

/// max over the grid of | |tau|^2 - (|Laplace u|^2 - |grad u|^4) |.
double tension_identity_check(const DirectorField& u, const SpectralGrid& grid);

/// Pointwise rotation of every director by the 3x3 matrix r (row-major).
Vec3Field rotate(const Vec3Field& u, const std::array<double, 9>& r);

}  // namespace sel
