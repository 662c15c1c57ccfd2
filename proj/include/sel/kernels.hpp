#pragma once

// Pointwise and reduction kernels behind the spectral calculus.
//
// Every kernel exists twice: the OpenMP version in sel::kernels, used by the
// library, and a plain serial loop in sel::kernels::reference, kept for the
// equivalence tests and the benchmark. Both produce bit-identical results:
// pointwise kernels trivially, reductions because partial sums are formed
// over fixed blocks of kReductionBlock samples and combined serially in block
// order regardless of the worker count.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sel::kernels {

inline constexpr std::size_t kReductionBlock = 512;

struct Vec3Span
{
    std::span<double> x, y, z;
};

struct ConstVec3Span
{
    std::span<const double> x, y, z;

    ConstVec3Span(std::span<const double> a, std::span<const double> b, std::span<const double> c)
        : x(a), y(b), z(c)
    {
    }
    ConstVec3Span(Vec3Span s) : x(s.x), y(s.y), z(s.z) {}
};

/// Offset of a grid point inside a ball mask, in grid cells.
struct BallOffset
{
    int da;
    int db;
};

double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);

/// out = a x b pointwise.
void cross(ConstVec3Span a, ConstVec3Span b, Vec3Span out);
/// out += s * a pointwise.
void axpy(double s, std::span<const double> a, std::span<double> out);
/// out = a * b pointwise.
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
/// out = sum over channels of a_c * b_c.
void dot3(ConstVec3Span a, ConstVec3Span b, std::span<double> out);

/// Divides each vector by its modulus; returns the smallest modulus seen.
double normalize(Vec3Span u);

/// modes[m] *= multiplier[m].
void scale_modes(std::span<std::complex<double>> modes, std::span<const double> multiplier);

/// out[x] = sum over offsets of density[x + offset] on an n x n periodic grid.
void ball_sums(std::span<const double> density, int n, std::span<const BallOffset> offsets,
               std::span<double> out);

namespace reference {

double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
void cross(ConstVec3Span a, ConstVec3Span b, Vec3Span out);
void axpy(double s, std::span<const double> a, std::span<double> out);
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
void dot3(ConstVec3Span a, ConstVec3Span b, std::span<double> out);
double normalize(Vec3Span u);
void scale_modes(std::span<std::complex<double>> modes, std::span<const double> multiplier);
void ball_sums(std::span<const double> density, int n, std::span<const BallOffset> offsets,
               std::span<double> out);

}  // namespace reference

/// Caps the worker count used by the OpenMP kernels (0 leaves the default).
void set_max_threads(int threads);
int max_threads();

}  // namespace sel::kernels
