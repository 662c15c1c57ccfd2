#include "sel/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sel::kernels {

namespace {

using Index = std::ptrdiff_t;

std::size_t block_count(std::size_t n)
{
    return (n + kReductionBlock - 1) / kReductionBlock;
}

template <class Term>
double blocked_sum_serial(std::size_t n, Term term)
{
    double total = 0.0;
    for (std::size_t b = 0; b < block_count(n); ++b) {
        const std::size_t end = std::min(n, (b + 1) * kReductionBlock);
        double partial = 0.0;
        for (std::size_t i = b * kReductionBlock; i < end; ++i) {
            partial += term(i);
        }
        total += partial;
    }
    return total;
}

template <class Term>
double blocked_sum_parallel(std::size_t n, Term term)
{
    const std::size_t blocks = block_count(n);
    if (blocks <= 1) {
        return blocked_sum_serial(n, term);
    }
    std::vector<double> partials(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (Index b = 0; b < static_cast<Index>(blocks); ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t end = std::min(n, begin + kReductionBlock);
        double partial = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            partial += term(i);
        }
        partials[static_cast<std::size_t>(b)] = partial;
    }
    double total = 0.0;
    for (double p : partials) {
        total += p;
    }
    return total;
}

inline int wrap(int i, int n)
{
    i %= n;
    return i < 0 ? i + n : i;
}

}  // namespace

double sum(std::span<const double> a)
{
    return blocked_sum_parallel(a.size(), [&](std::size_t i) { return a[i]; });
}

double dot(std::span<const double> a, std::span<const double> b)
{
    return blocked_sum_parallel(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

double max_abs(std::span<const double> a)
{
    double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
    for (Index i = 0; i < static_cast<Index>(a.size()); ++i) {
        m = std::max(m, std::abs(a[static_cast<std::size_t>(i)]));
    }
    return m;
}

void cross(ConstVec3Span a, ConstVec3Span b, Vec3Span out)
{
    const Index n = static_cast<Index>(a.x.size());
#pragma omp parallel for schedule(static)
    for (Index s = 0; s < n; ++s) {
        const auto i = static_cast<std::size_t>(s);
        const double cx = a.y[i] * b.z[i] - a.z[i] * b.y[i];
        const double cy = a.z[i] * b.x[i] - a.x[i] * b.z[i];
        const double cz = a.x[i] * b.y[i] - a.y[i] * b.x[i];
        out.x[i] = cx;
        out.y[i] = cy;
        out.z[i] = cz;
    }
}

void axpy(double s, std::span<const double> a, std::span<double> out)
{
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < static_cast<Index>(a.size()); ++i) {
        out[static_cast<std::size_t>(i)] += s * a[static_cast<std::size_t>(i)];
    }
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out)
{
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < static_cast<Index>(a.size()); ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = a[k] * b[k];
    }
}

void dot3(ConstVec3Span a, ConstVec3Span b, std::span<double> out)
{
#pragma omp parallel for schedule(static)
    for (Index s = 0; s < static_cast<Index>(out.size()); ++s) {
        const auto i = static_cast<std::size_t>(s);
        out[i] = a.x[i] * b.x[i] + a.y[i] * b.y[i] + a.z[i] * b.z[i];
    }
}

double normalize(Vec3Span u)
{
    double smallest = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : smallest) schedule(static)
    for (Index s = 0; s < static_cast<Index>(u.x.size()); ++s) {
        const auto i = static_cast<std::size_t>(s);
        const double m = std::sqrt(u.x[i] * u.x[i] + u.y[i] * u.y[i] + u.z[i] * u.z[i]);
        smallest = std::min(smallest, m);
        u.x[i] /= m;
        u.y[i] /= m;
        u.z[i] /= m;
    }
    return smallest;
}

void scale_modes(std::span<std::complex<double>> modes, std::span<const double> multiplier)
{
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < static_cast<Index>(modes.size()); ++i) {
        modes[static_cast<std::size_t>(i)] *= multiplier[static_cast<std::size_t>(i)];
    }
}

void ball_sums(std::span<const double> density, int n, std::span<const BallOffset> offsets,
               std::span<double> out)
{
#pragma omp parallel for schedule(static)
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            double s = 0.0;
            for (const BallOffset& o : offsets) {
                s += density[static_cast<std::size_t>(wrap(a + o.da, n)) * n +
                             static_cast<std::size_t>(wrap(b + o.db, n))];
            }
            out[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = s;
        }
    }
}

void set_max_threads(int threads)
{
    if (threads > 0) {
        omp_set_num_threads(threads);
    }
}

int max_threads()
{
    return omp_get_max_threads();
}

namespace reference {

double sum(std::span<const double> a)
{
    return blocked_sum_serial(a.size(), [&](std::size_t i) { return a[i]; });
}

double dot(std::span<const double> a, std::span<const double> b)
{
    return blocked_sum_serial(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

double max_abs(std::span<const double> a)
{
    double m = 0.0;
    for (double x : a) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

void cross(ConstVec3Span a, ConstVec3Span b, Vec3Span out)
{
    for (std::size_t i = 0; i < a.x.size(); ++i) {
        const double cx = a.y[i] * b.z[i] - a.z[i] * b.y[i];
        const double cy = a.z[i] * b.x[i] - a.x[i] * b.z[i];
        const double cz = a.x[i] * b.y[i] - a.y[i] * b.x[i];
        out.x[i] = cx;
        out.y[i] = cy;
        out.z[i] = cz;
    }
}

void axpy(double s, std::span<const double> a, std::span<double> out)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] += s * a[i];
    }
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] * b[i];
    }
}

void dot3(ConstVec3Span a, ConstVec3Span b, std::span<double> out)
{
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = a.x[i] * b.x[i] + a.y[i] * b.y[i] + a.z[i] * b.z[i];
    }
}

double normalize(Vec3Span u)
{
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.x.size(); ++i) {
        const double m = std::sqrt(u.x[i] * u.x[i] + u.y[i] * u.y[i] + u.z[i] * u.z[i]);
        smallest = std::min(smallest, m);
        u.x[i] /= m;
        u.y[i] /= m;
        u.z[i] /= m;
    }
    return smallest;
}

void scale_modes(std::span<std::complex<double>> modes, std::span<const double> multiplier)
{
    for (std::size_t i = 0; i < modes.size(); ++i) {
        modes[i] *= multiplier[i];
    }
}

void ball_sums(std::span<const double> density, int n, std::span<const BallOffset> offsets,
               std::span<double> out)
{
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            double s = 0.0;
            for (const BallOffset& o : offsets) {
                s += density[static_cast<std::size_t>(wrap(a + o.da, n)) * n +
                             static_cast<std::size_t>(wrap(b + o.db, n))];
            }
            out[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = s;
        }
    }
}

}  // namespace reference

}  // namespace sel::kernels
