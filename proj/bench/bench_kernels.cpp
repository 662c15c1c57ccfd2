// OpenMP kernels against their serial references.
#include "sel/kernels.hpp"
#include "sel/spectral.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace {

std::vector<double> samples(std::size_t n, double phase)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = std::sin(0.001 * static_cast<double>(i) + phase);
    }
    return v;
}

template <bool Omp>
void BM_dot(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = samples(n * n, 0.1);
    const auto b = samples(n * n, 0.7);
    for (auto _ : state) {
        double r = Omp ? sel::kernels::dot(a, b) : sel::kernels::reference::dot(a, b);
        benchmark::DoNotOptimize(r);
    }
}

template <bool Omp>
void BM_cross(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto ax = samples(n * n, 0.1), ay = samples(n * n, 0.2), az = samples(n * n, 0.3);
    const auto bx = samples(n * n, 0.4), by = samples(n * n, 0.5), bz = samples(n * n, 0.6);
    std::vector<double> ox(n * n), oy(n * n), oz(n * n);
    const sel::kernels::ConstVec3Span a{ax, ay, az};
    const sel::kernels::ConstVec3Span b{bx, by, bz};
    const sel::kernels::Vec3Span out{ox, oy, oz};
    for (auto _ : state) {
        if (Omp) {
            sel::kernels::cross(a, b, out);
        } else {
            sel::kernels::reference::cross(a, b, out);
        }
        benchmark::ClobberMemory();
    }
}

template <bool Omp>
void BM_ball_sums(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto d = samples(static_cast<std::size_t>(n) * n, 0.3);
    std::vector<sel::kernels::BallOffset> offsets;
    const int r = n / 8;
    for (int a = -r; a <= r; ++a) {
        for (int b = -r; b <= r; ++b) {
            if (a * a + b * b <= r * r) {
                offsets.push_back({a, b});
            }
        }
    }
    std::vector<double> out(d.size());
    for (auto _ : state) {
        if (Omp) {
            sel::kernels::ball_sums(d, n, offsets, out);
        } else {
            sel::kernels::reference::ball_sums(d, n, offsets, out);
        }
        benchmark::ClobberMemory();
    }
}

void BM_fft_roundtrip(benchmark::State& state)
{
    const sel::SpectralGrid grid(static_cast<int>(state.range(0)));
    const auto f = samples(grid.size(), 0.2);
    sel::Spectrum modes(grid.spectral_size());
    std::vector<double> back(grid.size());
    for (auto _ : state) {
        grid.forward(f, modes);
        grid.inverse(modes, back);
        benchmark::ClobberMemory();
    }
}

}  // namespace

BENCHMARK(BM_dot<true>)->Arg(64)->Arg(256);
BENCHMARK(BM_dot<false>)->Arg(64)->Arg(256);
BENCHMARK(BM_cross<true>)->Arg(64)->Arg(256);
BENCHMARK(BM_cross<false>)->Arg(64)->Arg(256);
BENCHMARK(BM_ball_sums<true>)->Arg(64)->Arg(128);
BENCHMARK(BM_ball_sums<false>)->Arg(64)->Arg(128);
BENCHMARK(BM_fft_roundtrip)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
