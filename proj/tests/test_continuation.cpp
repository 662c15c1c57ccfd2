#include "sel/dynamics.hpp"
#include "sel/presets.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <limits>

using namespace sel;
using doctest::Approx;

namespace {

SchemeConfig scheme(double dt, std::int64_t steps)
{
    SchemeConfig c;
    c.dt = dt;
    c.n_steps = steps;
    return c;
}

}  // namespace

TEST_CASE("samples at t = 0, every stride and at the end")
{
    const SpectralGrid grid(16);
    const NoiseModel m = build_noise_model(0, 3.0, 1.0, grid, 0);
    NoiseStreams rng(0, 0);
    std::vector<double> seen;
    const RunResult r = run_with_continuation(
        smooth_small(grid), m, scheme(1e-3, 25), MonitorConfig{0.125, 5.0, 10}, grid, rng,
        [&](const SampleRecord& rec, const SimState&) { seen.push_back(rec.t); });
    REQUIRE(seen.size() == 4);
    CHECK(seen[0] == 0.0);
    CHECK(seen[1] == Approx(0.01));
    CHECK(seen[3] == Approx(0.025));
    CHECK(r.trajectory.samples.size() == 4);
    CHECK(r.continuation.pieces() == 1);
    CHECK(r.continuation.bubbling_times.empty());
    CHECK(!r.continuation.unresolved);
    CHECK(r.trajectory.samples.back().zeta == std::nullopt);
}

TEST_CASE("concentrated bump triggers a restart at the first sample")
{
    const SpectralGrid grid(32);
    const NoiseModel m = build_noise_model(0, 3.0, 1.0, grid, 0);
    NoiseStreams rng(0, 0);
    const RunResult r = run_with_continuation(bump_concentrated(grid), m, scheme(1e-4, 50),
                                              MonitorConfig{0.125, 4.0, 10}, grid, rng);
    const ContinuationRecord& c = r.continuation;
    REQUIRE(c.bubbling_times.size() >= 1);
    CHECK(c.bubbling_times.front() == 0.0);
    CHECK(c.restart_count == static_cast<int>(c.bubbling_times.size()));
    CHECK(c.pieces() == c.restart_count + 1);
    CHECK(c.intervals.size() == static_cast<std::size_t>(c.pieces()));
    CHECK(c.surrogate_restart);
    for (const SampleRecord& s : r.trajectory.samples) {
        CHECK(s.zeta == 0.0);
        CHECK(s.bubbling_count >= 1);
    }
}

TEST_CASE("crossing while disarmed is not recounted")
{
    // the bump stays above threshold for the first samples: one event only
    const SpectralGrid grid(32);
    const NoiseModel m = build_noise_model(0, 3.0, 1.0, grid, 0);
    NoiseStreams rng(0, 0);
    const RunResult r = run_with_continuation(bump_concentrated(grid), m, scheme(1e-4, 30),
                                              MonitorConfig{0.125, 1.0, 1}, grid, rng);
    for (const SampleRecord& s : r.trajectory.samples) {
        CHECK(s.local_sup >= 1.0);
    }
    CHECK(r.continuation.restart_count == 1);
}

TEST_CASE("monitor configuration is validated")
{
    const SpectralGrid grid(16);
    const NoiseModel m = build_noise_model(0, 3.0, 1.0, grid, 0);
    NoiseStreams rng(0, 0);
    CHECK_THROWS_AS(run_with_continuation(smooth_small(grid), m, scheme(1e-3, 2),
                                          MonitorConfig{0.125, 1.0, 0}, grid, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_with_continuation(smooth_small(grid), m, scheme(1e-3, 2),
                                          MonitorConfig{0.01, 1.0, 1}, grid, rng),
                    std::invalid_argument);
}

TEST_CASE("blow-up is recorded as unresolved")
{
    const SpectralGrid grid(16);
    const NoiseModel m = build_noise_model(0, 3.0, 1.0, grid, 0);
    NoiseStreams rng(0, 0);
    SimState s = smooth_small(grid);
    s.v.data.channel(0)[5] = std::numeric_limits<double>::quiet_NaN();
    const RunResult r = run_with_continuation(s, m, scheme(1e-3, 5),
                                              MonitorConfig{0.125, 1e300, 1}, grid, rng);
    CHECK(r.continuation.unresolved);
    CHECK(!r.continuation.unresolved_message.empty());
    CHECK(r.continuation.unresolved_time == Approx(1e-3));
    CHECK(r.trajectory.samples.size() == 1);
}
