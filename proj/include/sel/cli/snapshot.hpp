#pragma once

#include "sel/dynamics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sel::cli {

/// Binary layout: "SELTORUS", u32 version (1), u32 grid_n, u32 channels,
/// f64 time, then every channel row-major; all little-endian.
struct Snapshot
{
    double time = 0.0;
    int grid_n = 0;
    std::vector<std::vector<double>> channels;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const Snapshot& snap);
/// Throws std::runtime_error on a bad magic, version, or truncated file.
Snapshot read_snapshot(const std::string& path);

/// (v1, v2, u1, u2, u3) at the state time.
Snapshot snapshot_from_state(const SimState& state);
/// Rebuilds a state (v projected, u renormalized). Needs five channels.
SimState state_from_snapshot(const Snapshot& snap);

}  // namespace sel::cli
