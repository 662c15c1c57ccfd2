#include "sel/cli/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace sel::cli {

namespace {

constexpr char kMagic[8] = {'S', 'E', 'L', 'T', 'O', 'R', 'U', 'S'};

template <typename T>
void put_le(std::ostream& os, T value)
{
    std::array<unsigned char, sizeof(T)> bytes{};
    std::uint64_t bits = 0;
    if constexpr (sizeof(T) == 8) {
        bits = std::bit_cast<std::uint64_t>(value);
    } else {
        bits = static_cast<std::uint64_t>(value);
    }
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
    }
    os.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& is, const std::string& path)
{
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!is.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
        throw std::runtime_error("snapshot " + path + ": truncated file");
    }
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    }
    if constexpr (sizeof(T) == 8) {
        return std::bit_cast<T>(bits);
    } else {
        return static_cast<T>(bits);
    }
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& snap)
{
    const std::size_t pts = static_cast<std::size_t>(snap.grid_n) * snap.grid_n;
    for (const auto& c : snap.channels) {
        if (c.size() != pts) {
            throw std::invalid_argument("write_snapshot: channel size does not match grid_n");
        }
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    os.write(kMagic, sizeof kMagic);
    put_le<std::uint32_t>(os, kSnapshotVersion);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(snap.grid_n));
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(snap.channels.size()));
    put_le<double>(os, snap.time);
    for (const auto& c : snap.channels) {
        for (double x : c) {
            put_le<double>(os, x);
        }
    }
    if (!os) {
        throw std::runtime_error("write failed for " + path);
    }
}

Snapshot read_snapshot(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("cannot open snapshot " + path);
    }
    char magic[8];
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
        throw std::runtime_error("snapshot " + path + ": bad magic");
    }
    const auto version = get_le<std::uint32_t>(is, path);
    if (version != kSnapshotVersion) {
        throw std::runtime_error("snapshot " + path + ": unsupported version " +
                                 std::to_string(version));
    }
    Snapshot snap;
    snap.grid_n = static_cast<int>(get_le<std::uint32_t>(is, path));
    const auto channels = get_le<std::uint32_t>(is, path);
    snap.time = get_le<double>(is, path);
    if (snap.grid_n <= 0 || snap.grid_n > 1 << 14 || channels > 64) {
        throw std::runtime_error("snapshot " + path + ": implausible header");
    }
    const std::size_t pts = static_cast<std::size_t>(snap.grid_n) * snap.grid_n;
    snap.channels.assign(channels, std::vector<double>(pts));
    for (auto& c : snap.channels) {
        for (double& x : c) {
            x = get_le<double>(is, path);
        }
    }
    return snap;
}

Snapshot snapshot_from_state(const SimState& state)
{
    Snapshot s;
    s.time = state.t;
    s.grid_n = state.v.data.n();
    for (std::size_t c = 0; c < 2; ++c) {
        const auto ch = state.v.data.channel(c);
        s.channels.emplace_back(ch.begin(), ch.end());
    }
    for (std::size_t c = 0; c < 3; ++c) {
        const auto ch = state.u.data.channel(c);
        s.channels.emplace_back(ch.begin(), ch.end());
    }
    return s;
}

SimState state_from_snapshot(const Snapshot& snap)
{
    if (snap.channels.size() != 5) {
        throw std::runtime_error("snapshot holds " + std::to_string(snap.channels.size()) +
                                 " channels, a state needs 5");
    }
    Vec2Field v(snap.grid_n);
    Vec3Field u(snap.grid_n);
    for (std::size_t c = 0; c < 2; ++c) {
        std::copy(snap.channels[c].begin(), snap.channels[c].end(), v.channel(c).begin());
    }
    for (std::size_t c = 0; c < 3; ++c) {
        std::copy(snap.channels[c + 2].begin(), snap.channels[c + 2].end(),
                  u.channel(c).begin());
    }
    return make_state(std::move(v), std::move(u), snap.time);
}

}  // namespace sel::cli
