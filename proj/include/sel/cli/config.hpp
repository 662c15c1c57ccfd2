#pragma once

#include "sel/dynamics.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sel::cli {

/// Parse or validation failure; `line` is 0 when the problem is not tied to
/// one line (e.g. a missing key or a cross-field constraint).
class ConfigError : public std::runtime_error
{
  public:
    ConfigError(const std::string& source, int line, const std::string& field,
                const std::string& message);

    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

  private:
    int line_;
    std::string field_;
};

struct NoiseSection
{
    int n = 0;
    double s = 3.0;
    double amplitude = 1.0;
    std::uint64_t seed = 0;
};

struct InitialSection
{
    std::string preset = "smooth_small";
    std::string snapshot;
};

struct MonitorSection
{
    double rho = 0.125;
    /// Empty means "auto": 0.5 / mu1 from the Struwe corpus.
    std::optional<double> epsilon1;
    int sample_stride = 10;
};

struct OutputSection
{
    std::string directory = "out";
    int snapshot_stride = 0;
};

/// Run configuration. Text format: `key = value` lines, `[section]` headers,
/// `#` comments. Top-level keys: grid_n, dt, horizon, integrator. Sections:
/// [noise] n s amplitude seed; [initial_condition] preset snapshot;
/// [monitors] rho epsilon1 sample_stride; [output] directory snapshot_stride.
/// Unknown sections and keys are errors.
struct SimConfig
{
    int grid_n = 64;
    double dt = 1e-4;
    double horizon = 0.1;
    Integrator integrator = Integrator::ito_semi_implicit;
    NoiseSection noise;
    InitialSection initial;
    MonitorSection monitors;
    OutputSection output;

    std::int64_t n_steps() const;
};

SimConfig parse_config(std::string_view text, const std::string& source = "<config>");
SimConfig load_config(const std::string& path);

/// Cross-field checks: grid parity, dt > 0, horizon a multiple of dt, noise
/// truncation within the dealiased modes, rho resolvable, one initial source.
void validate(const SimConfig& cfg, const std::string& source = "<config>");

}  // namespace sel::cli
