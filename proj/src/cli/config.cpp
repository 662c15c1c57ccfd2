#include "sel/cli/config.hpp"

#include "sel/presets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace sel::cli {

namespace {

std::string describe(const std::string& source, int line, const std::string& field,
                     const std::string& message)
{
    std::string s = source;
    if (line > 0) {
        s += ":" + std::to_string(line);
    }
    if (!field.empty()) {
        s += ": " + field;
    }
    return s + ": " + message;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct Ctx
{
    const std::string& source;
    int line;
    std::string field;

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ConfigError(source, line, field, msg);
    }

    double real(const std::string& v) const
    {
        double x = 0.0;
        const auto* end = v.data() + v.size();
        const auto [p, ec] = std::from_chars(v.data(), end, x);
        if (ec != std::errc() || p != end || !std::isfinite(x)) {
            fail("expected a finite number, got '" + v + "'");
        }
        return x;
    }

    long long integer(const std::string& v) const
    {
        long long x = 0;
        const auto* end = v.data() + v.size();
        const auto [p, ec] = std::from_chars(v.data(), end, x);
        if (ec != std::errc() || p != end) {
            fail("expected an integer, got '" + v + "'");
        }
        return x;
    }

    std::uint64_t u64(const std::string& v) const
    {
        std::uint64_t x = 0;
        const auto* end = v.data() + v.size();
        const auto [p, ec] = std::from_chars(v.data(), end, x);
        if (ec != std::errc() || p != end) {
            fail("expected an unsigned 64-bit integer, got '" + v + "'");
        }
        return x;
    }
};

using Setter = std::function<void(SimConfig&, const std::string&, const Ctx&)>;

const std::map<std::string, std::map<std::string, Setter>>& schema()
{
    static const std::map<std::string, std::map<std::string, Setter>> s = {
        {"",
         {
             {"grid_n", [](SimConfig& c, const std::string& v,
                           const Ctx& x) { c.grid_n = static_cast<int>(x.integer(v)); }},
             {"dt", [](SimConfig& c, const std::string& v, const Ctx& x) { c.dt = x.real(v); }},
             {"horizon",
              [](SimConfig& c, const std::string& v, const Ctx& x) { c.horizon = x.real(v); }},
             {"integrator",
              [](SimConfig& c, const std::string& v, const Ctx& x) {
                  if (v == "ito_semi_implicit") {
                      c.integrator = Integrator::ito_semi_implicit;
                  } else if (v == "heun_stratonovich") {
                      c.integrator = Integrator::heun_stratonovich;
                  } else {
                      x.fail("expected ito_semi_implicit or heun_stratonovich, got '" + v + "'");
                  }
              }},
         }},
        {"noise",
         {
             {"n", [](SimConfig& c, const std::string& v,
                      const Ctx& x) { c.noise.n = static_cast<int>(x.integer(v)); }},
             {"s", [](SimConfig& c, const std::string& v, const Ctx& x) { c.noise.s = x.real(v); }},
             {"amplitude", [](SimConfig& c, const std::string& v,
                              const Ctx& x) { c.noise.amplitude = x.real(v); }},
             {"seed",
              [](SimConfig& c, const std::string& v, const Ctx& x) { c.noise.seed = x.u64(v); }},
         }},
        {"initial_condition",
         {
             {"preset", [](SimConfig& c, const std::string& v,
                           const Ctx&) { c.initial.preset = v; }},
             {"snapshot", [](SimConfig& c, const std::string& v,
                             const Ctx&) { c.initial.snapshot = v; }},
         }},
        {"monitors",
         {
             {"rho",
              [](SimConfig& c, const std::string& v, const Ctx& x) { c.monitors.rho = x.real(v); }},
             {"epsilon1",
              [](SimConfig& c, const std::string& v, const Ctx& x) {
                  if (v == "auto") {
                      c.monitors.epsilon1.reset();
                  } else {
                      c.monitors.epsilon1 = x.real(v);
                  }
              }},
             {"sample_stride", [](SimConfig& c, const std::string& v, const Ctx& x) {
                  c.monitors.sample_stride = static_cast<int>(x.integer(v));
              }},
         }},
        {"output",
         {
             {"directory", [](SimConfig& c, const std::string& v,
                              const Ctx&) { c.output.directory = v; }},
             {"snapshot_stride", [](SimConfig& c, const std::string& v, const Ctx& x) {
                  c.output.snapshot_stride = static_cast<int>(x.integer(v));
              }},
         }},
    };
    return s;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& field,
                         const std::string& message)
    : std::runtime_error(describe(source, line, field, message)), line_(line), field_(field)
{
}

std::int64_t SimConfig::n_steps() const
{
    return std::llround(horizon / dt);
}

SimConfig parse_config(std::string_view text, const std::string& source)
{
    SimConfig cfg;
    std::string section;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) {
            continue;
        }
        if (body.front() == '[') {
            if (body.back() != ']') {
                throw ConfigError(source, line, "", "malformed section header '" + body + "'");
            }
            section = trim(std::string_view(body).substr(1, body.size() - 2));
            if (section.empty() || !schema().contains(section)) {
                throw ConfigError(source, line, "", "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source, line, "", "expected 'key = value', got '" + body + "'");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        const std::string field = section.empty() ? key : section + "." + key;
        const auto& keys = schema().at(section);
        const auto it = keys.find(key);
        if (it == keys.end()) {
            throw ConfigError(source, line, field, "unknown key");
        }
        if (value.empty()) {
            throw ConfigError(source, line, field, "missing value");
        }
        if (!seen.insert(field).second) {
            throw ConfigError(source, line, field, "duplicate key");
        }
        it->second(cfg, value, Ctx{source, line, field});
    }
    if (seen.contains("initial_condition.snapshot") && !seen.contains("initial_condition.preset")) {
        cfg.initial.preset.clear();
    }
    validate(cfg, source);
    return cfg;
}

SimConfig load_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is) {
        throw ConfigError(path, 0, "", "cannot open config file");
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), path);
}

void validate(const SimConfig& c, const std::string& source)
{
    const auto fail = [&](const std::string& field, const std::string& msg) {
        throw ConfigError(source, 0, field, msg);
    };
    if (c.grid_n < 8 || c.grid_n % 2 != 0) {
        fail("grid_n", "must be even and >= 8");
    }
    if (!(c.dt > 0.0)) {
        fail("dt", "must be positive");
    }
    if (!(c.horizon > 0.0)) {
        fail("horizon", "must be positive");
    }
    const double steps = c.horizon / c.dt;
    if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps)) {
        fail("horizon", "must be an integer multiple of dt");
    }
    if (c.noise.n < 0) {
        fail("noise.n", "must be >= 0");
    }
    const int box = 2 * (c.grid_n / 3) + 1;
    if (c.noise.n > box * box) {
        fail("noise.n", "exceeds the " + std::to_string(box * box) +
                            " dealiased modes of the grid");
    }
    if (!(c.noise.s >= 0.0)) {
        fail("noise.s", "must be >= 0");
    }
    if (!(c.monitors.rho >= 1.0 / c.grid_n) || !(c.monitors.rho < 0.5)) {
        fail("monitors.rho", "must lie in [1/grid_n, 1/2)");
    }
    if (c.monitors.epsilon1 && !(*c.monitors.epsilon1 > 0.0)) {
        fail("monitors.epsilon1", "must be positive or 'auto'");
    }
    if (c.monitors.sample_stride < 1) {
        fail("monitors.sample_stride", "must be >= 1");
    }
    if (c.output.snapshot_stride < 0) {
        fail("output.snapshot_stride", "must be >= 0");
    }
    if (c.output.directory.empty()) {
        fail("output.directory", "must not be empty");
    }
    const bool has_preset = !c.initial.preset.empty();
    const bool has_snapshot = !c.initial.snapshot.empty();
    if (has_preset == has_snapshot) {
        fail("initial_condition", "give exactly one of preset and snapshot");
    }
    if (has_preset) {
        const auto names = preset_names();
        if (std::find(names.begin(), names.end(), c.initial.preset) == names.end()) {
            fail("initial_condition.preset", "unknown preset '" + c.initial.preset + "'");
        }
    }
}

}  // namespace sel::cli
