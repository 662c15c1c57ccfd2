#include "sel/cli/commands.hpp"

#include "sel/cli/config.hpp"
#include "sel/cli/records.hpp"
#include "sel/cli/snapshot.hpp"
#include "sel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sel::cli {

namespace fs = std::filesystem;

namespace {

// Flat JSON object with pre-rendered values, keys in insertion order.
class JsonObject
{
  public:
    JsonObject& str(const std::string& key, const std::string& value)
    {
        return raw(key, quote(value));
    }
    JsonObject& num(const std::string& key, double value) { return raw(key, format_number(value)); }
    JsonObject& integer(const std::string& key, long long value)
    {
        return raw(key, std::to_string(value));
    }
    JsonObject& boolean(const std::string& key, bool value)
    {
        return raw(key, value ? "true" : "false");
    }
    JsonObject& nums(const std::string& key, const std::vector<double>& values)
    {
        std::string s = "[";
        for (std::size_t i = 0; i < values.size(); ++i) {
            s += (i ? "," : "") + format_number(values[i]);
        }
        return raw(key, s + "]");
    }
    JsonObject& raw(const std::string& key, const std::string& value)
    {
        fields_.emplace_back(key, value);
        return *this;
    }

    std::string dump() const
    {
        std::string s = "{";
        for (std::size_t i = 0; i < fields_.size(); ++i) {
            s += (i ? "," : "") + quote(fields_[i].first) + ":" + fields_[i].second;
        }
        return s + "}";
    }

  private:
    static std::string quote(const std::string& s)
    {
        std::string q = "\"";
        for (const char c : s) {
            if (c == '"' || c == '\\') {
                q += '\\';
                q += c;
            } else if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                q += buf;
            } else {
                q += c;
            }
        }
        return q + "\"";
    }

    std::vector<std::pair<std::string, std::string>> fields_;
};

// Everything a config-driven subcommand needs.
struct Setup
{
    SimConfig cfg;
    std::unique_ptr<SpectralGrid> grid;
    NoiseModel model;
    SchemeConfig scheme;
    SimState init;
};

Setup load_setup(const CommonOptions& opts)
{
    Setup s;
    s.cfg = load_config(opts.config_path);
    if (opts.seed) {
        s.cfg.noise.seed = *opts.seed;
    }
    if (opts.out_dir) {
        s.cfg.output.directory = *opts.out_dir;
    }
    s.grid = std::make_unique<SpectralGrid>(s.cfg.grid_n);
    s.model = build_noise_model(s.cfg.noise.n, s.cfg.noise.s, s.cfg.noise.amplitude, *s.grid,
                                s.cfg.noise.seed);
    s.scheme.dt = s.cfg.dt;
    s.scheme.n_steps = s.cfg.n_steps();
    s.scheme.integrator = s.cfg.integrator;
    if (!s.cfg.initial.preset.empty()) {
        s.init = preset_by_name(s.cfg.initial.preset, *s.grid);
    } else {
        const Snapshot snap = read_snapshot(s.cfg.initial.snapshot);
        if (snap.grid_n != s.cfg.grid_n) {
            throw ConfigError(opts.config_path, 0, "initial_condition.snapshot",
                              "snapshot grid " + std::to_string(snap.grid_n) +
                                  " does not match grid_n " + std::to_string(s.cfg.grid_n));
        }
        s.init = state_from_snapshot(snap);
    }
    return s;
}

MonitorConfig monitor_config(const Setup& s)
{
    MonitorConfig m;
    m.rho = s.cfg.monitors.rho;
    m.sample_stride = s.cfg.monitors.sample_stride;
    if (s.cfg.monitors.epsilon1) {
        m.epsilon1 = *s.cfg.monitors.epsilon1;
    } else {
        const double mu1 = empirical_mu1(*s.grid, m.rho, 20, derive_seed(s.cfg.noise.seed, 0));
        m.epsilon1 = auto_epsilon1(mu1);
    }
    return m;
}

void make_directory(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
    }
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    return os;
}

// Runs `body`, mapping configuration and I/O failures to exit 1.
int guarded(std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
    }
    return exit_config;
}

std::string summary_json(const Setup& s, const MonitorConfig& m, const RunResult& r)
{
    const ContinuationRecord& c = r.continuation;
    const TrajectorySummary& t = r.trajectory;
    JsonObject o;
    o.str("schema", "sel.summary/1")
        .num("t_final", t.final_state.t)
        .num("E_final", t.ledger.e_t)
        .num("E0", t.ledger.e0)
        .integer("pieces", c.pieces())
        .nums("bubbling_times", c.bubbling_times)
        .integer("restart_count", c.restart_count)
        .boolean("surrogate_restart", c.surrogate_restart)
        .num("max_abs_residual", t.max_abs_residual)
        .num("max_constraint_err", t.max_constraint_err)
        .num("max_divergence_err", t.max_divergence_err)
        .num("rho", m.rho)
        .num("epsilon1", m.epsilon1)
        .num("c_psi", s.model.c_psi)
        .integer("seed", static_cast<long long>(s.cfg.noise.seed))
        .boolean("unresolved", c.unresolved);
    if (c.unresolved) {
        o.num("unresolved_time", c.unresolved_time).str("unresolved_message", c.unresolved_message);
    }
    return o.dump();
}

}  // namespace

int cmd_run(const CommonOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&]() {
        Setup s = load_setup(opts);
        const MonitorConfig mon = monitor_config(s);
        const fs::path dir = s.cfg.output.directory;
        make_directory(dir);
        std::ofstream records = open_output(dir / "run.ndjson");
        const int snap_stride = s.cfg.output.snapshot_stride;

        const SampleSink sink = [&](const SampleRecord& rec, const SimState& state) {
            records << run_record_json(rec) << '\n';
            if (snap_stride > 0 && state.step_index % snap_stride == 0) {
                char name[64];
                std::snprintf(name, sizeof name, "snapshot_%08lld.bin",
                              static_cast<long long>(state.step_index));
                write_snapshot((dir / name).string(), snapshot_from_state(state));
            }
        };
        NoiseStreams rng(s.model.seed, s.model.truncation_n);
        const RunResult r = run_with_continuation(s.init, s.model, s.scheme, mon, *s.grid, rng, sink);
        records.flush();
        write_snapshot((dir / "final.bin").string(), snapshot_from_state(r.trajectory.final_state));
        std::ofstream summary = open_output(dir / "summary.json");
        summary << summary_json(s, mon, r) << '\n';

        const ContinuationRecord& c = r.continuation;
        out << "run: t=" << format_number(r.trajectory.final_state.t)
            << " pieces=" << c.pieces() << " bubbling=" << c.bubbling_times.size()
            << " max|residual|=" << format_number(r.trajectory.max_abs_residual) << '\n';
        if (c.unresolved) {
            err << "singularity at t=" << format_number(c.unresolved_time) << ": "
                << c.unresolved_message << '\n';
            return static_cast<int>(exit_singularity);
        }
        return static_cast<int>(exit_ok);
    });
}

// ---------------------------------------------------------------------------
// verify

namespace {

struct SuiteContext
{
    std::uint64_t seed;
    std::optional<int> paths;
    bool inject;
    std::ostream& records;
    std::ostream& human;
};

void emit_check(SuiteContext& ctx, const std::string& suite, const std::string& check,
                double value, double threshold, bool pass)
{
    ctx.records << JsonObject()
                       .str("schema", "sel.verify/1")
                       .str("suite", suite)
                       .str("check", check)
                       .num("value", value)
                       .num("threshold", threshold)
                       .boolean("pass", pass)
                       .dump()
                << '\n';
    ctx.human << "  " << (pass ? "ok   " : "FAIL ") << check << " = " << format_number(value)
              << " (threshold " << format_number(threshold) << ")\n";
}

bool suite_trace(SuiteContext& ctx)
{
    const SpectralGrid grid(32);
    const NoiseModel model = build_noise_model(9, 3.0, 1.0, grid, ctx.seed);
    std::mt19937_64 rng(derive_seed(ctx.seed, 1));
    const double scale = 1.0 + model.c_psi;

    double a1 = 0.0;
    double a2_err = 0.0;
    double a2_lo = std::numeric_limits<double>::infinity();
    double a2_hi = -a2_lo;
    for (int f = 0; f < 10; ++f) {
        const DirectorField u = random_unit_field(grid, 4, 0.5, rng);
        const TraceReport t = trace_terms(u, model, grid);
        a1 = std::max(a1, t.a1_max_abs);
        a2_err = std::max(a2_err, std::abs(t.a2_value - t.a2_expected));
        a2_lo = std::min(a2_lo, t.a2_value);
        a2_hi = std::max(a2_hi, t.a2_value);
    }
    std::normal_distribution<double> normal;
    double geo = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const std::array<double, 3> z{normal(rng), normal(rng), normal(rng)};
        const double norm = std::hypot(z[0], z[1], z[2]);
        geo = std::max(geo, check_geometric_fact(z) / norm);
    }

    bool ok = true;
    const auto check = [&](const std::string& name, double value, double threshold) {
        const bool pass = value <= threshold;
        emit_check(ctx, "trace", name, value, threshold, pass);
        ok = ok && pass;
    };
    check("a1_max_abs", a1, 1e-8);
    check("a2_minus_c_psi", a2_err, 1e-8 * scale);
    check("a2_spread", a2_hi - a2_lo, 1e-10 * scale);
    check("geometric_residual", geo, 1e-14);
    return ok;
}

bool suite_strato(SuiteContext& ctx)
{
    const SpectralGrid grid(16);
    bool ok = true;

    // order against the n = 9 model
    {
        const NoiseModel model = build_noise_model(9, 3.0, 1.0, grid, ctx.seed);
        std::mt19937_64 rng(derive_seed(ctx.seed, 2));
        const DirectorField u0 = random_unit_field(grid, 3, 0.5, rng);
        StratoConfig sc;
        sc.paths = ctx.paths.value_or(50);
        sc.flip_correction_sign = ctx.inject;
        const StratoResult r = strato_ito_equivalence(u0, model, sc, grid);
        for (std::size_t i = 0; i < r.dts.size(); ++i) {
            ctx.records << JsonObject()
                               .str("schema", "sel.verify/1")
                               .str("suite", "strato")
                               .str("check", "strong_error")
                               .num("dt", r.dts[i])
                               .num("value", r.strong_error[i])
                               .dump()
                        << '\n';
        }
        const double order = r.min_order();
        const bool pass = order >= 0.4;
        emit_check(ctx, "strato", "min_observed_order", order, 0.4, pass);
        ok = ok && pass;
    }

    // norm preservation under a constant mode
    {
        const NoiseModel model =
            build_noise_model(std::vector<FourierMode>{FourierMode{}}, 0.0, 0.4, grid, ctx.seed);
        Vec3Field e1(grid);
        for (double& x : e1.channel(0)) {
            x = 1.0;
        }
        StratoConfig sc;
        sc.dts = {1e-4};
        sc.horizon = 0.1;
        sc.paths = std::min(ctx.paths.value_or(20), 20);
        const StratoResult r =
            strato_ito_equivalence(normalize_to_sphere(std::move(e1)), model, sc, grid);
        const bool pass = r.heun_norm_drift <= 1e-6;
        emit_check(ctx, "strato", "heun_norm_drift", r.heun_norm_drift, 1e-6, pass);
        ok = ok && pass;
    }
    return ok;
}

bool suite_galerkin(SuiteContext& ctx)
{
    const SpectralGrid grid(32);
    GalerkinConfig gc;
    gc.scheme.dt = 1e-3;
    gc.scheme.n_steps = 100;
    gc.decay_exponent = 3.0;
    const int paths = ctx.paths.value_or(50);
    const GalerkinEnsemble e = galerkin_ensemble(smooth_small(grid), gc, paths, ctx.seed, grid);
    for (std::size_t p = 0; p < e.distances.size(); ++p) {
        ctx.records << JsonObject()
                           .str("schema", "sel.verify/1")
                           .str("suite", "galerkin")
                           .str("check", "distances")
                           .integer("path", static_cast<long long>(p))
                           .nums("value", e.distances[p])
                           .dump()
                    << '\n';
    }
    const bool pass = e.fraction_decreasing >= 0.8;
    emit_check(ctx, "galerkin", "fraction_decreasing", e.fraction_decreasing, 0.8, pass);
    return pass;
}

bool suite_inequalities(SuiteContext& ctx)
{
    const SpectralGrid grid(32);
    const double rho = 0.125;
    const InequalityReport r = inequality_corpora(grid, rho, 100, ctx.paths.value_or(20), ctx.seed);
    bool ok = true;
    const auto check = [&](const std::string& name, double value, double threshold, bool pass) {
        emit_check(ctx, "inequalities", name, value, threshold, pass);
        ok = ok && pass;
    };
    check("ladyzhenskaya_constant_field", r.constant_ratio, 1.0,
          std::abs(r.constant_ratio - 1.0) <= 1e-12);
    check("mu0", r.mu0, 0.0, std::isfinite(r.mu0) && r.mu0 >= 1.0);
    check("mu1", r.mu1, 0.0, std::isfinite(r.mu1) && r.mu1 > 0.0);
    check("epsilon1_times_mu1", r.epsilon1 * r.mu1, 1.0, r.epsilon1 * r.mu1 < 1.0);
    return ok;
}

}  // namespace

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err)
{
    static const std::vector<std::pair<std::string, bool (*)(SuiteContext&)>> suites = {
        {"trace", suite_trace},
        {"strato", suite_strato},
        {"galerkin", suite_galerkin},
        {"inequalities", suite_inequalities},
    };
    const bool all = opts.suite == "all";
    if (!all && std::none_of(suites.begin(), suites.end(),
                             [&](const auto& s) { return s.first == opts.suite; })) {
        err << "unknown suite '" << opts.suite << "' (trace, strato, galerkin, inequalities, all)\n";
        return exit_config;
    }
    if (opts.paths && *opts.paths < 1) {
        err << "--paths must be >= 1\n";
        return exit_config;
    }
    return guarded(err, [&]() {
        std::ofstream file;
        std::ostream* records = &out;
        if (opts.out_dir) {
            make_directory(*opts.out_dir);
            file = open_output(fs::path(*opts.out_dir) / "verify.ndjson");
            records = &file;
        }
        SuiteContext ctx{opts.seed.value_or(2024), opts.paths, opts.inject_fpsi_sign_error,
                         *records, err};
        bool ok = true;
        for (const auto& [name, run] : suites) {
            if (!all && name != opts.suite) {
                continue;
            }
            err << name << ":\n";
            const bool pass = run(ctx);
            err << name << ": " << (pass ? "PASS" : "FAIL") << '\n';
            ok = ok && pass;
        }
        return static_cast<int>(ok ? exit_ok : exit_contract);
    });
}

// ---------------------------------------------------------------------------
// ensemble

namespace {

struct Moments
{
    double mean = 0.0;
    double se = 0.0;
};

Moments moments(const std::vector<double>& x)
{
    Moments m;
    const double n = static_cast<double>(x.size());
    for (const double v : x) {
        m.mean += v;
    }
    m.mean /= n;
    if (x.size() > 1) {
        double ss = 0.0;
        for (const double v : x) {
            ss += (v - m.mean) * (v - m.mean);
        }
        m.se = std::sqrt(ss / (n - 1.0) / n);
    }
    return m;
}

}  // namespace

int cmd_ensemble(const CommonOptions& opts, int paths, std::ostream& out, std::ostream& err)
{
    if (paths < 1) {
        err << "--paths must be >= 1\n";
        return exit_config;
    }
    return guarded(err, [&]() {
        const Setup s = load_setup(opts);
        const MonitorConfig mon = monitor_config(s);
        const fs::path dir = s.cfg.output.directory;
        make_directory(dir);

        std::vector<RunResult> results(static_cast<std::size_t>(paths));
        std::vector<std::string> failures(static_cast<std::size_t>(paths));
#pragma omp parallel for schedule(dynamic)
        for (int p = 0; p < paths; ++p) {
            try {
                char name[32];
                std::snprintf(name, sizeof name, "path_%04d.ndjson", p);
                std::ofstream os = open_output(dir / name);
                const SampleSink sink = [&](const SampleRecord& rec, const SimState&) {
                    os << run_record_json(rec) << '\n';
                };
                NoiseStreams rng(derive_seed(s.cfg.noise.seed, static_cast<std::uint64_t>(p)),
                                 s.model.truncation_n);
                results[static_cast<std::size_t>(p)] =
                    run_with_continuation(s.init, s.model, s.scheme, mon, *s.grid, rng, sink);
            } catch (const std::exception& e) {
                failures[static_cast<std::size_t>(p)] = e.what();
            }
        }
        for (const std::string& f : failures) {
            if (!f.empty()) {
                throw std::runtime_error(f);
            }
        }

        std::size_t samples = results.front().trajectory.samples.size();
        int unresolved = 0;
        for (const RunResult& r : results) {
            samples = std::min(samples, r.trajectory.samples.size());
            unresolved += r.continuation.unresolved ? 1 : 0;
        }
        std::ofstream agg = open_output(dir / "aggregate.ndjson");
        std::vector<double> energy(results.size());
        std::vector<double> balance(results.size());
        std::vector<double> residual(results.size());
        std::vector<double> mart(results.size());
        std::vector<double> sup(results.size());
        for (std::size_t k = 0; k < samples; ++k) {
            for (std::size_t p = 0; p < results.size(); ++p) {
                const SampleRecord& r = results[p].trajectory.samples[k];
                energy[p] = r.energy;
                balance[p] = r.energy - r.e0 + r.dissipation;
                residual[p] = r.residual;
                mart[p] = r.martingale_x;
                sup[p] = r.local_sup;
            }
            const SampleRecord& first = results.front().trajectory.samples[k];
            const Moments me = moments(energy);
            const Moments mb = moments(balance);
            const Moments mr = moments(residual);
            const Moments mm = moments(mart);
            const Moments ms = moments(sup);
            agg << JsonObject()
                       .str("schema", "sel.aggregate/1")
                       .num("t", first.t)
                       .integer("paths", paths)
                       .num("E_mean", me.mean)
                       .num("E_se", me.se)
                       .num("balance_mean", mb.mean)
                       .num("balance_se", mb.se)
                       .num("trace_drift", first.trace_drift)
                       .num("residual_mean", mr.mean)
                       .num("residual_se", mr.se)
                       .num("martingale_x_mean", mm.mean)
                       .num("martingale_x_se", mm.se)
                       .num("local_sup_mean", ms.mean)
                       .num("local_sup_se", ms.se)
                       .dump()
                << '\n';
        }
        out << "ensemble: paths=" << paths << " samples=" << samples
            << " unresolved=" << unresolved << '\n';
        return static_cast<int>(unresolved > 0 ? exit_singularity : exit_ok);
    });
}

// ---------------------------------------------------------------------------
// picard, galerkin

int cmd_picard(const CommonOptions& opts, int pairs, std::ostream& out, std::ostream& err)
{
    if (pairs < 1) {
        err << "--paths must be >= 1\n";
        return exit_config;
    }
    return guarded(err, [&]() {
        const Setup s = load_setup(opts);
        PicardProblem problem;
        problem.v0 = s.init.v.data;
        problem.u0 = s.init.u.data;
        problem.radius = 10.0;
        problem.horizon = 1e-3;
        problem.intervals = 20;
        problem.noise = picard_noise(s.model, problem.horizon, problem.intervals,
                                     derive_seed(s.cfg.noise.seed, 1));
        const PicardReport r =
            measure_picard(problem, s.model, pairs, 8, derive_seed(s.cfg.noise.seed, 2), *s.grid);

        std::ofstream file;
        std::ostream* records = &out;
        if (opts.out_dir) {
            make_directory(*opts.out_dir);
            file = open_output(fs::path(*opts.out_dir) / "picard.ndjson");
            records = &file;
        }
        const bool lip_ok = r.max_lipschitz < 1.0;
        const bool con_ok = r.max_contraction < 0.9;
        *records << JsonObject()
                        .str("schema", "sel.picard/1")
                        .num("radius", problem.radius)
                        .num("horizon", problem.horizon)
                        .nums("lipschitz_ratios", r.lipschitz_ratios)
                        .num("max_lipschitz", r.max_lipschitz)
                        .nums("iterate_differences", r.iterate_differences)
                        .nums("contraction_ratios", r.contraction_ratios)
                        .num("max_contraction", r.max_contraction)
                        .boolean("pass", lip_ok && con_ok)
                        .dump()
                 << '\n';
        err << "picard: max Lipschitz ratio " << format_number(r.max_lipschitz)
            << (lip_ok ? " ok" : " FAIL") << ", max contraction "
            << format_number(r.max_contraction) << (con_ok ? " ok" : " FAIL") << '\n';
        return static_cast<int>(lip_ok && con_ok ? exit_ok : exit_contract);
    });
}

int cmd_galerkin(const CommonOptions& opts, int paths, std::ostream& out, std::ostream& err)
{
    if (paths < 1) {
        err << "--paths must be >= 1\n";
        return exit_config;
    }
    return guarded(err, [&]() {
        const Setup s = load_setup(opts);
        GalerkinConfig gc;
        gc.scheme = s.scheme;
        gc.decay_exponent = s.cfg.noise.s;
        gc.amplitude = s.cfg.noise.amplitude;
        const GalerkinEnsemble e =
            galerkin_ensemble(s.init, gc, paths, s.cfg.noise.seed, *s.grid);

        std::ofstream file;
        std::ostream* records = &out;
        if (opts.out_dir) {
            make_directory(*opts.out_dir);
            file = open_output(fs::path(*opts.out_dir) / "galerkin.ndjson");
            records = &file;
        }
        std::vector<double> truncations(gc.truncations.begin(), gc.truncations.end());
        for (std::size_t p = 0; p < e.distances.size(); ++p) {
            *records << JsonObject()
                            .str("schema", "sel.galerkin/1")
                            .integer("path", static_cast<long long>(p))
                            .nums("truncations", truncations)
                            .nums("distances", e.distances[p])
                            .dump()
                     << '\n';
        }
        const bool pass = e.fraction_decreasing >= 0.8;
        err << "galerkin: decreasing on " << format_number(e.fraction_decreasing) << " of "
            << paths << " paths" << (pass ? " ok" : " FAIL") << '\n';
        return static_cast<int>(pass ? exit_ok : exit_contract);
    });
}

}  // namespace sel::cli
