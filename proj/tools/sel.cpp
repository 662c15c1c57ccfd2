#include "sel/cli/commands.hpp"
#include "sel/kernels.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

namespace {

void apply_thread_cap()
{
    const char* env = std::getenv("SEL_THREADS");
    if (env == nullptr || *env == '\0') {
        return;
    }
    try {
        const int n = std::stoi(env);
        if (n > 0) {
            sel::kernels::set_max_threads(n);
        }
    } catch (const std::exception&) {
        std::cerr << "ignoring malformed SEL_THREADS='" << env << "'\n";
    }
}

}  // namespace

int main(int argc, char** argv)
{
    apply_thread_cap();

    CLI::App app{"Stochastic Ericksen-Leslie simulator on the unit 2-torus"};
    app.require_subcommand(1);

    sel::cli::CommonOptions common;
    std::uint64_t seed = 0;
    std::string out_dir;
    int paths = 0;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "Configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "Override the noise seed");
        sub->add_option("--out", out_dir, "Override the output directory");
    };

    CLI::App* run = app.add_subcommand("run", "Single trajectory with monitors and snapshots");
    add_common(run);

    CLI::App* ensemble = app.add_subcommand("ensemble", "Independent paths plus aggregate statistics");
    add_common(ensemble);
    ensemble->add_option("--paths", paths, "Number of paths")->required();

    CLI::App* picard = app.add_subcommand("picard", "Cutoff fixed-point map: Lipschitz and contraction");
    add_common(picard);
    int pairs = 10;
    picard->add_option("--paths", pairs, "Number of random input pairs")->capture_default_str();

    CLI::App* galerkin = app.add_subcommand("galerkin", "Nested noise truncations (4, 9, 16, 25)");
    add_common(galerkin);
    int galerkin_paths = 50;
    galerkin->add_option("--paths", galerkin_paths, "Number of seeds")->capture_default_str();

    sel::cli::VerifyOptions vopts;
    CLI::App* verify = app.add_subcommand("verify", "Numerical verification suites");
    verify->add_option("--suite", vopts.suite, "trace, strato, galerkin, inequalities or all")->capture_default_str();
    verify->add_option("--seed", seed, "Master seed");
    verify->add_option("--out", out_dir, "Write verify.ndjson here instead of stdout");
    verify->add_option("--paths", paths, "Ensemble size for the stochastic suites");
    verify->add_flag("--inject-fpsi-sign-error", vopts.inject_fpsi_sign_error)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : sel::cli::exit_config;
    }

    const auto finish_common = [&](CLI::App* sub) {
        if (sub->count("--seed") > 0) {
            common.seed = seed;
        }
        if (sub->count("--out") > 0) {
            common.out_dir = out_dir;
        }
    };

    if (*run) {
        finish_common(run);
        return sel::cli::cmd_run(common, std::cout, std::cerr);
    }
    if (*ensemble) {
        finish_common(ensemble);
        return sel::cli::cmd_ensemble(common, paths, std::cout, std::cerr);
    }
    if (*picard) {
        finish_common(picard);
        return sel::cli::cmd_picard(common, pairs, std::cout, std::cerr);
    }
    if (*galerkin) {
        finish_common(galerkin);
        return sel::cli::cmd_galerkin(common, galerkin_paths, std::cout, std::cerr);
    }
    if (verify->count("--seed") > 0) {
        vopts.seed = seed;
    }
    if (verify->count("--out") > 0) {
        vopts.out_dir = out_dir;
    }
    if (verify->count("--paths") > 0) {
        vopts.paths = paths;
    }
    return sel::cli::cmd_verify(vopts, std::cout, std::cerr);
}
