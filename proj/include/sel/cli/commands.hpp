#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace sel::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 1,
    exit_singularity = 2,
    exit_contract = 3,
};

struct CommonOptions
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

/// run: writes run.ndjson, snapshots and summary.json into the output
/// directory. Exit 2 on an unresolved singularity (artifacts kept).
int cmd_run(const CommonOptions& opts, std::ostream& out, std::ostream& err);

struct VerifyOptions
{
    std::string suite = "all";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    /// Ensemble size override for the stochastic suites.
    std::optional<int> paths;
    /// Test fixture: flips the sign of the Ito correction in the strato suite.
    bool inject_fpsi_sign_error = false;
};

/// verify: suites trace, strato, galerkin, inequalities, all. Exit 3 if a
/// contract fails, 1 for an unknown suite.
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

/// ensemble: per-path NDJSON plus aggregate.ndjson (means and standard
/// errors per sample time).
int cmd_ensemble(const CommonOptions& opts, int paths, std::ostream& out, std::ostream& err);

/// picard: Lipschitz ratio over random input pairs and fixed-point
/// contraction for the configured grid and initial data.
int cmd_picard(const CommonOptions& opts, int pairs, std::ostream& out, std::ostream& err);

/// galerkin: nested truncations (4, 9, 16, 25) at the configured decay over
/// `paths` seeds; reports the fraction of decreasing distance sequences.
int cmd_galerkin(const CommonOptions& opts, int paths, std::ostream& out, std::ostream& err);

}  // namespace sel::cli
