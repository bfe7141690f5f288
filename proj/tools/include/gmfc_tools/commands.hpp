#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gmfc::tools {

enum ExitCode : int { ok = 0, check_failed = 1, parse_failed = 2 };

struct Tolerances {
    double psd = -1e-8;
    double symmetry = 1e-10;
    double explicit_k = 1e-6;
    double norm_ceiling = 1e6;
    double sigmas = 3.0;
    double relative = 0.01;
};

struct RunConfig {
    std::string subcommand;
    std::string problem_path;
    std::string preset;
    std::size_t n = 16;
    double steps_per_unit = 1000.0;
    std::size_t paths = 10'000;
    std::uint64_t seed = 12345;
    std::string out_dir = "gmfc_out";
    Tolerances tol{};
    double shift = 0.5;
    bool particle_mode = false;
    /// Write every `csv_stride`-th time node to the trajectory CSVs.
    std::size_t csv_stride = 1;
    std::optional<std::size_t> threads;
    /// Systemic-risk overrides.
    std::optional<double> k, T;
};

int cmd_solve(const RunConfig& config, std::ostream& log);
int cmd_certify(const RunConfig& config, std::ostream& log);
int cmd_simulate(const RunConfig& config, std::ostream& log);
int cmd_systemic_risk(const RunConfig& config, std::ostream& log);

/// Dispatches on config.subcommand; maps exceptions to exit codes.
int run(const RunConfig& config, std::ostream& log);

/// Parses argv and runs. Usage errors exit with parse_failed.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gmfc::tools
