// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Command-line front end. Each subcommand is a function from a parsed RunSpec
// to an exit code and an output document, so it can be driven directly from
// tests without going through argv.

#include "gridnoise/sysmodel.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gridnoise::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 1,
    kNumericalError = 2,
};

struct RunSpec {
    std::filesystem::path network;
    std::optional<std::filesystem::path> nodes;

    std::string measure = "phase-coherence";  // phase-coherence | freq-coherence | custom
    std::optional<std::filesystem::path> q11;
    std::optional<std::filesystem::path> q22;

    std::optional<Index> node;
    double amplitude = 1.0;
    std::optional<std::filesystem::path> noise_vector;
    std::string mode = "coherent";  // coherent | independent

    std::optional<double> tau;
    std::optional<std::string> tau_grid;  // LO:HI:COUNT

    std::string method = "spectral";   // spectral | oracle | mc | all
    std::string gramian = "lyapunov";  // lyapunov | eigen
    std::string format = "json";       // json | csv

    std::uint64_t seed = 42;
    std::optional<double> dt;
    std::optional<long> traj;
    std::optional<double> t_burn;
    std::optional<double> t_measure;
    std::vector<double> lags;  // correlator lags in units of tau (simulate only)
};

struct ValidateSpec {
    std::uint64_t seed = 42;
    std::vector<Index> sizes{3, 4, 5, 6, 7, 8};
    int instances_per_size = 10;
    /// Test hook: scales the phase kernel by (1 + 1e-3) inside the closed form.
    bool perturb_f = false;
    std::string format = "json";
};

struct CommandResult {
    int exit_code = kSuccess;
    std::string output;
};

/// 25 log-spaced points over [1e-3, 1e3] unless `grid` ("LO:HI:COUNT") says
/// otherwise; a bare `tau` gives a single point. Throws InvalidArgument on an
/// empty, non-positive or non-ascending grid.
[[nodiscard]] std::vector<double> parse_tau_grid(const std::optional<std::string>& grid,
                                                 const std::optional<double>& tau);

[[nodiscard]] CommandResult cmd_measure(const RunSpec& spec);
[[nodiscard]] CommandResult cmd_sweep(const RunSpec& spec);
[[nodiscard]] CommandResult cmd_rank(const RunSpec& spec);
[[nodiscard]] CommandResult cmd_simulate(const RunSpec& spec);
[[nodiscard]] CommandResult cmd_validate(const ValidateSpec& spec);

/// Full entry point: parses argv, dispatches, writes the document to --out or
/// `out`, and returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gridnoise::cli
