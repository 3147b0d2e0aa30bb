// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gridnoise/cli.hpp"
#include "gridnoise/error.hpp"
#include "gridnoise/measure.hpp"
#include "gridnoise/sysmodel.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>

namespace gridnoise::cli {

using Json = nlohmann::ordered_json;

[[nodiscard]] SwingModel load_model(const RunSpec& spec);
[[nodiscard]] PerformanceSpec load_performance(const RunSpec& spec, Index n);
[[nodiscard]] NoiseSpec load_noise(const RunSpec& spec, Index n, double tau);

/// Dense whitespace-separated matrix, one row per line.
[[nodiscard]] Eigen::MatrixXd load_matrix(const std::filesystem::path& path);
/// All numbers in the file, in reading order.
[[nodiscard]] Eigen::VectorXd load_vector(const std::filesystem::path& path);

[[nodiscard]] Json number(double v);
[[nodiscard]] Json number(const std::optional<double>& v);
[[nodiscard]] std::string format17(double v);
[[nodiscard]] Json network_json(const Network& net);
[[nodiscard]] Json diagnostics_json(const Diagnostics& d);
[[nodiscard]] Json error_json(ErrorKind kind, const std::string& message);

/// Runs `body`, mapping gridnoise::Error to exit 1 (input) or 2 (numerical)
/// with an {"error": ...} document, and any other exception to exit 1.
[[nodiscard]] CommandResult guarded(const std::function<CommandResult()>& body);

[[nodiscard]] std::string dump(const Json& doc);

}  // namespace gridnoise::cli
