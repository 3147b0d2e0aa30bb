// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace gridnoise {

enum class Method { spectral, oracle, montecarlo };

[[nodiscard]] constexpr std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::spectral: return "spectral";
        case Method::oracle: return "oracle";
        case Method::montecarlo: return "montecarlo";
    }
    return "unknown";
}

/// Per-method bookkeeping. Fields a method does not produce stay empty.
struct Diagnostics {
    std::optional<long> term_count;
    std::optional<long> dropped_terms;
    std::optional<double> eps;
    std::optional<double> fit_residual;
    std::optional<double> standard_error;
    std::optional<long> n_effective;
    std::vector<double> eps_schedule;
    std::vector<double> eps_values;
};

struct MeasureResult {
    double value = 0.0;
    Method method = Method::spectral;
    Diagnostics diagnostics;
};

}  // namespace gridnoise
