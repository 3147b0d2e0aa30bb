// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridnoise {

enum class ErrorKind {
    // input / validation
    ParseError,
    InvalidArgument,
    IndexOutOfRange,
    Disconnected,
    NonPositiveWeight,
    SelfLoop,
    DuplicateEdge,
    NonUniformRatio,
    NonUniformParameters,
    FinitenessViolated,
    // numerical
    EigensolverFailure,
    DegenerateDenominator,
    NotHurwitz,
    SingularSystem,
    EigenvalueCollision,
    NotDiagonalizable,
    CriticalDamping,
    FilterResonance,
    UnstableIntegration,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

/// True for kinds caused by bad input rather than by a numerical breakdown.
[[nodiscard]] bool is_input_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when d_i/m_i is not uniform; carries the observed relative spread.
class NonUniformRatioError : public Error {
public:
    NonUniformRatioError(double spread, const std::string& what)
        : Error(ErrorKind::NonUniformRatio, what), spread_(spread) {}

    [[nodiscard]] double spread() const noexcept { return spread_; }

private:
    double spread_;
};

}  // namespace gridnoise
