// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridnoise/error.hpp"

namespace gridnoise {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::Disconnected: return "Disconnected";
        case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
        case ErrorKind::SelfLoop: return "SelfLoop";
        case ErrorKind::DuplicateEdge: return "DuplicateEdge";
        case ErrorKind::NonUniformRatio: return "NonUniformRatio";
        case ErrorKind::NonUniformParameters: return "NonUniformParameters";
        case ErrorKind::FinitenessViolated: return "FinitenessViolated";
        case ErrorKind::EigensolverFailure: return "EigensolverFailure";
        case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorKind::NotHurwitz: return "NotHurwitz";
        case ErrorKind::SingularSystem: return "SingularSystem";
        case ErrorKind::EigenvalueCollision: return "EigenvalueCollision";
        case ErrorKind::NotDiagonalizable: return "NotDiagonalizable";
        case ErrorKind::CriticalDamping: return "CriticalDamping";
        case ErrorKind::FilterResonance: return "FilterResonance";
        case ErrorKind::UnstableIntegration: return "UnstableIntegration";
    }
    return "Unknown";
}

bool is_input_error(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::ParseError:
        case ErrorKind::InvalidArgument:
        case ErrorKind::IndexOutOfRange:
        case ErrorKind::Disconnected:
        case ErrorKind::NonPositiveWeight:
        case ErrorKind::SelfLoop:
        case ErrorKind::DuplicateEdge:
        case ErrorKind::NonUniformRatio:
        case ErrorKind::NonUniformParameters:
        case ErrorKind::FinitenessViolated:
            return true;
        default:
            return false;
    }
}

}  // namespace gridnoise
