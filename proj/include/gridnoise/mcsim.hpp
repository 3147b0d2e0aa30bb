// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Monte-Carlo estimates of the stationary output variance of the swing
// dynamics driven by exponentially correlated (Ornstein-Uhlenbeck) forcing.

#include "gridnoise/sysmodel.hpp"

#include <cstdint>
#include <vector>

namespace gridnoise {

struct SimConfig {
    double dt = 0.01;
    double t_burn = 100.0;
    double t_measure = 1e4;
    long n_traj = 32;
    std::uint64_t seed = 42;
    /// Optional initial phases (empty: start from rest at the origin).
    Eigen::VectorXd initial_phase;
};

struct VarianceEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    long n_effective = 0;
};

/// Slowest relaxation time of the unforced swing dynamics, ignoring the
/// marginal phase-shift mode.
[[nodiscard]] double relaxation_time(const SwingModel& model);

/// Throws InvalidArgument unless dt resolves both the filter and the fastest
/// swing mode (dt < tau/10, dt < 0.1 min(2 pi / sqrt(lambda_max^M), 1/gamma_max))
/// and t_burn >= 10 max(tau, 1/gamma_min, relaxation time).
void validate_config(const SimConfig& cfg, const SwingModel& model, double tau);

/// A configuration meeting validate_config with a 2x margin on dt and burn-in.
[[nodiscard]] SimConfig suggest_config(const SwingModel& model, double tau);

/// Exact OU transition with unit stationary variance:
/// eta' = eta e^{-dt/tau} + sqrt(1 - e^{-2 dt/tau}) xi.
[[nodiscard]] double ou_step(double eta, double tau, double dt, double xi);

/// Time-averaged y^T y after burn-in, averaged over independent trajectories.
///
/// Integration is semi-implicit: frequencies are updated implicitly in the
/// damping term, phases explicitly with the new frequencies, and the network
/// mean phase is subtracted after every step. Each trajectory draws from its
/// own RNG stream derived from (seed, trajectory index), so the estimate is
/// bit-reproducible regardless of thread count.
[[nodiscard]] VarianceEstimate simulate_variance(const SwingModel& model, const NoiseSpec& noise,
                                                 const PerformanceSpec& perf, const SimConfig& cfg);

struct CorrelatorPoint {
    double lag = 0.0;  ///< realized lag, requested lag rounded to a multiple of dt
    double value = 0.0;
    double standard_error = 0.0;
};

/// Empirical E[eta(t) eta(t + s)] of the unit-variance OU filter.
[[nodiscard]] std::vector<CorrelatorPoint> estimate_correlator(double tau,
                                                               const std::vector<double>& lags,
                                                               const SimConfig& cfg);

}  // namespace gridnoise
