// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridnoise/mcsim.hpp"

#include "gridnoise/error.hpp"
#include "gridnoise/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace gridnoise {

namespace {

constexpr double kOverflowGuard = 1e100;
constexpr Index kGuardInterval = 1024;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 trajectory_stream(std::uint64_t seed, std::size_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) + static_cast<std::uint64_t>(index)));
}

VarianceEstimate summarize(const std::vector<double>& samples) {
    VarianceEstimate est;
    const double n = static_cast<double>(samples.size());
    est.n_effective = static_cast<long>(samples.size());
    for (double s : samples) est.mean += s;
    est.mean /= n;
    if (samples.size() > 1) {
        double ss = 0.0;
        for (double s : samples) ss += (s - est.mean) * (s - est.mean);
        est.standard_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return est;
}

Index steps_for(double horizon, double dt) {
    return static_cast<Index>(std::ceil(horizon / dt - 1e-9));
}

void validate_common(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.t_measure > 0.0) || !(cfg.t_burn >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "dt and t_measure must be positive, t_burn >= 0");
    }
    if (cfg.n_traj < 2) {
        throw Error(ErrorKind::InvalidArgument, "at least two trajectories are needed");
    }
}

}  // namespace

double relaxation_time(const SwingModel& model) {
    const Index n = model.size();
    const Eigen::VectorXd minv = model.inertia().cwiseInverse();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    a.block(0, n, n, n).setIdentity();
    a.block(n, 0, n, n) = -(minv.asDiagonal() * laplacian(model.network()));
    a.block(n, n, n, n).diagonal() = -minv.cwiseProduct(model.damping());
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    if (es.info() != Eigen::Success) {
        throw Error(ErrorKind::EigensolverFailure, "eigensolver failed on swing matrix");
    }
    const Eigen::VectorXcd mu = es.eigenvalues();
    const double scale = std::max(1.0, mu.cwiseAbs().maxCoeff());
    double slowest = std::numeric_limits<double>::infinity();
    bool skipped_marginal = false;
    for (Index k = 0; k < mu.size(); ++k) {
        if (!skipped_marginal && std::abs(mu(k)) < 1e-9 * scale) {
            skipped_marginal = true;
            continue;
        }
        slowest = std::min(slowest, -mu(k).real());
    }
    return 1.0 / slowest;
}

void validate_config(const SimConfig& cfg, const SwingModel& model, double tau) {
    validate_common(cfg);
    const Eigen::ArrayXd ratio = model.damping().array() / model.inertia().array();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled_laplacian(model, 0.0),
                                                      Eigen::EigenvaluesOnly);
    const double lambda_max = es.eigenvalues().maxCoeff();
    const double swing_limit =
        0.1 * std::min(2.0 * std::numbers::pi / std::sqrt(lambda_max), 1.0 / ratio.maxCoeff());
    std::ostringstream msg;
    if (!(cfg.dt < tau / 10.0) || !(cfg.dt < swing_limit)) {
        msg << "dt = " << cfg.dt << " does not resolve the dynamics (need dt < "
            << std::min(tau / 10.0, swing_limit) << ")";
        throw Error(ErrorKind::InvalidArgument, msg.str());
    }
    const double burn_min =
        10.0 * std::max({tau, 1.0 / ratio.minCoeff(), relaxation_time(model)});
    if (!(cfg.t_burn >= burn_min)) {
        msg << "t_burn = " << cfg.t_burn << " is shorter than " << burn_min;
        throw Error(ErrorKind::InvalidArgument, msg.str());
    }
    if (cfg.initial_phase.size() != 0 && cfg.initial_phase.size() != model.size()) {
        throw Error(ErrorKind::InvalidArgument, "initial phase length must equal node count");
    }
}

SimConfig suggest_config(const SwingModel& model, double tau) {
    const Eigen::ArrayXd ratio = model.damping().array() / model.inertia().array();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled_laplacian(model, 0.0),
                                                      Eigen::EigenvaluesOnly);
    const double lambda_max = es.eigenvalues().maxCoeff();
    const double swing_limit =
        0.1 * std::min(2.0 * std::numbers::pi / std::sqrt(lambda_max), 1.0 / ratio.maxCoeff());
    const double slow = std::max({tau, 1.0 / ratio.minCoeff(), relaxation_time(model)});
    SimConfig cfg;
    cfg.dt = 0.5 * std::min(tau / 10.0, swing_limit);
    cfg.t_burn = 20.0 * slow;
    cfg.t_measure = 500.0 * slow;
    return cfg;
}

double ou_step(double eta, double tau, double dt, double xi) {
    const double decay = std::exp(-dt / tau);
    return eta * decay + std::sqrt(-std::expm1(-2.0 * dt / tau)) * xi;
}

VarianceEstimate simulate_variance(const SwingModel& model, const NoiseSpec& noise,
                                   const PerformanceSpec& perf, const SimConfig& cfg) {
    const Index n = model.size();
    noise.validate(n);
    perf.validate(n);
    require_finiteness(perf);
    validate_config(cfg, model, noise.tau);

    const std::vector<NoiseSpec> channels = coherent_channels(noise);
    const Index n_channels = static_cast<Index>(channels.size());
    Eigen::MatrixXd drive(n, n_channels);
    for (Index c = 0; c < n_channels; ++c) {
        drive.col(c) = channels[static_cast<std::size_t>(c)].amplitude;
    }
    const Eigen::MatrixXd lap = laplacian(model.network());
    const Eigen::ArrayXd minv = model.inertia().cwiseInverse().array();
    const Eigen::ArrayXd damp_denominator = 1.0 + cfg.dt * model.damping().array() * minv;
    const bool has_phase = perf.q11.cwiseAbs().maxCoeff() > 0.0;
    const bool has_freq = perf.q22.cwiseAbs().maxCoeff() > 0.0;
    const Index n_burn = steps_for(cfg.t_burn, cfg.dt);
    const Index n_measure = steps_for(cfg.t_measure, cfg.dt);
    const double tau = noise.tau;
    const double decay = std::exp(-cfg.dt / tau);
    const double kick = std::sqrt(-std::expm1(-2.0 * cfg.dt / tau));

    std::vector<double> samples(static_cast<std::size_t>(cfg.n_traj));
    parallel_for(samples.size(), [&](std::size_t traj) {
        auto rng = trajectory_stream(cfg.seed, traj);
        std::normal_distribution<double> normal;
        Eigen::VectorXd phi = cfg.initial_phase.size() ? cfg.initial_phase
                                                       : Eigen::VectorXd::Zero(n).eval();
        phi.array() -= phi.mean();
        Eigen::VectorXd omega = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd eta = Eigen::VectorXd::Zero(n_channels);
        double acc = 0.0;

        for (Index step = 0; step < n_burn + n_measure; ++step) {
            const Eigen::VectorXd force = drive * eta - lap * phi;
            omega = ((omega.array() + cfg.dt * minv * force.array()) / damp_denominator).matrix();
            phi += cfg.dt * omega;
            phi.array() -= phi.mean();
            for (Index c = 0; c < n_channels; ++c) {
                eta(c) = eta(c) * decay + kick * normal(rng);
            }
            if (step >= n_burn) {
                if (has_phase) acc += phi.dot(perf.q11 * phi);
                if (has_freq) acc += omega.dot(perf.q22 * omega);
            }
            if (step % kGuardInterval == 0 &&
                !(phi.cwiseAbs().maxCoeff() < kOverflowGuard &&
                  omega.cwiseAbs().maxCoeff() < kOverflowGuard)) {
                throw Error(ErrorKind::UnstableIntegration,
                            "state exceeded the overflow guard; reduce dt");
            }
        }
        samples[traj] = acc / static_cast<double>(n_measure);
    });
    return summarize(samples);
}

std::vector<CorrelatorPoint> estimate_correlator(double tau, const std::vector<double>& lags,
                                                 const SimConfig& cfg) {
    validate_common(cfg);
    if (!(tau > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "correlation time tau must be positive");
    }
    if (!(cfg.dt < tau / 10.0) || !(cfg.t_burn >= 10.0 * tau)) {
        throw Error(ErrorKind::InvalidArgument,
                    "correlator needs dt < tau/10 and t_burn >= 10 tau");
    }
    std::vector<Index> lag_steps;
    Index max_lag = 0;
    for (double s : lags) {
        if (!(s >= 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "lags must be non-negative");
        }
        lag_steps.push_back(static_cast<Index>(std::llround(s / cfg.dt)));
        max_lag = std::max(max_lag, lag_steps.back());
    }
    const Index n_burn = steps_for(cfg.t_burn, cfg.dt);
    const Index n_measure = steps_for(cfg.t_measure, cfg.dt);
    if (n_measure <= max_lag) {
        throw Error(ErrorKind::InvalidArgument, "t_measure must exceed the largest lag");
    }
    const double decay = std::exp(-cfg.dt / tau);
    const double kick = std::sqrt(-std::expm1(-2.0 * cfg.dt / tau));

    const std::size_t n_traj = static_cast<std::size_t>(cfg.n_traj);
    std::vector<std::vector<double>> per_lag(lags.size(), std::vector<double>(n_traj));
    parallel_for(n_traj, [&](std::size_t traj) {
        auto rng = trajectory_stream(cfg.seed, traj);
        std::normal_distribution<double> normal;
        const Index ring_size = max_lag + 1;
        std::vector<double> ring(static_cast<std::size_t>(ring_size), 0.0);
        std::vector<double> acc(lags.size(), 0.0);
        std::vector<Index> count(lags.size(), 0);
        double eta = 0.0;
        for (Index step = 0; step < n_burn; ++step) {
            eta = eta * decay + kick * normal(rng);
        }
        for (Index i = 0; i < n_measure; ++i) {
            eta = eta * decay + kick * normal(rng);
            ring[static_cast<std::size_t>(i % ring_size)] = eta;
            for (std::size_t k = 0; k < lags.size(); ++k) {
                const Index s = lag_steps[k];
                if (i >= s) {
                    acc[k] += eta * ring[static_cast<std::size_t>((i - s) % ring_size)];
                    ++count[k];
                }
            }
        }
        for (std::size_t k = 0; k < lags.size(); ++k) {
            per_lag[k][traj] = acc[k] / static_cast<double>(count[k]);
        }
    });

    std::vector<CorrelatorPoint> out;
    for (std::size_t k = 0; k < lags.size(); ++k) {
        const VarianceEstimate est = summarize(per_lag[k]);
        out.push_back({static_cast<double>(lag_steps[k]) * cfg.dt, est.mean, est.standard_error});
    }
    return out;
}

}  // namespace gridnoise
