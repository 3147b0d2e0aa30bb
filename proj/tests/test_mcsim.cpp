// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "test_helpers.hpp"

#include "gridnoise/gramian.hpp"
#include "gridnoise/mcsim.hpp"
#include "gridnoise/spectral.hpp"

#include <doctest.h>

#include <random>

using namespace gridnoise;
using namespace gridnoise::testing;

namespace {

SimConfig hand_config() {
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.t_burn = 100.0;
    cfg.t_measure = 1e4;
    cfg.n_traj = 32;
    cfg.seed = 42;
    return cfg;
}

bool within_band(const VarianceEstimate& est, double expect) {
    return std::abs(est.mean - expect) <= std::max(0.05 * expect, 3.0 * est.standard_error);
}

}  // namespace

TEST_CASE("ou_step") {
    CHECK(ou_step(0.7, 1.0, 1e-12, 0.0) == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(ou_step(0.0, 1.0, 0.1, 0.0) == 0.0);
    CHECK(ou_step(1.0, 2.0, 0.5, 0.0) == doctest::Approx(std::exp(-0.25)));

    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    const double tau = 1.0;
    const double dt = 0.05;
    double eta = 0.0;
    for (int i = 0; i < 1000; ++i) eta = ou_step(eta, tau, dt, normal(rng));
    // Batch means over blocks much longer than tau give an honest standard error.
    const int blocks = 200;
    const int per_block = 2000;
    std::vector<double> block_var(blocks);
    for (int b = 0; b < blocks; ++b) {
        double acc = 0.0;
        for (int i = 0; i < per_block; ++i) {
            eta = ou_step(eta, tau, dt, normal(rng));
            acc += eta * eta;
        }
        block_var[std::size_t(b)] = acc / per_block;
    }
    double mean = 0.0;
    for (double v : block_var) mean += v / blocks;
    double var = 0.0;
    for (double v : block_var) var += (v - mean) * (v - mean) / (blocks - 1);
    CHECK(std::abs(mean - 1.0) < 3.0 * std::sqrt(var / blocks));
}

TEST_CASE("estimate_correlator follows the exponential") {
    const double tau = 1.0;
    SimConfig cfg;
    cfg.dt = 0.05;
    cfg.t_burn = 20.0;
    cfg.t_measure = 2e4;
    cfg.n_traj = 16;
    cfg.seed = 7;
    const std::vector<double> lags{0.0, 0.5, 1.0, 2.0, 5.0};
    const auto points = estimate_correlator(tau, lags, cfg);
    REQUIRE(points.size() == lags.size());
    CHECK(points[0].standard_error < 0.01 * points[0].value);
    for (const auto& p : points) {
        CHECK(std::abs(p.value - std::exp(-p.lag / tau)) <= 3.0 * p.standard_error);
    }
    CHECK(points[2].lag == doctest::Approx(1.0));

    cfg.dt = 0.2;
    CHECK(error_kind([&] { return estimate_correlator(tau, lags, cfg); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("simulate_variance reproduces the 2-node hand value") {
    const VarianceEstimate est =
        simulate_variance(two_node(), NoiseSpec::single_node(2, 0, 1.0, 1.0),
                          PerformanceSpec::phase_coherence(2), hand_config());
    CHECK(within_band(est, 0.125));
    CHECK(est.n_effective == 32);
    CHECK(est.standard_error > 0.0);
}

TEST_CASE("simulate_variance halving dt stays within the statistical band") {
    SimConfig cfg = hand_config();
    cfg.t_measure = 2000.0;
    cfg.n_traj = 16;
    const NoiseSpec noise = NoiseSpec::single_node(3, 0, 1.0, 1.0);
    const double expect = phase_coherence(triangle(), 0, 1.0, 1.0).value;
    for (double dt : {0.02, 0.01, 0.005}) {
        cfg.dt = dt;
        const VarianceEstimate est =
            simulate_variance(triangle(), noise, PerformanceSpec::phase_coherence(3), cfg);
        CHECK(within_band(est, expect));
    }
}

TEST_CASE("simulate_variance degenerate forcing") {
    const SimConfig cfg = hand_config();
    const VarianceEstimate zero =
        simulate_variance(two_node(), NoiseSpec::single_node(2, 0, 0.0, 1.0),
                          PerformanceSpec::phase_coherence(2), cfg);
    CHECK(zero.mean == 0.0);

    SimConfig short_cfg = cfg;
    short_cfg.t_measure = 200.0;
    NoiseSpec uniform;
    uniform.amplitude = Eigen::VectorXd::Ones(3);
    uniform.tau = 1.0;
    const VarianceEstimate shifted =
        simulate_variance(triangle(), uniform, PerformanceSpec::phase_coherence(3), short_cfg);
    CHECK(std::abs(shifted.mean) < 1e-20);
}

TEST_CASE("simulate_variance is deterministic and shift invariant") {
    SimConfig cfg = hand_config();
    cfg.t_measure = 500.0;
    cfg.n_traj = 4;
    const NoiseSpec noise = NoiseSpec::single_node(3, 1, 1.0, 1.0);
    const PerformanceSpec perf = PerformanceSpec::phase_coherence(3);
    const VarianceEstimate a = simulate_variance(triangle(), noise, perf, cfg);
    const VarianceEstimate b = simulate_variance(triangle(), noise, perf, cfg);
    CHECK(a.mean == b.mean);
    CHECK(a.standard_error == b.standard_error);

    cfg.initial_phase = Eigen::VectorXd::Constant(3, 2.5);
    const VarianceEstimate shifted = simulate_variance(triangle(), noise, perf, cfg);
    CHECK(rel_err(shifted.mean, a.mean) < 1e-9);

    cfg.initial_phase.resize(0);
    cfg.seed = 43;
    CHECK(simulate_variance(triangle(), noise, perf, cfg).mean != a.mean);
}

TEST_CASE("simulate_variance validates its configuration") {
    const NoiseSpec noise = NoiseSpec::single_node(2, 0, 1.0, 1.0);
    const PerformanceSpec perf = PerformanceSpec::phase_coherence(2);
    SimConfig cfg = hand_config();
    cfg.dt = 0.5;
    CHECK(error_kind([&] { return simulate_variance(two_node(), noise, perf, cfg); }) ==
          ErrorKind::InvalidArgument);
    cfg = hand_config();
    cfg.t_burn = 1.0;
    CHECK(error_kind([&] { return simulate_variance(two_node(), noise, perf, cfg); }) ==
          ErrorKind::InvalidArgument);
    cfg = hand_config();
    cfg.n_traj = 1;
    CHECK(error_kind([&] { return simulate_variance(two_node(), noise, perf, cfg); }) ==
          ErrorKind::InvalidArgument);

    PerformanceSpec observable;
    observable.q11 = Eigen::MatrixXd::Identity(2, 2);
    observable.q22 = Eigen::MatrixXd::Zero(2, 2);
    CHECK(error_kind([&] { return simulate_variance(two_node(), noise, observable, hand_config()); }) ==
          ErrorKind::FinitenessViolated);

    const SimConfig suggested = suggest_config(two_node(), 1.0);
    CHECK_NOTHROW(validate_config(suggested, two_node(), 1.0));
}

TEST_CASE("Monte-Carlo agrees with the oracle for non-uniform damping") {
    Eigen::VectorXd m(2), d(2);
    m << 1, 1;
    d << 1, 2;
    const SwingModel model(Network(2, {{0, 1, 1.0}}), m, d);
    const NoiseSpec noise = NoiseSpec::single_node(2, 0, 1.0, 1.0);
    const PerformanceSpec perf = PerformanceSpec::phase_coherence(2);
    SimConfig cfg = suggest_config(model, 1.0);
    cfg.n_traj = 16;
    cfg.t_measure = 3000.0;
    const VarianceEstimate est = simulate_variance(model, noise, perf, cfg);
    CHECK(within_band(est, performance_oracle(model, noise, perf).value));
}
