// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "test_helpers.hpp"

#include "gridnoise/gramian.hpp"
#include "gridnoise/spectral.hpp"

#include <doctest.h>

using namespace gridnoise;
using namespace gridnoise::testing;

TEST_CASE("mode_eigenvalues") {
    const ModePair zero = mode_eigenvalues(1.5, 0.0);
    CHECK(std::abs(zero.mu_plus) < 1e-15);
    CHECK(std::abs(zero.mu_minus - std::complex<double>(-1.5, 0.0)) < 1e-15);

    const ModePair osc = mode_eigenvalues(1.0, 2.0);
    const std::complex<double> root(-0.5, std::sqrt(7.0) / 2.0);
    CHECK(std::abs(osc.mu_plus - root) < 1e-14);
    CHECK(std::abs(osc.mu_minus - std::conj(root)) < 1e-14);
    CHECK_FALSE(osc.degenerate);
    CHECK(std::abs(osc.mu_plus * osc.mu_plus + osc.mu_plus + 2.0) < 1e-14);

    const ModePair crit = mode_eigenvalues(2.0, 1.0);
    CHECK(crit.degenerate);
    CHECK(std::abs(crit.gamma_big) < 1e-12);
    CHECK(std::abs(crit.mu_plus + 1.0) < 1e-12);
    CHECK(std::abs(crit.mu_minus + 1.0) < 1e-12);
}

TEST_CASE("kernel hand values and errors") {
    CHECK(f_kernel(1, 1, 1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(g_kernel(1, 1, 1, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(error_kind([] { return f_kernel(1, 1, 0, 0); }) == ErrorKind::DegenerateDenominator);
    CHECK(error_kind([] { return g_kernel(1, 1, 0, 0); }) == ErrorKind::DegenerateDenominator);
    CHECK(error_kind([] { return f_kernel(0, 1, 1, 1); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { return g_kernel(1, -1, 1, 1); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { return f_kernel(1, 1, -1, 1); }) == ErrorKind::InvalidArgument);
    // Removable singularity of g at the double zero mode.
    CHECK(g_kernel_zero_mode(1.0, 1.0) == doctest::Approx(0.25));
    CHECK(g_kernel(2.0, 0.7, 1e-6, 0.0) == doctest::Approx(g_kernel_zero_mode(2.0, 0.7)).epsilon(1e-4));
}

TEST_CASE("kernels are symmetric and match the diagonal closed forms") {
    systems::Rng rng(21);
    for (int k = 0; k < 100; ++k) {
        const double tau = systems::log_uniform(rng, 1e-2, 1e2);
        const double gamma = systems::log_uniform(rng, 1e-1, 1e1);
        const double a = systems::log_uniform(rng, 1e-2, 1e2);
        const double b = systems::log_uniform(rng, 1e-2, 1e2);
        CHECK(rel_err(f_kernel(tau, gamma, a, b), f_kernel(tau, gamma, b, a)) < 1e-13);
        CHECK(rel_err(g_kernel(tau, gamma, a, b), g_kernel(tau, gamma, b, a)) < 1e-13);
        const double f_diag =
            tau * (1.0 + gamma * tau) / (2.0 * a * gamma * (1.0 / tau + gamma + a * tau));
        const double g_diag = tau * tau / (2.0 * gamma * (1.0 + gamma * tau + a * tau * tau));
        CHECK(rel_err(f_kernel(tau, gamma, a, a), f_diag) < 1e-12);
        CHECK(rel_err(g_kernel(tau, gamma, a, a), g_diag) < 1e-12);
    }
}

TEST_CASE("phase coherence hand values") {
    CHECK(phase_coherence(two_node(), 0, 1.0, 1.0).value == doctest::Approx(0.125).epsilon(1e-14));
    for (Index a = 0; a < 3; ++a) {
        CHECK(phase_coherence(triangle(), a, 1.0, 1.0).value ==
              doctest::Approx(4.0 / 45.0).epsilon(1e-13));
    }
    CHECK(phase_coherence(two_node(), 1, 0.0, 1.0).value == 0.0);
    CHECK(phase_coherence(two_node(), 1, 3.0, 1.0).value == doctest::Approx(9 * 0.125));

    Eigen::VectorXd m(2), d(2);
    m << 1, 2;
    d << 1, 2;
    const SwingModel nonuniform(Network(2, {{0, 1, 1.0}}), m, d);
    CHECK(error_kind([&] { return phase_coherence(nonuniform, 0, 1.0, 1.0); }) ==
          ErrorKind::NonUniformParameters);
    CHECK(error_kind([&] { return phase_coherence(two_node(), 2, 1.0, 1.0); }) ==
          ErrorKind::IndexOutOfRange);
}

TEST_CASE("performance_generic reproduces phase_coherence") {
    systems::Rng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 3 + trial % 5;
        const double m = systems::log_uniform(rng, 0.5, 2.0);
        const double d = systems::log_uniform(rng, 0.2, 5.0);
        const double tau = systems::log_uniform(rng, 1e-2, 1e2);
        const SwingModel model = SwingModel::uniform(systems::random_connected(rng, n), m, d);
        const Index alpha = trial % n;
        const double generic = performance_generic(model, NoiseSpec::single_node(n, alpha, 1.3, tau),
                                                   PerformanceSpec::phase_coherence(n))
                                   .value;
        CHECK(rel_err(generic, phase_coherence(model, alpha, 1.3, tau).value) < 1e-12);
    }
}

TEST_CASE("performance_generic properties") {
    const SwingModel k4 = SwingModel::uniform(systems::complete_graph(4));
    NoiseSpec uniform_noise;
    uniform_noise.amplitude = Eigen::VectorXd::Ones(4);
    uniform_noise.tau = 0.7;
    CHECK(std::abs(performance_generic(k4, uniform_noise, PerformanceSpec::phase_coherence(4)).value) <
          1e-14);

    const NoiseSpec single = NoiseSpec::single_node(2, 0, 1.0, 1.0);
    CHECK(performance_generic(two_node(), single, PerformanceSpec::phase_coherence(2)).value ==
          doctest::Approx(0.125));

    PerformanceSpec observable;
    observable.q11 = Eigen::MatrixXd::Identity(2, 2);
    observable.q22 = Eigen::MatrixXd::Zero(2, 2);
    CHECK(error_kind([&] { return performance_generic(two_node(), single, observable); }) ==
          ErrorKind::FinitenessViolated);

    Eigen::VectorXd m(2), d(2);
    m << 1, 1;
    d << 1, 2;
    const SwingModel mixed(Network(2, {{0, 1, 1.0}}), m, d);
    CHECK(error_kind([&] {
              return performance_generic(mixed, single, PerformanceSpec::phase_coherence(2));
          }) == ErrorKind::NonUniformRatio);
}

TEST_CASE("performance_generic is linear in Q and quadratic in p") {
    systems::Rng rng(8);
    const Index n = 5;
    Eigen::VectorXd m(n);
    for (Index i = 0; i < n; ++i) m(i) = systems::log_uniform(rng, 0.5, 2.0);
    const SwingModel model(systems::random_connected(rng, n), m, 0.8 * m);
    NoiseSpec noise;
    noise.amplitude = systems::random_normal(rng, n);
    noise.tau = 0.4;
    PerformanceSpec a{systems::random_psd(rng, n, true), systems::random_psd(rng, n, false)};
    PerformanceSpec b{systems::random_psd(rng, n, true), systems::random_psd(rng, n, false)};
    PerformanceSpec sum{a.q11 + 2.0 * b.q11, a.q22 + 2.0 * b.q22};
    const double pa = performance_generic(model, noise, a).value;
    const double pb = performance_generic(model, noise, b).value;
    CHECK(pa > 0.0);
    CHECK(rel_err(performance_generic(model, noise, sum).value, pa + 2.0 * pb) < 1e-12);

    NoiseSpec scaled = noise;
    scaled.amplitude *= -3.0;
    CHECK(rel_err(performance_generic(model, scaled, a).value, 9.0 * pa) < 1e-12);
}

TEST_CASE("independent noise adds the single-node channels") {
    systems::Rng rng(10);
    const SwingModel model = SwingModel::uniform(systems::random_connected(rng, 5), 1.0, 0.5);
    NoiseSpec noise;
    noise.amplitude = systems::random_normal(rng, 5);
    noise.tau = 2.0;
    noise.mode = NoiseMode::independent;
    const PerformanceSpec perf = PerformanceSpec::phase_coherence(5);
    double expect = 0.0;
    for (Index a = 0; a < 5; ++a) {
        expect += phase_coherence(model, a, noise.amplitude(a), noise.tau).value;
    }
    CHECK(rel_err(performance_generic(model, noise, perf).value, expect) < 1e-12);
    CHECK(rel_err(performance_oracle(model, noise, perf).value, expect) < 1e-5);
}

TEST_CASE("phase coherence is invariant under node relabelling") {
    systems::Rng rng(12);
    const Network net = systems::random_connected(rng, 6);
    const Index perm[] = {4, 2, 0, 5, 1, 3};
    std::vector<Edge> relabelled;
    for (const Edge& e : net.edges()) relabelled.push_back({perm[e.i], perm[e.j], e.susceptance});
    const SwingModel a = SwingModel::uniform(net, 1.0, 0.3);
    const SwingModel b = SwingModel::uniform(Network(6, relabelled), 1.0, 0.3);
    for (Index alpha = 0; alpha < 6; ++alpha) {
        CHECK(rel_err(phase_coherence(a, alpha, 1.0, 0.9).value,
                      phase_coherence(b, perm[alpha], 1.0, 0.9).value) < 1e-12);
    }
}

TEST_CASE("asymptotes") {
    CHECK(small_tau_asymptote(two_node(), 0, 1.0, 1e-3) == doctest::Approx(2.5e-4).epsilon(1e-12));
    CHECK(rel_err(phase_coherence(two_node(), 0, 1.0, 1e-3).value,
                  small_tau_asymptote(two_node(), 0, 1.0, 1e-3)) < 1e-2);
    CHECK(small_tau_asymptote(two_node(), 0, 0.0, 1e-3) == 0.0);

    CHECK(large_tau_asymptote(two_node(), 0, 1.0) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(rel_err(phase_coherence(two_node(), 0, 1.0, 1e3).value,
                  large_tau_asymptote(two_node(), 0, 1.0)) < 1e-2);
    CHECK(large_tau_asymptote(triangle(), 1, 1.0) == doctest::Approx(2.0 / 27.0).epsilon(1e-12));
    CHECK(large_tau_asymptote(two_node(), 0, 0.0) == 0.0);

    systems::Rng rng(13);
    for (const Network& net : {systems::path_graph(4), systems::star_graph(5),
                               systems::random_tree(rng, 7)}) {
        const SwingModel model = SwingModel::uniform(net);
        for (Index a = 0; a < model.size(); ++a) {
            CHECK(rel_err(phase_coherence(model, a, 1.0, 1e-3).value,
                          small_tau_asymptote(model, a, 1.0, 1e-3)) < 1e-2);
            CHECK(rel_err(phase_coherence(model, a, 1.0, 1e3).value,
                          large_tau_asymptote(model, a, 1.0)) < 1e-2);
        }
    }
}
