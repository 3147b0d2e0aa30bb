// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "test_helpers.hpp"

#include <doctest.h>

#include <Eigen/QR>

#include <numbers>

using namespace gridnoise;
using namespace gridnoise::testing;

TEST_CASE("load_network parses minimal and triangle documents") {
    const Network two = load_network("0 1 1.0\n");
    CHECK(two.size() == 2);
    REQUIRE(two.edges().size() == 1);
    CHECK(two.edges()[0].susceptance == 1.0);

    const Network k3 = load_network("# triangle\n0 1 1\n1 2 1\n\n0,2,1\n");
    CHECK(k3.size() == 3);
    CHECK(k3.edges().size() == 3);
}

TEST_CASE("load_network rejects malformed input") {
    CHECK(error_kind([] { return load_network("0 1 1\n2 3 1\n"); }) == ErrorKind::Disconnected);
    CHECK(error_kind([] { return load_network("0 1 0\n"); }) == ErrorKind::NonPositiveWeight);
    CHECK(error_kind([] { return load_network("0 1 -2\n"); }) == ErrorKind::NonPositiveWeight);
    CHECK(error_kind([] { return load_network("0 0 1\n0 1 1\n"); }) == ErrorKind::SelfLoop);
    CHECK(error_kind([] { return load_network("0 1 1\n1 0 2\n"); }) == ErrorKind::DuplicateEdge);
    CHECK(error_kind([] { return load_network("0 1\n"); }) == ErrorKind::ParseError);
    CHECK(error_kind([] { return load_network("0 x 1\n"); }) == ErrorKind::ParseError);
    CHECK(error_kind([] { return load_network(""); }) == ErrorKind::ParseError);

    try {
        (void)load_network("0 1 1\n1 2 oops\n");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("laplacian matches hand-built matrices") {
    Eigen::MatrixXd expect2(2, 2);
    expect2 << 1, -1, -1, 1;
    CHECK(laplacian(Network(2, {{0, 1, 1.0}})).isApprox(expect2));

    const Eigen::MatrixXd k3 = laplacian(systems::complete_graph(3));
    for (Index i = 0; i < 3; ++i) {
        for (Index j = 0; j < 3; ++j) CHECK(k3(i, j) == (i == j ? 2.0 : -1.0));
    }

    Eigen::MatrixXd expect_path(3, 3);
    expect_path << 2, -2, 0, -2, 4, -2, 0, -2, 2;
    CHECK(laplacian(systems::path_graph(3, 2.0)).isApprox(expect_path));
}

TEST_CASE("laplacian invariants on random graphs") {
    systems::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Network net = systems::random_connected(rng, 3 + trial % 6);
        const Eigen::MatrixXd l = laplacian(net);
        CHECK((l - l.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() < 1e-14 * l.cwiseAbs().maxCoeff());
        for (Index i = 0; i < l.rows(); ++i) CHECK(l(i, i) > 0.0);
        const LaplacianSpectrum s = spectrum(l);
        CHECK(std::abs(s.values(0)) < 1e-10);
        CHECK(s.values(1) > 1e-8);
        CHECK((s.vectors.transpose() * s.vectors - Eigen::MatrixXd::Identity(l.rows(), l.rows()))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
        CHECK((s.vectors * s.values.asDiagonal() * s.vectors.transpose() - l).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("spectrum of small graphs") {
    const LaplacianSpectrum two = spectrum(laplacian(Network(2, {{0, 1, 1.0}})));
    CHECK(two.values(0) == doctest::Approx(0.0));
    CHECK(two.values(1) == doctest::Approx(2.0));
    CHECK(std::abs(std::abs(two.vectors(0, 1)) - 1.0 / std::sqrt(2.0)) < 1e-14);
    CHECK(two.vectors(0, 1) == doctest::Approx(-two.vectors(1, 1)));
    CHECK(two.has_zero_mode());

    const LaplacianSpectrum k3 = spectrum(laplacian(systems::complete_graph(3)));
    CHECK(k3.values(1) == doctest::Approx(3.0));
    CHECK(k3.values(2) == doctest::Approx(3.0));

    const LaplacianSpectrum c4 = spectrum(laplacian(systems::cycle_graph(4)));
    const double expect[] = {0.0, 2.0, 2.0, 4.0};
    for (Index l = 0; l < 4; ++l) CHECK(c4.values(l) == doctest::Approx(expect[l]).epsilon(1e-12));

    Eigen::MatrixXd asym(2, 2);
    asym << 1, 2, 0, 1;
    CHECK(error_kind([&] { return spectrum(asym); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("spectrum is invariant under relabelling") {
    systems::Rng rng(11);
    const Network net = systems::random_connected(rng, 6);
    const Eigen::MatrixXd l = laplacian(net);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(6);
    perm.indices() << 3, 0, 5, 1, 4, 2;
    const Eigen::MatrixXd lp = perm * l * perm.transpose();
    CHECK((spectrum(l).values - spectrum(lp).values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("resistance distance hand values") {
    const LaplacianSpectrum two = spectrum(laplacian(Network(2, {{0, 1, 4.0}})));
    CHECK(resistance_distance(two, 0, 1) == doctest::Approx(0.25));
    CHECK(resistance_distance(two, 1, 1) == doctest::Approx(0.0));

    const LaplacianSpectrum k3 = spectrum(laplacian(systems::complete_graph(3)));
    for (Index i = 0; i < 3; ++i) {
        for (Index j = 0; j < 3; ++j) {
            if (i != j) CHECK(resistance_distance(k3, i, j) == doctest::Approx(2.0 / 3.0));
        }
    }
    CHECK(error_kind([&] { return resistance_distance(k3, 0, 3); }) == ErrorKind::IndexOutOfRange);
    CHECK(error_kind([&] { return resistance_distance(k3, -1, 0); }) == ErrorKind::IndexOutOfRange);
}

TEST_CASE("resistance distance equals the pseudoinverse form and is a metric") {
    systems::Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 3 + trial % 5;
        const Eigen::MatrixXd l = laplacian(systems::random_connected(rng, n));
        const LaplacianSpectrum s = spectrum(l);
        const Eigen::MatrixXd lp = l.completeOrthogonalDecomposition().pseudoInverse();
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                const double omega = resistance_distance(s, i, j);
                CHECK(std::abs(omega - (lp(i, i) + lp(j, j) - 2.0 * lp(i, j))) < 1e-10);
                CHECK(std::abs(omega - resistance_distance(s, j, i)) < 1e-14);
                if (i != j) CHECK(omega > 0.0);
                for (Index k = 0; k < n; ++k) {
                    CHECK(omega <= resistance_distance(s, i, k) + resistance_distance(s, k, j) + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("closeness centrality and Kirchhoff index") {
    const LaplacianSpectrum k3 = spectrum(laplacian(systems::complete_graph(3)));
    CHECK(inverse_closeness(k3, 0) == doctest::Approx(4.0 / 9.0));
    CHECK(closeness_centrality(k3, 2) == doctest::Approx(9.0 / 4.0));
    CHECK(kirchhoff_index(k3) == doctest::Approx(2.0));

    const LaplacianSpectrum two = spectrum(laplacian(Network(2, {{0, 1, 1.0}})));
    CHECK(inverse_closeness(two, 1) == doctest::Approx(0.5));
    CHECK(kirchhoff_index(two) == doctest::Approx(1.0));
    CHECK(closeness_bracket(two, 0) == doctest::Approx(0.25));

    const LaplacianSpectrum s4 = spectrum(laplacian(systems::star_graph(4)));
    for (Index leaf = 1; leaf < 4; ++leaf) {
        CHECK(closeness_centrality(s4, 0) > closeness_centrality(s4, leaf));
    }
    CHECK(error_kind([&] { return closeness_centrality(s4, 4); }) == ErrorKind::IndexOutOfRange);

    systems::Rng rng(5);
    const LaplacianSpectrum s6 = spectrum(laplacian(systems::random_connected(rng, 6)));
    double half_sum = 0.0;
    for (Index i = 0; i < 6; ++i) {
        CHECK(std::abs(inverse_closeness(s6, i) - inverse_closeness_direct(s6, i)) < 1e-12);
        for (Index j = 0; j < 6; ++j) half_sum += 0.5 * resistance_distance(s6, i, j);
    }
    CHECK(kirchhoff_index(s6) == doctest::Approx(half_sum).epsilon(1e-12));
}

TEST_CASE("resistance quantities scale inversely with susceptance") {
    systems::Rng rng(9);
    const Network net = systems::random_connected(rng, 5);
    std::vector<Edge> doubled = net.edges();
    for (Edge& e : doubled) e.susceptance *= 2.0;
    const LaplacianSpectrum a = spectrum(laplacian(net));
    const LaplacianSpectrum b = spectrum(laplacian(Network(5, doubled)));
    CHECK(kirchhoff_index(b) == doctest::Approx(kirchhoff_index(a) / 2.0));
    CHECK(resistance_distance(b, 0, 4) == doctest::Approx(resistance_distance(a, 0, 4) / 2.0));
}
