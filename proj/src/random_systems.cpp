// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridnoise/random_systems.hpp"

#include <cmath>
#include <vector>

namespace gridnoise::systems {

Network path_graph(Index n, double weight) {
    std::vector<Edge> edges;
    for (Index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight});
    return Network(n, std::move(edges));
}

Network star_graph(Index n, double weight) {
    std::vector<Edge> edges;
    for (Index i = 1; i < n; ++i) edges.push_back({0, i, weight});
    return Network(n, std::move(edges));
}

Network cycle_graph(Index n, double weight) {
    std::vector<Edge> edges;
    for (Index i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, weight});
    return Network(n, std::move(edges));
}

Network complete_graph(Index n, double weight) {
    std::vector<Edge> edges;
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) edges.push_back({i, j, weight});
    }
    return Network(n, std::move(edges));
}

Network random_tree(Rng& rng, Index n, double w_lo, double w_hi) {
    std::uniform_real_distribution<double> weight(w_lo, w_hi);
    std::vector<Edge> edges;
    for (Index i = 1; i < n; ++i) {
        std::uniform_int_distribution<Index> parent(0, i - 1);
        edges.push_back({parent(rng), i, weight(rng)});
    }
    return Network(n, std::move(edges));
}

Network random_connected(Rng& rng, Index n, double extra, double w_lo, double w_hi) {
    std::uniform_real_distribution<double> weight(w_lo, w_hi);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 1; i < n; ++i) {
        std::uniform_int_distribution<Index> parent(0, i - 1);
        const Index p = parent(rng);
        w(i, p) = w(p, i) = weight(rng);
    }
    std::vector<Edge> edges;
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            if (w(i, j) == 0.0 && coin(rng) < extra) {
                w(i, j) = weight(rng);
            }
            if (w(i, j) > 0.0) edges.push_back({i, j, w(i, j)});
        }
    }
    return Network(n, std::move(edges));
}

Eigen::MatrixXd random_psd(Rng& rng, Index n, bool project_out_uniform) {
    const Eigen::MatrixXd r = [&] {
        Eigen::MatrixXd m(n, n);
        std::normal_distribution<double> normal;
        for (Index j = 0; j < n; ++j) {
            for (Index i = 0; i < n; ++i) m(i, j) = normal(rng);
        }
        return m;
    }();
    Eigen::MatrixXd q = r * r.transpose() / static_cast<double>(n);
    if (project_out_uniform) {
        const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) -
                                     Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
        q = proj * q * proj;
    }
    return 0.5 * (q + q.transpose());
}

Eigen::VectorXd random_normal(Rng& rng, Index n) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
}

double log_uniform(Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

}  // namespace gridnoise::systems
