// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Standard and randomized test systems shared by the validation harness and
// the test suites.

#include "gridnoise/netgraph.hpp"

#include <random>

namespace gridnoise::systems {

using Rng = std::mt19937_64;

[[nodiscard]] Network path_graph(Index n, double weight = 1.0);
[[nodiscard]] Network star_graph(Index n, double weight = 1.0);  // node 0 is the center
[[nodiscard]] Network cycle_graph(Index n, double weight = 1.0);
[[nodiscard]] Network complete_graph(Index n, double weight = 1.0);

/// Random spanning tree with weights uniform in [w_lo, w_hi].
[[nodiscard]] Network random_tree(Rng& rng, Index n, double w_lo = 0.5, double w_hi = 2.0);

/// Random spanning tree plus each remaining pair with probability `extra`.
[[nodiscard]] Network random_connected(Rng& rng, Index n, double extra = 0.3, double w_lo = 0.1,
                                       double w_hi = 2.0);

/// R R^T / n for a Gaussian R, optionally with the uniform vector projected out.
[[nodiscard]] Eigen::MatrixXd random_psd(Rng& rng, Index n, bool project_out_uniform);

[[nodiscard]] Eigen::VectorXd random_normal(Rng& rng, Index n);

/// log-uniform sample in [lo, hi].
[[nodiscard]] double log_uniform(Rng& rng, double lo, double hi);

}  // namespace gridnoise::systems
