// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Network ingestion, Laplacian construction and resistance-distance analytics.

#include <Eigen/Dense>

#include <filesystem>
#include <string_view>
#include <vector>

namespace gridnoise {

using Index = Eigen::Index;

struct Edge {
    Index i = 0;
    Index j = 0;
    double susceptance = 0.0;
};

/// Weighted undirected connected graph on nodes 0..n-1.
///
/// Construction validates every invariant: positive weights, no self-loops,
/// at most one edge per unordered pair, and connectivity. Instances are
/// immutable afterwards.
class Network {
public:
    Network(Index node_count, std::vector<Edge> edges);

    [[nodiscard]] Index size() const noexcept { return n_; }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }

private:
    Index n_;
    std::vector<Edge> edges_;
};

/// Parses an edge-list document: one "i j b" per line, whitespace or comma
/// separated, '#' comment lines ignored. Node count is max id + 1.
[[nodiscard]] Network load_network(std::string_view text);
[[nodiscard]] Network load_network_file(const std::filesystem::path& path);

/// L_ij = -b_ij, L_ii = -sum_{j != i} L_ij. Each row sums to exactly zero
/// when accumulated in column order.
[[nodiscard]] Eigen::MatrixXd laplacian(const Network& net);

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
///
/// Column k of `vectors` is the eigenvector for `values[k]`, with its sign
/// fixed so that its largest-magnitude entry is positive. Inside degenerate
/// eigenspaces the basis is whatever the solver returns.
struct LaplacianSpectrum {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;

    [[nodiscard]] Index size() const noexcept { return values.size(); }

    /// |lambda_1| < 1e-9 * max|lambda|.
    [[nodiscard]] bool has_zero_mode() const;
};

[[nodiscard]] LaplacianSpectrum spectrum(const Eigen::MatrixXd& symmetric);

/// Effective resistance sum_{l>=2} (u_i^(l) - u_j^(l))^2 / lambda_l.
[[nodiscard]] double resistance_distance(const LaplacianSpectrum& spec, Index i, Index j);

/// Mean resistance distance from `alpha`, spectral form
/// sum_{l>=2} u_alpha^(l)^2/lambda_l + (1/N) sum_{l>=2} 1/lambda_l.
[[nodiscard]] double inverse_closeness(const LaplacianSpectrum& spec, Index alpha);

/// Same quantity by averaging resistance_distance over all nodes.
[[nodiscard]] double inverse_closeness_direct(const LaplacianSpectrum& spec, Index alpha);

[[nodiscard]] double closeness_centrality(const LaplacianSpectrum& spec, Index alpha);

/// Kf_1 = N * sum_{l>=2} 1/lambda_l.
[[nodiscard]] double kirchhoff_index(const LaplacianSpectrum& spec);

/// C_alpha^{-1} - Kf_1/N^2: the node-dependent part of the inverse closeness,
/// which sets the small-correlation-time phase response.
[[nodiscard]] double closeness_bracket(const LaplacianSpectrum& spec, Index alpha);

}  // namespace gridnoise
