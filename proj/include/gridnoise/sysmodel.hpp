// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Swing-system description and the augmented (2N+1)-dimensional state space
// that absorbs the exponentially correlated forcing into a filter state.

#include "gridnoise/netgraph.hpp"

#include <filesystem>
#include <string_view>
#include <vector>

namespace gridnoise {

/// Network plus per-node inertia m_i > 0 and damping d_i > 0 (per-unit, seconds).
class SwingModel {
public:
    SwingModel(Network net, Eigen::VectorXd inertia, Eigen::VectorXd damping);

    /// m_i = m and d_i = d for every node.
    static SwingModel uniform(Network net, double inertia = 1.0, double damping = 1.0);

    [[nodiscard]] const Network& network() const noexcept { return net_; }
    [[nodiscard]] const Eigen::VectorXd& inertia() const noexcept { return m_; }
    [[nodiscard]] const Eigen::VectorXd& damping() const noexcept { return d_; }
    [[nodiscard]] Index size() const noexcept { return net_.size(); }

    /// True when every m_i and every d_i equals the first one.
    [[nodiscard]] bool has_uniform_parameters() const;

private:
    Network net_;
    Eigen::VectorXd m_;
    Eigen::VectorXd d_;
};

struct NodeParameters {
    Eigen::VectorXd inertia;
    Eigen::VectorXd damping;
};

/// Parses "i m_i d_i" lines ('#' comments allowed). Every node 0..n-1 must
/// appear exactly once.
[[nodiscard]] NodeParameters load_node_parameters(std::string_view text, Index node_count);
[[nodiscard]] NodeParameters load_node_parameters_file(const std::filesystem::path& path,
                                                       Index node_count);

enum class NoiseMode {
    /// One shared filter state drives all nodes: p(t) = p * eta(t).
    coherent,
    /// Each node with p_i != 0 gets its own independent filter state.
    independent,
};

struct NoiseSpec {
    Eigen::VectorXd amplitude;
    double tau = 1.0;
    NoiseMode mode = NoiseMode::coherent;

    /// Noise localized at one node: p = amplitude * e_alpha.
    static NoiseSpec single_node(Index node_count, Index alpha, double amplitude, double tau);

    void validate(Index node_count) const;
};

/// Block-diagonal quadratic weight: q11 on phases, q22 on frequencies.
struct PerformanceSpec {
    Eigen::MatrixXd q11;
    Eigen::MatrixXd q22;

    /// q11 = I - u1 u1^T, q22 = 0.
    static PerformanceSpec phase_coherence(Index node_count);
    /// q11 = 0, q22 = I - u1 u1^T.
    static PerformanceSpec frequency_coherence(Index node_count);

    /// Throws InvalidArgument unless both blocks are N x N, symmetric and PSD.
    void validate(Index node_count) const;

    /// ||q11 u1||_max <= 1e-10 * max(1, ||q11||_max); required for a finite measure.
    [[nodiscard]] bool finiteness_holds() const;
};

/// Throws FinitenessViolated if the marginal mode is observable through q11.
void require_finiteness(const PerformanceSpec& perf);

/// x' = a x with x = [M^{1/2} phi, M^{1/2} omega, eta] and impulse b on eta.
struct AugmentedSystem {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    double eps = 0.0;
    double eta0 = 0.0;
    Index node_count = 0;
};

/// M^{-1/2} (L + eps I) M^{-1/2}.
[[nodiscard]] Eigen::MatrixXd scaled_laplacian(const SwingModel& model, double eps);

/// Uniform damping-to-inertia ratio gamma = d_i/m_i. Throws NonUniformRatioError
/// when max_i |d_i/m_i - gamma| / gamma >= 1e-12.
[[nodiscard]] double uniform_ratio(const SwingModel& model);

/// Relative spread max_i |d_i/m_i - d_0/m_0| / (d_0/m_0).
[[nodiscard]] double ratio_spread(const SwingModel& model);

/// Builds the augmented system for one coherent filter channel. When eps > 0
/// the result is checked to be Hurwitz (NotHurwitz otherwise).
[[nodiscard]] AugmentedSystem build_augmented(const SwingModel& model, const NoiseSpec& noise,
                                              double eps);

/// blockdiag(M^{-1/2} q11 M^{-1/2}, M^{-1/2} q22 M^{-1/2}, 0).
[[nodiscard]] Eigen::MatrixXd q_weighted(const SwingModel& model, const PerformanceSpec& perf);

/// Splits a noise spec into the coherent channels whose contributions add up
/// to the requested measure: itself when coherent, one single-node channel per
/// nonzero amplitude when independent.
[[nodiscard]] std::vector<NoiseSpec> coherent_channels(const NoiseSpec& noise);

}  // namespace gridnoise
