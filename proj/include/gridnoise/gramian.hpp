// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Observability-Gramian route to the performance measure, P = B^T X B, used
// as an independent oracle for the closed-form evaluation. Works for any
// damping/inertia ratios.

#include "gridnoise/measure.hpp"
#include "gridnoise/sysmodel.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace gridnoise {

struct GramianSolution {
    Eigen::MatrixXd x;
    double eps = 0.0;
    double residual = 0.0;  ///< ||A^T X + X A + Q||_max
};

/// Solves A^T X + X A = -Q through a complex Schur factorization of A
/// (Bartels-Stewart with a triangular back-substitution per column).
/// Throws SingularSystem when A has an eigenvalue with non-negative real part.
[[nodiscard]] GramianSolution solve_lyapunov(const AugmentedSystem& aug, const Eigen::MatrixXd& qm);

/// Same Gramian from the eigenvector expansion
/// X_ij = sum_{l,q} -1/(mu_l + mu_q) (T_L)_li (T_L)_qj (T_R^T Q T_R)_lq.
/// Throws EigenvalueCollision when min |mu_l + mu_q| < 1e-10 and
/// NotDiagonalizable when the eigenvector matrix is numerically singular.
[[nodiscard]] GramianSolution gramian_spectral(const AugmentedSystem& aug,
                                               const Eigen::MatrixXd& qm);

/// Right/left eigenvector matrices of A built analytically from the
/// mass-scaled Laplacian modes. Eigenvalue order: mu_1^+..mu_N^+,
/// mu_1^-..mu_N^-, -1/tau.
struct DiagonalizingPair {
    Eigen::MatrixXcd t_r;
    Eigen::MatrixXcd t_l;
    Eigen::VectorXcd mu;
};

/// Needs uniform gamma; throws CriticalDamping if some |Gamma_j| <= 1e-9 and
/// FilterResonance if some |1 - gamma tau + tau^2 lambda_j| <= 1e-9.
[[nodiscard]] DiagonalizingPair build_trl(const SwingModel& model, const NoiseSpec& noise, double eps);

enum class GramianMethod { lyapunov, eigen };

struct OracleOptions {
    /// Descending positive multipliers. With relative_schedule the actual
    /// regularizations are multiplier * oracle_eps_scale(...).
    std::vector<double> eps_schedule{1e-3, 1e-4, 1e-5};
    bool relative_schedule = true;
    GramianMethod method = GramianMethod::lyapunov;
};

/// Regularization scale below which P(eps) is linear in eps:
/// min(1, m_min * min(lambda_2(L_M), gamma_min^2 / 4, (1 + gamma_min tau) / tau^2)).
[[nodiscard]] double oracle_eps_scale(const SwingModel& model, double tau);

/// Evaluates P(eps) = B^T X(eps) B over the schedule, fits P0 + c eps by least
/// squares and returns P0. Throws FinitenessViolated when P grows by more
/// than 10x from the largest to the smallest eps.
[[nodiscard]] MeasureResult performance_oracle(const SwingModel& model, const NoiseSpec& noise,
                                               const PerformanceSpec& perf,
                                               const OracleOptions& options = {});

}  // namespace gridnoise
