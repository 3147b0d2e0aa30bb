// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridnoise/gramian.hpp"

#include "gridnoise/error.hpp"
#include "gridnoise/parallel.hpp"
#include "gridnoise/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace gridnoise {

namespace {

using Complex = std::complex<double>;

constexpr double kCollisionTol = 1e-10;
constexpr double kConditionLimit = 1e7;
constexpr double kTrlTol = 1e-9;
constexpr double kDivergenceFactor = 10.0;
constexpr double kDivergenceFloor = 1e-12;

void check_q(const AugmentedSystem& aug, const Eigen::MatrixXd& qm) {
    if (qm.rows() != aug.a.rows() || qm.cols() != aug.a.cols()) {
        throw Error(ErrorKind::InvalidArgument, "weight matrix does not match system dimension");
    }
}

double lyapunov_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& x,
                         const Eigen::MatrixXd& q) {
    return (a.transpose() * x + x * a + q).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& x) {
    return 0.5 * (x + x.transpose());
}

Eigen::MatrixXcd block_modes(const Eigen::MatrixXd& t) {
    const Index n = t.rows();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * n + 1, 2 * n + 1);
    out.block(0, 0, n, n) = t.cast<Complex>();
    out.block(n, n, n, n) = t.cast<Complex>();
    out(2 * n, 2 * n) = 1.0;
    return out;
}

}  // namespace

GramianSolution solve_lyapunov(const AugmentedSystem& aug, const Eigen::MatrixXd& qm) {
    check_q(aug, qm);
    const Index dim = aug.a.rows();
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(aug.a.cast<Complex>());
    if (schur.info() != Eigen::Success) {
        throw Error(ErrorKind::EigensolverFailure, "Schur factorization did not converge");
    }
    const Eigen::MatrixXcd& t = schur.matrixT();
    const Eigen::MatrixXcd& u = schur.matrixU();

    const double tol = 1e-12 * std::max(1.0, aug.a.cwiseAbs().maxCoeff());
    const double max_re = t.diagonal().real().maxCoeff();
    if (!(max_re < -tol)) {
        std::ostringstream msg;
        msg << "system matrix is not Hurwitz (max Re(mu) = " << max_re
            << "); regularize with eps > 0";
        throw Error(ErrorKind::SingularSystem, msg.str());
    }

    // A = U T U^H turns A^T X + X A = -Q into T^H Y + Y T = -U^H Q U.
    const Eigen::MatrixXcd c = u.adjoint() * qm.cast<Complex>() * u;
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::VectorXcd rhs(dim);
    for (Index j = 0; j < dim; ++j) {
        rhs = -c.col(j);
        for (Index k = 0; k < j; ++k) {
            rhs -= t(k, j) * y.col(k);
        }
        const Complex shift = t(j, j);
        for (Index i = 0; i < dim; ++i) {
            Complex acc = rhs(i);
            for (Index k = 0; k < i; ++k) {
                acc -= std::conj(t(k, i)) * y(k, j);
            }
            y(i, j) = acc / (std::conj(t(i, i)) + shift);
        }
    }

    GramianSolution out;
    out.x = symmetrized((u * y * u.adjoint()).real());
    out.eps = aug.eps;
    out.residual = lyapunov_residual(aug.a, out.x, qm);
    return out;
}

GramianSolution gramian_spectral(const AugmentedSystem& aug, const Eigen::MatrixXd& qm) {
    check_q(aug, qm);
    const Index dim = aug.a.rows();
    Eigen::EigenSolver<Eigen::MatrixXd> es(aug.a, true);
    if (es.info() != Eigen::Success) {
        throw Error(ErrorKind::EigensolverFailure, "eigensolver did not converge");
    }
    const Eigen::VectorXcd mu = es.eigenvalues();
    double closest = std::numeric_limits<double>::infinity();
    for (Index l = 0; l < dim; ++l) {
        for (Index q = l; q < dim; ++q) {
            closest = std::min(closest, std::abs(mu(l) + mu(q)));
        }
    }
    if (closest < kCollisionTol) {
        throw Error(ErrorKind::EigenvalueCollision,
                    "eigenvalue pair with mu_l + mu_q ~ 0; use the Schur solver");
    }

    const Eigen::MatrixXcd t_r = es.eigenvectors();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t_r);
    const auto& sv = svd.singularValues();
    if (!(sv(dim - 1) > 0.0) || sv(0) / sv(dim - 1) > kConditionLimit) {
        throw Error(ErrorKind::NotDiagonalizable,
                    "eigenvector matrix is numerically singular (defective system matrix)");
    }
    const Eigen::MatrixXcd t_l = t_r.inverse();

    Eigen::MatrixXcd w = t_r.transpose() * qm.cast<Complex>() * t_r;
    for (Index l = 0; l < dim; ++l) {
        for (Index q = 0; q < dim; ++q) {
            w(l, q) *= -1.0 / (mu(l) + mu(q));
        }
    }

    GramianSolution out;
    out.x = symmetrized((t_l.transpose() * w * t_l).real());
    out.eps = aug.eps;
    out.residual = lyapunov_residual(aug.a, out.x, qm);
    return out;
}

DiagonalizingPair build_trl(const SwingModel& model, const NoiseSpec& noise, double eps) {
    const double gamma = uniform_ratio(model);
    const Index n = model.size();
    noise.validate(n);
    if (noise.mode != NoiseMode::coherent) {
        throw Error(ErrorKind::InvalidArgument, "build_trl needs a coherent noise channel");
    }
    const LaplacianSpectrum modes = spectrum(scaled_laplacian(model, eps));
    const Eigen::VectorXd s = model.inertia().array().rsqrt().matrix();
    const Eigen::VectorXd c = modes.vectors.transpose() * s.cwiseProduct(noise.amplitude);
    const double tau = noise.tau;

    Eigen::MatrixXcd s_r = Eigen::MatrixXcd::Zero(2 * n + 1, 2 * n + 1);
    Eigen::MatrixXcd s_l = Eigen::MatrixXcd::Zero(2 * n + 1, 2 * n + 1);
    DiagonalizingPair out;
    out.mu.resize(2 * n + 1);
    const Complex i_unit(0.0, 1.0);

    for (Index j = 0; j < n; ++j) {
        const double lam = modes.values(j);
        const ModePair pair = mode_eigenvalues(gamma, lam);
        if (pair.degenerate) {
            throw Error(ErrorKind::CriticalDamping,
                        "mode " + std::to_string(j) + " is critically damped");
        }
        const double resonance = 1.0 - gamma * tau + tau * tau * lam;
        if (std::abs(resonance) <= kTrlTol) {
            throw Error(ErrorKind::FilterResonance,
                        "filter pole -1/tau coincides with mode " + std::to_string(j));
        }
        const Complex root = std::sqrt(pair.gamma_big);
        const Complex mp = pair.mu_plus;
        const Complex mm = pair.mu_minus;

        s_r(j, j) = 1.0 / root;
        s_r(j, n + j) = i_unit / root;
        s_r(n + j, j) = mp / root;
        s_r(n + j, n + j) = i_unit * mm / root;
        s_r(j, 2 * n) = tau * tau * c(j) / resonance;
        s_r(n + j, 2 * n) = -tau * c(j) / resonance;

        s_l(j, j) = -mm / root;
        s_l(j, n + j) = 1.0 / root;
        s_l(n + j, j) = -i_unit * mp / root;
        s_l(n + j, n + j) = i_unit / root;
        s_l(j, 2 * n) = tau * (1.0 + tau * mm) * c(j) / (root * resonance);
        s_l(n + j, 2 * n) = i_unit * tau * (1.0 + tau * mp) * c(j) / (root * resonance);

        out.mu(j) = mp;
        out.mu(n + j) = mm;
    }
    s_r(2 * n, 2 * n) = 1.0;
    s_l(2 * n, 2 * n) = 1.0;
    out.mu(2 * n) = -1.0 / tau;

    const Eigen::MatrixXcd blocks = block_modes(modes.vectors);
    out.t_r = blocks * s_r;
    out.t_l = s_l * blocks.transpose();
    return out;
}

double oracle_eps_scale(const SwingModel& model, double tau) {
    const Eigen::ArrayXd ratio = model.damping().array() / model.inertia().array();
    const double gamma_min = ratio.minCoeff();
    const double m_min = model.inertia().minCoeff();
    double scale = std::min(gamma_min * gamma_min / 4.0, (1.0 + gamma_min * tau) / (tau * tau));
    if (model.size() > 1) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled_laplacian(model, 0.0),
                                                          Eigen::EigenvaluesOnly);
        scale = std::min(scale, es.eigenvalues()(1));
    }
    return std::min(1.0, m_min * scale);
}

MeasureResult performance_oracle(const SwingModel& model, const NoiseSpec& noise,
                                 const PerformanceSpec& perf, const OracleOptions& options) {
    const Index n = model.size();
    noise.validate(n);
    perf.validate(n);
    const auto& schedule = options.eps_schedule;
    if (schedule.size() < 2) {
        throw Error(ErrorKind::InvalidArgument, "eps schedule needs at least two points");
    }
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (!(schedule[k] > 0.0) || (k > 0 && !(schedule[k] < schedule[k - 1]))) {
            throw Error(ErrorKind::InvalidArgument,
                        "eps schedule must be positive and strictly descending");
        }
    }
    const double scale = options.relative_schedule ? oracle_eps_scale(model, noise.tau) : 1.0;
    const Eigen::MatrixXd qm = q_weighted(model, perf);
    const std::vector<NoiseSpec> channels = coherent_channels(noise);

    std::vector<double> eps(schedule.size());
    std::vector<double> values(schedule.size(), 0.0);
    parallel_for(schedule.size(), [&](std::size_t k) {
        eps[k] = schedule[k] * scale;
        double total = 0.0;
        for (const NoiseSpec& channel : channels) {
            const AugmentedSystem aug = build_augmented(model, channel, eps[k]);
            const GramianSolution sol = options.method == GramianMethod::lyapunov
                                            ? solve_lyapunov(aug, qm)
                                            : gramian_spectral(aug, qm);
            total += aug.b.dot(sol.x * aug.b);
        }
        values[k] = total;
    });

    if (values.back() > kDivergenceFactor * std::max(values.front(), kDivergenceFloor)) {
        std::ostringstream msg;
        msg << "P(eps) grows from " << values.front() << " to " << values.back()
            << " as eps -> 0; the measure observes the marginal mode";
        throw Error(ErrorKind::FinitenessViolated, msg.str());
    }

    const double count = static_cast<double>(eps.size());
    double mean_e = 0.0;
    double mean_p = 0.0;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        mean_e += eps[k] / count;
        mean_p += values[k] / count;
    }
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        sxy += (eps[k] - mean_e) * (values[k] - mean_p);
        sxx += (eps[k] - mean_e) * (eps[k] - mean_e);
    }
    const double slope = sxy / sxx;
    const double intercept = mean_p - slope * mean_e;
    double fit_residual = 0.0;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        fit_residual = std::max(fit_residual, std::abs(values[k] - intercept - slope * eps[k]));
    }

    MeasureResult result;
    result.method = Method::oracle;
    result.value = intercept;
    result.diagnostics.eps = eps.back();
    result.diagnostics.fit_residual = fit_residual;
    result.diagnostics.eps_schedule = eps;
    result.diagnostics.eps_values = values;
    return result;
}

}  // namespace gridnoise
