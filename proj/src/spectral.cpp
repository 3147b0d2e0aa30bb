// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridnoise/spectral.hpp"

#include "gridnoise/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace gridnoise {

namespace {

constexpr double kDenominatorTol = 1e-14;
constexpr double kCoefficientTol = 1e-13;

void check_kernel_args(double tau, double gamma, double lambda_l, double lambda_q) {
    if (!(tau > 0.0) || !(gamma > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "kernel needs tau > 0 and gamma > 0");
    }
    if (!(lambda_l >= 0.0) || !(lambda_q >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "kernel needs non-negative eigenvalues");
    }
}

double kernel_denominator(double gamma, double lambda_l, double lambda_q) {
    const double diff = lambda_l - lambda_q;
    const double den = 2.0 * gamma * gamma * (lambda_l + lambda_q) + diff * diff;
    if (den < kDenominatorTol) {
        throw Error(ErrorKind::DegenerateDenominator,
                    "kernel denominator vanishes (both eigenvalues are zero)");
    }
    return den;
}

double filter_prefactor(double tau, double gamma, double lambda_l, double lambda_q) {
    const double t2 = tau * tau;
    return 0.5 * t2 / ((1.0 + gamma * tau + lambda_l * t2) * (1.0 + gamma * tau + lambda_q * t2));
}

/// Neumaier summation after ordering by decreasing magnitude.
double compensated_sum(std::vector<double> terms) {
    std::sort(terms.begin(), terms.end(),
              [](double a, double b) { return std::abs(a) > std::abs(b); });
    double sum = 0.0;
    double comp = 0.0;
    for (double t : terms) {
        const double next = sum + t;
        if (std::abs(sum) >= std::abs(t)) {
            comp += (sum - next) + t;
        } else {
            comp += (t - next) + sum;
        }
        sum = next;
    }
    return sum + comp;
}

struct UniformParams {
    double m;
    double d;
};

UniformParams require_uniform(const SwingModel& model) {
    if (!model.has_uniform_parameters()) {
        throw Error(ErrorKind::NonUniformParameters,
                    "this closed form needs uniform inertia and damping");
    }
    return {model.inertia()(0), model.damping()(0)};
}

}  // namespace

ModePair mode_eigenvalues(double gamma, double lambda_m) {
    ModePair out;
    const double disc = gamma * gamma - 4.0 * lambda_m;
    out.gamma_big = std::sqrt(std::complex<double>(disc, 0.0));
    out.mu_plus = 0.5 * (-gamma + out.gamma_big);
    out.mu_minus = 0.5 * (-gamma - out.gamma_big);
    out.degenerate = std::abs(disc) <= 1e-12 * gamma * gamma;
    return out;
}

double f_kernel(double tau, double gamma, double lambda_l, double lambda_q) {
    check_kernel_args(tau, gamma, lambda_l, lambda_q);
    const double den = kernel_denominator(gamma, lambda_l, lambda_q);
    const double num = 8.0 * gamma * gamma * tau + 4.0 * gamma +
                       2.0 * gamma * tau * tau * (2.0 * gamma * gamma + lambda_l + lambda_q);
    return filter_prefactor(tau, gamma, lambda_l, lambda_q) * (num / den + tau * tau * tau);
}

double g_kernel(double tau, double gamma, double lambda_l, double lambda_q) {
    check_kernel_args(tau, gamma, lambda_l, lambda_q);
    const double den = kernel_denominator(gamma, lambda_l, lambda_q);
    const double sum = lambda_l + lambda_q;
    const double diff = lambda_l - lambda_q;
    const double num = 2.0 * gamma * gamma * tau * sum - tau * diff * diff +
                       2.0 * gamma * (sum + 2.0 * tau * tau * lambda_l * lambda_q);
    return filter_prefactor(tau, gamma, lambda_l, lambda_q) * num / den;
}

double g_kernel_zero_mode(double tau, double gamma) {
    check_kernel_args(tau, gamma, 0.0, 0.0);
    return tau * tau / (2.0 * gamma * (1.0 + gamma * tau));
}

MeasureResult performance_generic(const SwingModel& model, const NoiseSpec& noise,
                                  const PerformanceSpec& perf, const SpectralOptions& options) {
    const Index n = model.size();
    noise.validate(n);
    perf.validate(n);
    const double gamma = uniform_ratio(model);
    require_finiteness(perf);

    LaplacianSpectrum modes = spectrum(scaled_laplacian(model, 0.0));
    if (modes.has_zero_mode()) {
        modes.values(0) = 0.0;
    }
    const Eigen::VectorXd s = model.inertia().array().rsqrt().matrix();
    const Eigen::MatrixXd& t = modes.vectors;
    const Eigen::MatrixXd phase_w = t.transpose() * s.asDiagonal() * perf.q11 * s.asDiagonal() * t;
    const Eigen::MatrixXd freq_w = t.transpose() * s.asDiagonal() * perf.q22 * s.asDiagonal() * t;
    const double tau = noise.tau;
    const double eta0_sq = 2.0 / tau;

    std::vector<double> terms;
    long evaluated = 0;
    long dropped = 0;
    for (const NoiseSpec& channel : coherent_channels(noise)) {
        const Eigen::VectorXd c = t.transpose() * s.cwiseProduct(channel.amplitude);
        double largest = 0.0;
        for (Index l = 0; l < n; ++l) {
            for (Index q = 0; q < n; ++q) {
                const double cc = std::abs(c(l) * c(q));
                largest = std::max({largest, cc * std::abs(phase_w(l, q)),
                                    cc * std::abs(freq_w(l, q))});
            }
        }
        const double threshold = kCoefficientTol * std::max(1.0, largest);

        for (Index l = 0; l < n; ++l) {
            for (Index q = 0; q < n; ++q) {
                const double lam_l = modes.values(l);
                const double lam_q = modes.values(q);
                const double cf = c(l) * c(q) * phase_w(l, q);
                const double cg = c(l) * c(q) * freq_w(l, q);
                const bool use_f = std::abs(cf) >= threshold;
                const bool use_g = std::abs(cg) >= threshold;
                if (!use_f && !use_g) {
                    ++dropped;
                    continue;
                }
                ++evaluated;
                double term = 0.0;
                if (use_f) {
                    term += cf * options.f_scale * f_kernel(tau, gamma, lam_l, lam_q);
                }
                if (use_g) {
                    const bool both_zero = lam_l == 0.0 && lam_q == 0.0;
                    term += cg * (both_zero ? g_kernel_zero_mode(tau, gamma)
                                            : g_kernel(tau, gamma, lam_l, lam_q));
                }
                terms.push_back(eta0_sq * term);
            }
        }
    }

    MeasureResult result;
    result.method = Method::spectral;
    result.value = compensated_sum(std::move(terms));
    result.diagnostics.term_count = evaluated;
    result.diagnostics.dropped_terms = dropped;
    result.diagnostics.eps = 0.0;
    return result;
}

MeasureResult phase_coherence(const SwingModel& model, Index alpha, double p, double tau) {
    const auto [m, d] = require_uniform(model);
    if (!(tau > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "correlation time tau must be positive");
    }
    const LaplacianSpectrum spec = spectrum(laplacian(model.network()));
    if (alpha < 0 || alpha >= spec.size()) {
        throw Error(ErrorKind::IndexOutOfRange, "noisy node " + std::to_string(alpha) +
                                                    " out of range");
    }
    std::vector<double> terms;
    for (Index l = 1; l < spec.size(); ++l) {
        const double lam = spec.values(l);
        const double u = spec.vectors(alpha, l);
        terms.push_back(p * p * u * u * (m + d * tau) /
                        (lam * d * (m / tau + d + lam * tau)));
    }
    MeasureResult result;
    result.method = Method::spectral;
    result.diagnostics.term_count = static_cast<long>(terms.size());
    result.diagnostics.dropped_terms = 0;
    result.diagnostics.eps = 0.0;
    result.value = compensated_sum(std::move(terms));
    return result;
}

double small_tau_asymptote(const SwingModel& model, Index alpha, double p, double tau) {
    const auto [m, d] = require_uniform(model);
    (void)m;
    const LaplacianSpectrum spec = spectrum(laplacian(model.network()));
    return tau * p * p / d * closeness_bracket(spec, alpha);
}

double large_tau_asymptote(const SwingModel& model, Index alpha, double p) {
    require_uniform(model);
    const LaplacianSpectrum spec = spectrum(laplacian(model.network()));
    if (alpha < 0 || alpha >= spec.size()) {
        throw Error(ErrorKind::IndexOutOfRange, "noisy node " + std::to_string(alpha) +
                                                    " out of range");
    }
    double sum = 0.0;
    for (Index l = 1; l < spec.size(); ++l) {
        const double u = spec.vectors(alpha, l);
        sum += u * u / (spec.values(l) * spec.values(l));
    }
    return p * p * sum;
}

}  // namespace gridnoise
