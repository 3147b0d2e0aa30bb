// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "common.hpp"

#include "gridnoise/error.hpp"
#include "gridnoise/gramian.hpp"
#include "gridnoise/mcsim.hpp"
#include "gridnoise/parallel.hpp"
#include "gridnoise/random_systems.hpp"
#include "gridnoise/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>

namespace gridnoise::cli {

namespace {

using systems::Rng;

constexpr double kCrossTol = 1e-5;
constexpr double kKernelTol = 1e-12;
constexpr double kLawTol = 1e-2;
constexpr double kTrlTol = 1e-8;
constexpr double kGramianTol = 1e-7;
constexpr int kKernelTuples = 10000;
constexpr int kTrlSystems = 20;

/// One row of the report. `residuals` holds one entry per checked item unless
/// the item count is large, in which case only the maximum is kept.
struct Check {
    std::string name;
    double tolerance = 0.0;
    long count = 0;
    long failures = 0;
    double max_residual = 0.0;
    std::vector<double> residuals;
    std::vector<std::string> notes;
    bool keep_residuals = true;

    Check(std::string check_name, double tol) : name(std::move(check_name)), tolerance(tol) {}

    void record(double residual) {
        ++count;
        if (!(residual < tolerance)) ++failures;
        if (std::isnan(residual) || residual > max_residual) max_residual = residual;
        if (keep_residuals) residuals.push_back(residual);
    }
    void fail(const std::string& note) {
        ++count;
        ++failures;
        notes.push_back(note);
        if (keep_residuals) residuals.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    [[nodiscard]] bool passed() const { return count > 0 && failures == 0; }
};

Rng stream(std::uint64_t seed, std::uint64_t salt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(salt)};
    return Rng(seq);
}

double rel_error(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

/// Random model with a common damping-to-inertia ratio gamma.
SwingModel random_uniform_gamma_model(Rng& rng, Index n, double gamma) {
    Network net = systems::random_connected(rng, n);
    Eigen::VectorXd m(n);
    for (Index i = 0; i < n; ++i) m(i) = systems::log_uniform(rng, 0.5, 2.0);
    const Eigen::VectorXd d = gamma * m;
    return SwingModel(std::move(net), m, d);
}

struct CrossInstance {
    SwingModel model;
    NoiseSpec noise;
    PerformanceSpec perf;
};

Check check_cross_method(const ValidateSpec& spec) {
    Rng rng = stream(spec.seed, 1);
    std::vector<CrossInstance> cases;
    for (Index n : spec.sizes) {
        for (int k = 0; k < spec.instances_per_size; ++k) {
            const double gamma = systems::log_uniform(rng, 0.1, 10.0);
            const double tau = systems::log_uniform(rng, 1e-2, 1e2);
            SwingModel model = random_uniform_gamma_model(rng, n, gamma);
            NoiseSpec noise;
            noise.amplitude = systems::random_normal(rng, n);
            noise.tau = tau;
            PerformanceSpec perf;
            perf.q11 = systems::random_psd(rng, n, true);
            perf.q22 = systems::random_psd(rng, n, false);
            cases.push_back({std::move(model), std::move(noise), std::move(perf)});
        }
    }
    SpectralOptions options;
    if (spec.perturb_f) options.f_scale = 1.0 + 1e-3;

    std::vector<double> residual(cases.size());
    std::vector<std::string> error(cases.size());
    parallel_for(cases.size(), [&](std::size_t k) {
        try {
            const CrossInstance& c = cases[k];
            const double p_spec = performance_generic(c.model, c.noise, c.perf, options).value;
            const double p_orac = performance_oracle(c.model, c.noise, c.perf).value;
            residual[k] = rel_error(p_spec, p_orac);
        } catch (const Error& e) {
            error[k] = std::string(to_string(e.kind())) + ": " + e.what();
        }
    });

    Check check{"cross_method_agreement", kCrossTol};
    for (std::size_t k = 0; k < cases.size(); ++k) {
        if (error[k].empty()) {
            check.record(residual[k]);
        } else {
            check.fail("instance " + std::to_string(k) + ": " + error[k]);
        }
    }
    return check;
}

Check check_kernel_diagonal(const ValidateSpec& spec) {
    Rng rng = stream(spec.seed, 2);
    Check check{"kernel_diagonal_identity", kKernelTol};
    check.keep_residuals = false;
    for (int k = 0; k < kKernelTuples; ++k) {
        const double tau = systems::log_uniform(rng, 1e-2, 1e2);
        const double gamma = systems::log_uniform(rng, 1e-1, 1e1);
        const double lam = systems::log_uniform(rng, 1e-2, 1e2);
        const double closed =
            tau * (1.0 + gamma * tau) / (2.0 * lam * gamma * (1.0 / tau + gamma + lam * tau));
        check.record(rel_error(f_kernel(tau, gamma, lam, lam), closed));
    }
    return check;
}

struct LawGraph {
    std::string name;
    Network net;
};

std::vector<LawGraph> law_graphs(std::uint64_t seed) {
    Rng rng = stream(seed, 3);
    std::vector<LawGraph> graphs;
    graphs.push_back({"P4", systems::path_graph(4)});
    graphs.push_back({"S5", systems::star_graph(5)});
    graphs.push_back({"tree7", systems::random_tree(rng, 7)});
    return graphs;
}

std::vector<Check> check_small_tau(const ValidateSpec& spec) {
    constexpr double tau = 1e-3;
    Check check{"small_tau_law", kLawTol};
    Check ranking{"small_tau_ranking", 0.5};
    for (const LawGraph& g : law_graphs(spec.seed)) {
        const SwingModel model = SwingModel::uniform(g.net);
        const Index n = model.size();
        const LaplacianSpectrum lap = spectrum(laplacian(g.net));
        std::vector<double> p(static_cast<std::size_t>(n));
        std::vector<double> cinv(static_cast<std::size_t>(n));
        for (Index a = 0; a < n; ++a) {
            p[std::size_t(a)] = phase_coherence(model, a, 1.0, tau).value;
            cinv[std::size_t(a)] = inverse_closeness(lap, a);
            check.record(rel_error(p[std::size_t(a)], small_tau_asymptote(model, a, 1.0, tau)));
        }
        // Nodes with equal inverse closeness (graph automorphisms) may come
        // out in either order; every strictly ordered pair must agree.
        long disagreements = 0;
        for (std::size_t a = 0; a < p.size(); ++a) {
            for (std::size_t b = a + 1; b < p.size(); ++b) {
                const double dc = cinv[a] - cinv[b];
                const double dp = p[a] - p[b];
                const double scale = std::max(std::abs(cinv[a]), std::abs(cinv[b]));
                if (std::abs(dc) <= 1e-9 * scale) {
                    if (std::abs(dp) > 1e-6 * std::max(p[a], p[b])) ++disagreements;
                } else if ((dc > 0) != (dp > 0)) {
                    ++disagreements;
                }
            }
        }
        ranking.record(static_cast<double>(disagreements));
        if (disagreements) ranking.notes.push_back(g.name + ": ranking differs");
    }
    return {check, ranking};
}

Check check_large_tau(const ValidateSpec& spec) {
    constexpr double tau = 1e3;
    Check check{"large_tau_law", kLawTol};
    for (const LawGraph& g : law_graphs(spec.seed)) {
        const SwingModel model = SwingModel::uniform(g.net);
        for (Index a = 0; a < model.size(); ++a) {
            check.record(rel_error(phase_coherence(model, a, 1.0, tau).value,
                                   large_tau_asymptote(model, a, 1.0)));
        }
    }
    return check;
}

double multiset_distance(Eigen::VectorXcd a, Eigen::VectorXcd b) {
    double worst = 0.0;
    std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
    for (Index i = 0; i < a.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        Index pick = -1;
        for (Index j = 0; j < b.size(); ++j) {
            if (used[std::size_t(j)]) continue;
            const double dist = std::abs(a(i) - b(j));
            if (dist < best) {
                best = dist;
                pick = j;
            }
        }
        used[std::size_t(pick)] = true;
        worst = std::max(worst, best / std::max(1.0, std::abs(a(i))));
    }
    return worst;
}

Check check_trl(const ValidateSpec& spec) {
    Rng rng = stream(spec.seed, 4);
    Check check{"diagonalizing_pair", kTrlTol};
    int built = 0;
    int attempts = 0;
    while (built < kTrlSystems && attempts < 50 * kTrlSystems) {
        ++attempts;
        std::uniform_int_distribution<Index> size(3, 8);
        const Index n = size(rng);
        const double gamma = systems::log_uniform(rng, 0.1, 10.0);
        const double tau = systems::log_uniform(rng, 1e-2, 1e2);
        const SwingModel model = random_uniform_gamma_model(rng, n, gamma);
        NoiseSpec noise;
        noise.amplitude = systems::random_normal(rng, n);
        noise.tau = tau;
        constexpr double eps = 1e-3;

        const LaplacianSpectrum modes = spectrum(scaled_laplacian(model, eps));
        bool well_separated = true;
        for (Index l = 0; l < n; ++l) {
            const double lam = modes.values(l);
            if (std::abs(gamma * gamma - 4.0 * lam) < 1e-2 * gamma * gamma ||
                std::abs(1.0 - gamma * tau + tau * tau * lam) < 1e-2) {
                well_separated = false;
            }
        }
        if (!well_separated) continue;
        ++built;

        try {
            const DiagonalizingPair pair = build_trl(model, noise, eps);
            const Index dim = pair.t_r.rows();
            const double biorth =
                (pair.t_l * pair.t_r - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
            const AugmentedSystem aug = build_augmented(model, noise, eps);
            Eigen::EigenSolver<Eigen::MatrixXd> solver(aug.a, false);
            const double spectrum_gap = multiset_distance(pair.mu, solver.eigenvalues());
            check.record(std::max(biorth, spectrum_gap));
        } catch (const Error& e) {
            check.fail(std::string(to_string(e.kind())) + ": " + e.what());
        }
    }
    if (built < kTrlSystems) check.notes.push_back("too few well-separated systems drawn");
    return check;
}

Check check_gramian_methods(const ValidateSpec& spec) {
    Rng rng = stream(spec.seed, 5);
    Check check{"gramian_lyapunov_vs_eigen", kGramianTol};
    for (int k = 0; k < kTrlSystems; ++k) {
        std::uniform_int_distribution<Index> size(3, 8);
        const Index n = size(rng);
        const double gamma = systems::log_uniform(rng, 0.1, 10.0);
        const double tau = systems::log_uniform(rng, 1e-2, 1e2);
        const SwingModel model = random_uniform_gamma_model(rng, n, gamma);
        NoiseSpec noise;
        noise.amplitude = systems::random_normal(rng, n);
        noise.tau = tau;
        PerformanceSpec perf;
        perf.q11 = systems::random_psd(rng, n, true);
        perf.q22 = systems::random_psd(rng, n, false);
        try {
            const AugmentedSystem aug = build_augmented(model, noise, 1e-2);
            const Eigen::MatrixXd qm = q_weighted(model, perf);
            const Eigen::MatrixXd x_lyap = solve_lyapunov(aug, qm).x;
            const Eigen::MatrixXd x_eig = gramian_spectral(aug, qm).x;
            check.record((x_lyap - x_eig).cwiseAbs().maxCoeff() /
                         std::max(x_lyap.cwiseAbs().maxCoeff(), 1e-300));
        } catch (const Error& e) {
            check.fail(std::string(to_string(e.kind())) + ": " + e.what());
        }
    }
    return check;
}

Check check_finiteness() {
    Check check{"finiteness_gate", 0.5};
    const SwingModel model = SwingModel::uniform(systems::path_graph(4));
    const NoiseSpec noise = NoiseSpec::single_node(4, 0, 1.0, 1.0);

    PerformanceSpec bad;
    bad.q11 = Eigen::MatrixXd::Identity(4, 4);
    bad.q22 = Eigen::MatrixXd::Zero(4, 4);
    auto expect_violation = [&](const char* label, auto&& call) {
        try {
            (void)call();
            check.fail(std::string(label) + ": q11 = I was accepted");
        } catch (const Error& e) {
            check.record(e.kind() == ErrorKind::FinitenessViolated ? 0.0 : 1.0);
        }
    };
    expect_violation("spectral", [&] { return performance_generic(model, noise, bad); });
    expect_violation("oracle", [&] { return performance_oracle(model, noise, bad); });

    const PerformanceSpec good = PerformanceSpec::phase_coherence(4);
    try {
        const double a = performance_generic(model, noise, good).value;
        const double b = performance_oracle(model, noise, good).value;
        check.record(std::isfinite(a) && std::isfinite(b) ? 0.0 : 1.0);
    } catch (const Error& e) {
        check.fail(std::string("projected q11 rejected: ") + e.what());
    }
    return check;
}

Check check_montecarlo(const ValidateSpec& spec) {
    Check check{"montecarlo_hand_value", 1.0};
    const SwingModel model = SwingModel::uniform(systems::path_graph(2));
    const NoiseSpec noise = NoiseSpec::single_node(2, 0, 1.0, 1.0);
    SimConfig cfg = suggest_config(model, 1.0);
    cfg.n_traj = 16;
    cfg.t_measure = 2000.0;
    cfg.seed = spec.seed;
    const VarianceEstimate est =
        simulate_variance(model, noise, PerformanceSpec::phase_coherence(2), cfg);
    constexpr double expected = 0.125;
    // Residual in units of the allowed band: max(5 %, 3 standard errors).
    const double band = std::max(0.05 * expected, 3.0 * est.standard_error);
    check.record(std::abs(est.mean - expected) / band);
    return check;
}

Json check_json(const Check& c) {
    Json residuals = nullptr;
    if (c.keep_residuals) {
        residuals = Json::array();
        for (double r : c.residuals) residuals.push_back(number(r));
    }
    return Json{{"name", c.name},
                {"passed", c.passed()},
                {"count", c.count},
                {"failures", c.failures},
                {"tolerance", number(c.tolerance)},
                {"max_residual", number(c.max_residual)},
                {"residuals", std::move(residuals)},
                {"notes", c.notes}};
}

}  // namespace

CommandResult cmd_validate(const ValidateSpec& spec) {
    return guarded([&] {
        if (spec.format != "json" && spec.format != "csv") {
            throw Error(ErrorKind::InvalidArgument, "unknown format: " + spec.format);
        }
        if (spec.instances_per_size < 1) {
            throw Error(ErrorKind::InvalidArgument, "--instances must be positive");
        }
        for (Index n : spec.sizes) {
            if (n < 2) throw Error(ErrorKind::InvalidArgument, "--sizes entries must be >= 2");
        }

        std::vector<Check> checks{check_cross_method(spec), check_kernel_diagonal(spec)};
        for (Check& c : check_small_tau(spec)) checks.push_back(std::move(c));
        checks.push_back(check_large_tau(spec));
        checks.push_back(check_trl(spec));
        checks.push_back(check_gramian_methods(spec));
        checks.push_back(check_finiteness());
        checks.push_back(check_montecarlo(spec));
        const bool all_passed = std::all_of(checks.begin(), checks.end(),
                                            [](const Check& c) { return c.passed(); });
        const int code = all_passed ? kSuccess : kInputError;

        if (spec.format == "csv") {
            std::string text = "name,passed,count,failures,tolerance,max_residual\n";
            for (const Check& c : checks) {
                text += c.name + "," + (c.passed() ? "true" : "false") + "," +
                        std::to_string(c.count) + "," + std::to_string(c.failures) + "," +
                        format17(c.tolerance) + "," + format17(c.max_residual) + "\n";
            }
            return CommandResult{code, text};
        }

        Json sizes = Json::array();
        for (Index n : spec.sizes) sizes.push_back(n);
        Json list = Json::array();
        for (const Check& c : checks) list.push_back(check_json(c));
        Json doc;
        doc["command"] = "validate";
        doc["seed"] = spec.seed;
        doc["sizes"] = std::move(sizes);
        doc["instances_per_size"] = spec.instances_per_size;
        doc["perturb_f"] = spec.perturb_f;
        doc["passed"] = all_passed;
        doc["checks"] = std::move(list);
        return CommandResult{code, dump(doc)};
    });
}

}  // namespace gridnoise::cli
