// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "common.hpp"

#include "gridnoise/error.hpp"
#include "gridnoise/gramian.hpp"
#include "gridnoise/mcsim.hpp"
#include "gridnoise/parallel.hpp"
#include "gridnoise/spectral.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace gridnoise::cli {

namespace {

constexpr double kDefaultTauLo = 1e-3;
constexpr double kDefaultTauHi = 1e3;
constexpr long kDefaultTauCount = 25;
constexpr double kRankTieTol = 1e-12;

struct Outcome {
    std::optional<MeasureResult> result;
    std::optional<Error> error;
};

std::vector<Method> requested_methods(const std::string& name) {
    if (name == "spectral") return {Method::spectral};
    if (name == "oracle") return {Method::oracle};
    if (name == "mc" || name == "montecarlo") return {Method::montecarlo};
    if (name == "all") return {Method::spectral, Method::oracle, Method::montecarlo};
    throw Error(ErrorKind::InvalidArgument, "unknown method: " + name);
}

GramianMethod gramian_method(const std::string& name) {
    if (name == "lyapunov") return GramianMethod::lyapunov;
    if (name == "eigen") return GramianMethod::eigen;
    throw Error(ErrorKind::InvalidArgument, "unknown gramian solver: " + name);
}

SimConfig mc_config(const RunSpec& spec, const SwingModel& model, double tau) {
    SimConfig cfg = suggest_config(model, tau);
    if (spec.dt) cfg.dt = *spec.dt;
    if (spec.traj) cfg.n_traj = *spec.traj;
    if (spec.t_burn) cfg.t_burn = *spec.t_burn;
    if (spec.t_measure) cfg.t_measure = *spec.t_measure;
    cfg.seed = spec.seed;
    return cfg;
}

Json config_json(const SimConfig& cfg) {
    return Json{{"dt", number(cfg.dt)},
                {"t_burn", number(cfg.t_burn)},
                {"t_measure", number(cfg.t_measure)},
                {"n_traj", cfg.n_traj},
                {"seed", cfg.seed}};
}

MeasureResult evaluate(Method method, const RunSpec& spec, const SwingModel& model,
                       const NoiseSpec& noise, const PerformanceSpec& perf) {
    switch (method) {
        case Method::spectral:
            return performance_generic(model, noise, perf);
        case Method::oracle: {
            OracleOptions options;
            options.method = gramian_method(spec.gramian);
            return performance_oracle(model, noise, perf, options);
        }
        case Method::montecarlo: {
            const VarianceEstimate est =
                simulate_variance(model, noise, perf, mc_config(spec, model, noise.tau));
            MeasureResult r;
            r.method = Method::montecarlo;
            r.value = est.mean;
            r.diagnostics.standard_error = est.standard_error;
            r.diagnostics.n_effective = est.n_effective;
            return r;
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown method");
}

Json optional_gamma(const SwingModel& model) {
    try {
        return number(uniform_ratio(model));
    } catch (const NonUniformRatioError&) {
        return nullptr;
    }
}

Json noise_json(const NoiseSpec& noise) {
    Json amp = Json::array();
    for (Index i = 0; i < noise.amplitude.size(); ++i) amp.push_back(number(noise.amplitude(i)));
    return Json{{"mode", noise.mode == NoiseMode::coherent ? "coherent" : "independent"},
                {"tau", number(noise.tau)},
                {"amplitude", std::move(amp)}};
}

Json relative_deviation(const Outcome& a, const Outcome& b) {
    if (!a.result || !b.result || b.result->value == 0.0) return nullptr;
    return number(std::abs(a.result->value - b.result->value) / std::abs(b.result->value));
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k) line += ',';
        line += fields[k];
    }
    return line + "\n";
}

std::string csv_field(const Json& v) {
    return v.is_number() ? format17(v.get<double>()) : std::string();
}

void require_format(const std::string& format) {
    if (format != "json" && format != "csv") {
        throw Error(ErrorKind::InvalidArgument, "unknown format: " + format);
    }
}

}  // namespace

std::vector<double> parse_tau_grid(const std::optional<std::string>& grid,
                                   const std::optional<double>& tau) {
    if (!grid) {
        if (tau) {
            if (!(*tau > 0.0)) {
                throw Error(ErrorKind::InvalidArgument, "tau must be positive");
            }
            return {*tau};
        }
    }
    double lo = kDefaultTauLo;
    double hi = kDefaultTauHi;
    long count = kDefaultTauCount;
    if (grid) {
        std::vector<std::string> parts;
        std::stringstream ss(*grid);
        std::string part;
        while (std::getline(ss, part, ':')) parts.push_back(part);
        try {
            if (parts.size() != 3) throw std::invalid_argument("fields");
            std::size_t used = 0;
            lo = std::stod(parts[0], &used);
            if (used != parts[0].size()) throw std::invalid_argument("lo");
            hi = std::stod(parts[1], &used);
            if (used != parts[1].size()) throw std::invalid_argument("hi");
            count = std::stol(parts[2], &used);
            if (used != parts[2].size()) throw std::invalid_argument("count");
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidArgument, "--tau-grid expects LO:HI:COUNT, got " + *grid);
        }
    }
    if (count <= 0) {
        throw Error(ErrorKind::InvalidArgument, "tau grid is empty");
    }
    if (!(lo > 0.0) || !(hi > 0.0) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorKind::InvalidArgument, "tau grid must be strictly positive");
    }
    if (count == 1) {
        return {lo};
    }
    if (!(hi > lo)) {
        throw Error(ErrorKind::InvalidArgument, "tau grid must be ascending (LO < HI)");
    }
    std::vector<double> taus(static_cast<std::size_t>(count));
    const double step = (std::log10(hi) - std::log10(lo)) / static_cast<double>(count - 1);
    for (long k = 0; k < count; ++k) {
        taus[static_cast<std::size_t>(k)] = std::pow(10.0, std::log10(lo) + step * double(k));
    }
    taus.front() = lo;
    taus.back() = hi;
    return taus;
}

CommandResult cmd_measure(const RunSpec& spec) {
    return guarded([&] {
        require_format(spec.format);
        const SwingModel model = load_model(spec);
        const Index n = model.size();
        const double tau = spec.tau.value_or(1.0);
        const PerformanceSpec perf = load_performance(spec, n);
        const NoiseSpec noise = load_noise(spec, n, tau);
        const std::vector<Method> methods = requested_methods(spec.method);
        const bool all = methods.size() > 1;

        std::vector<Outcome> outcomes(methods.size());
        for (std::size_t k = 0; k < methods.size(); ++k) {
            try {
                outcomes[k].result = evaluate(methods[k], spec, model, noise, perf);
            } catch (const Error& e) {
                if (!all) throw;
                outcomes[k].error = e;
            }
        }

        Json doc;
        doc["command"] = "measure";
        doc["network"] = network_json(model.network());
        doc["gamma"] = optional_gamma(model);
        doc["tau"] = number(tau);
        doc["measure"] = spec.measure;
        doc["noise"] = noise_json(noise);
        Json by_method = Json::object();
        for (std::size_t k = 0; k < methods.size(); ++k) {
            const Outcome& o = outcomes[k];
            by_method[std::string(to_string(methods[k]))] = Json{
                {"value", o.result ? number(o.result->value) : Json(nullptr)},
                {"diagnostics", diagnostics_json(o.result ? o.result->diagnostics : Diagnostics{})},
                {"error", o.error ? error_json(o.error->kind(), o.error->what()) : Json(nullptr)},
            };
        }
        doc["methods"] = std::move(by_method);
        if (all) {
            doc["deviations"] = Json{
                {"spectral_vs_oracle", relative_deviation(outcomes[0], outcomes[1])},
                {"montecarlo_vs_spectral", relative_deviation(outcomes[2], outcomes[0])},
                {"montecarlo_vs_oracle", relative_deviation(outcomes[2], outcomes[1])},
            };
        } else {
            doc["deviations"] = nullptr;
        }

        const bool any_value = std::any_of(outcomes.begin(), outcomes.end(),
                                           [](const Outcome& o) { return o.result.has_value(); });
        int code = kSuccess;
        if (!any_value) {
            code = is_input_error(outcomes.front().error->kind()) ? kInputError : kNumericalError;
        }

        if (spec.format == "csv") {
            std::string text = csv_join({"method", "value", "standard_error"});
            for (std::size_t k = 0; k < methods.size(); ++k) {
                const Json& entry = doc["methods"][std::string(to_string(methods[k]))];
                text += csv_join({std::string(to_string(methods[k])), csv_field(entry["value"]),
                                  csv_field(entry["diagnostics"]["standard_error"])});
            }
            return CommandResult{code, text};
        }
        return CommandResult{code, dump(doc)};
    });
}

CommandResult cmd_sweep(const RunSpec& spec) {
    return guarded([&] {
        require_format(spec.format);
        const SwingModel model = load_model(spec);
        const Index n = model.size();
        const std::vector<double> taus = parse_tau_grid(spec.tau_grid, spec.tau);
        const PerformanceSpec perf = load_performance(spec, n);
        const NoiseSpec base_noise = load_noise(spec, n, taus.front());
        const std::vector<Method> methods = requested_methods(spec.method);
        if (methods.size() != 1) {
            throw Error(ErrorKind::InvalidArgument, "sweep takes a single method");
        }
        const bool asymptotes = spec.measure == "phase-coherence" && spec.node.has_value() &&
                                model.has_uniform_parameters();

        const std::vector<std::string> columns{"tau",
                                               "value",
                                               "small_tau_asymptote",
                                               "large_tau_asymptote",
                                               "ratio_small_tau",
                                               "ratio_large_tau"};
        std::vector<std::vector<double>> table(taus.size());
        const double nan = std::numeric_limits<double>::quiet_NaN();
        parallel_for(taus.size(), [&](std::size_t k) {
            NoiseSpec noise = base_noise;
            noise.tau = taus[k];
            const double value = evaluate(methods.front(), spec, model, noise, perf).value;
            double small = nan;
            double large = nan;
            if (asymptotes) {
                small = small_tau_asymptote(model, *spec.node, spec.amplitude, taus[k]);
                large = large_tau_asymptote(model, *spec.node, spec.amplitude);
            }
            table[k] = {taus[k], value, small, large, value / small, value / large};
        });

        if (spec.format == "csv") {
            std::string text = csv_join(columns);
            for (const auto& row : table) {
                std::vector<std::string> fields;
                for (double v : row) fields.push_back(format17(v));
                text += csv_join(fields);
            }
            return CommandResult{kSuccess, text};
        }
        Json rows = Json::array();
        for (const auto& row : table) {
            Json r = Json::object();
            for (std::size_t c = 0; c < columns.size(); ++c) r[columns[c]] = number(row[c]);
            rows.push_back(std::move(r));
        }
        Json doc;
        doc["command"] = "sweep";
        doc["network"] = network_json(model.network());
        doc["gamma"] = optional_gamma(model);
        doc["measure"] = spec.measure;
        doc["noise"] = noise_json(base_noise);
        doc["method"] = std::string(to_string(methods.front()));
        doc["columns"] = columns;
        doc["rows"] = std::move(rows);
        return CommandResult{kSuccess, dump(doc)};
    });
}

CommandResult cmd_rank(const RunSpec& spec) {
    return guarded([&] {
        require_format(spec.format);
        const SwingModel model = load_model(spec);
        if (!model.has_uniform_parameters()) {
            throw Error(ErrorKind::NonUniformParameters,
                        "rank needs uniform inertia and damping");
        }
        const Index n = model.size();
        const std::vector<double> taus = parse_tau_grid(spec.tau_grid, spec.tau);
        const LaplacianSpectrum spec_l = spectrum(laplacian(model.network()));
        const double kf = kirchhoff_index(spec_l);

        struct Row {
            Index node;
            double closeness;
            double inverse_closeness;
            double bracket;
            std::vector<double> coherence;
        };
        std::vector<Row> rows(static_cast<std::size_t>(n));
        parallel_for(rows.size(), [&](std::size_t k) {
            const Index alpha = static_cast<Index>(k);
            Row& row = rows[k];
            row.node = alpha;
            row.inverse_closeness = inverse_closeness(spec_l, alpha);
            row.closeness = 1.0 / row.inverse_closeness;
            row.bracket = closeness_bracket(spec_l, alpha);
            for (double tau : taus) {
                row.coherence.push_back(phase_coherence(model, alpha, spec.amplitude, tau).value);
            }
        });
        std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            const double pa = a.coherence.front();
            const double pb = b.coherence.front();
            if (std::abs(pa - pb) <= kRankTieTol * std::max(std::abs(pa), std::abs(pb))) {
                return a.node < b.node;
            }
            return pa > pb;
        });

        if (spec.format == "csv") {
            std::vector<std::string> header{"node", "rank", "closeness", "inverse_closeness",
                                            "closeness_bracket"};
            for (double tau : taus) header.push_back("P_tau=" + format17(tau));
            std::string text = csv_join(header);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                std::vector<std::string> fields{std::to_string(rows[r].node),
                                                std::to_string(r + 1), format17(rows[r].closeness),
                                                format17(rows[r].inverse_closeness),
                                                format17(rows[r].bracket)};
                for (double p : rows[r].coherence) fields.push_back(format17(p));
                text += csv_join(fields);
            }
            return CommandResult{kSuccess, text};
        }

        Json nodes = Json::array();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            Json coherence = Json::array();
            for (double p : rows[r].coherence) coherence.push_back(number(p));
            nodes.push_back(Json{{"node", rows[r].node},
                                 {"rank", r + 1},
                                 {"closeness", number(rows[r].closeness)},
                                 {"inverse_closeness", number(rows[r].inverse_closeness)},
                                 {"closeness_bracket", number(rows[r].bracket)},
                                 {"phase_coherence", std::move(coherence)}});
        }
        Json tau_list = Json::array();
        for (double tau : taus) tau_list.push_back(number(tau));
        Json doc;
        doc["command"] = "rank";
        doc["network"] = network_json(model.network());
        doc["amplitude"] = number(spec.amplitude);
        doc["taus"] = std::move(tau_list);
        doc["kirchhoff_index"] = number(kf);
        doc["kirchhoff_term"] = number(kf / double(n * n));
        doc["nodes"] = std::move(nodes);
        return CommandResult{kSuccess, dump(doc)};
    });
}

CommandResult cmd_simulate(const RunSpec& spec) {
    return guarded([&] {
        if (spec.format != "json") {
            throw Error(ErrorKind::InvalidArgument, "simulate writes JSON only");
        }
        const SwingModel model = load_model(spec);
        const Index n = model.size();
        const double tau = spec.tau.value_or(1.0);
        const PerformanceSpec perf = load_performance(spec, n);
        const NoiseSpec noise = load_noise(spec, n, tau);
        const SimConfig cfg = mc_config(spec, model, tau);
        const VarianceEstimate est = simulate_variance(model, noise, perf, cfg);

        Json doc;
        doc["command"] = "simulate";
        doc["network"] = network_json(model.network());
        doc["gamma"] = optional_gamma(model);
        doc["tau"] = number(tau);
        doc["measure"] = spec.measure;
        doc["noise"] = noise_json(noise);
        doc["config"] = config_json(cfg);
        doc["estimate"] = Json{{"mean", number(est.mean)},
                               {"standard_error", number(est.standard_error)},
                               {"n_effective", est.n_effective}};
        if (spec.lags.empty()) {
            doc["correlator"] = nullptr;
        } else {
            std::vector<double> lags;
            for (double s : spec.lags) lags.push_back(s * tau);
            Json points = Json::array();
            for (const auto& p : estimate_correlator(tau, lags, cfg)) {
                points.push_back(Json{{"lag", number(p.lag)},
                                      {"value", number(p.value)},
                                      {"standard_error", number(p.standard_error)},
                                      {"expected", number(std::exp(-p.lag / tau))}});
            }
            doc["correlator"] = std::move(points);
        }
        return CommandResult{kSuccess, dump(doc)};
    });
}

namespace {

void add_model_options(CLI::App* sub, RunSpec& spec) {
    sub->add_option("--network", spec.network, "edge-list file (i j b per line)")->required();
    sub->add_option("--nodes", spec.nodes, "node-parameter file (i m d per line)");
}

void add_noise_options(CLI::App* sub, RunSpec& spec) {
    sub->add_option("--measure", spec.measure, "phase-coherence | freq-coherence | custom");
    sub->add_option("--q11", spec.q11, "custom phase weight matrix");
    sub->add_option("--q22", spec.q22, "custom frequency weight matrix");
    sub->add_option("--node", spec.node, "node carrying the noise");
    sub->add_option("--amplitude", spec.amplitude, "noise amplitude p");
    sub->add_option("--noise", spec.noise_vector, "per-node amplitude vector file");
    sub->add_option("--mode", spec.mode, "coherent | independent");
}

void add_sim_options(CLI::App* sub, RunSpec& spec) {
    sub->add_option("--seed", spec.seed, "RNG seed");
    sub->add_option("--dt", spec.dt, "integration step (s)");
    sub->add_option("--traj", spec.traj, "trajectory count");
    sub->add_option("--t-burn", spec.t_burn, "burn-in horizon (s)");
    sub->add_option("--t-measure", spec.t_measure, "averaging horizon (s)");
}

std::vector<Index> parse_sizes(const std::string& text) {
    std::vector<Index> sizes;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            const long v = std::stol(part, &used);
            if (used != part.size() || v < 2) throw std::invalid_argument(part);
            sizes.push_back(static_cast<Index>(v));
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidArgument, "--sizes expects integers >= 2, got " + text);
        }
    }
    if (sizes.empty()) {
        throw Error(ErrorKind::InvalidArgument, "--sizes is empty");
    }
    return sizes;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"gridnoise: transient performance of swing dynamics under colored noise"};
    app.require_subcommand(1);

    RunSpec spec;
    ValidateSpec vspec;
    std::optional<std::filesystem::path> out_path;
    std::string sizes_text;

    auto* measure = app.add_subcommand("measure", "evaluate one performance measure");
    add_model_options(measure, spec);
    add_noise_options(measure, spec);
    add_sim_options(measure, spec);
    measure->add_option("--tau", spec.tau, "correlation time (s)");
    measure->add_option("--method", spec.method, "spectral | oracle | mc | all");
    measure->add_option("--gramian", spec.gramian, "lyapunov | eigen (oracle solver)");

    auto* sweep = app.add_subcommand("sweep", "tabulate a measure over a tau grid");
    add_model_options(sweep, spec);
    add_noise_options(sweep, spec);
    add_sim_options(sweep, spec);
    sweep->add_option("--tau", spec.tau, "single correlation time");
    sweep->add_option("--tau-grid", spec.tau_grid, "LO:HI:COUNT, log-spaced");
    sweep->add_option("--method", spec.method, "spectral | oracle | mc");
    sweep->add_option("--gramian", spec.gramian, "lyapunov | eigen (oracle solver)");

    auto* rank = app.add_subcommand("rank", "rank nodes by phase-coherence criticality");
    add_model_options(rank, spec);
    rank->add_option("--amplitude", spec.amplitude, "noise amplitude p");
    rank->add_option("--tau", spec.tau, "single correlation time");
    rank->add_option("--tau-grid", spec.tau_grid, "LO:HI:COUNT, log-spaced");

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo variance estimate");
    add_model_options(simulate, spec);
    add_noise_options(simulate, spec);
    add_sim_options(simulate, spec);
    simulate->add_option("--tau", spec.tau, "correlation time (s)");
    simulate->add_option("--lags", spec.lags, "also estimate the noise correlator at these lags "
                                              "(units of tau)")
        ->delimiter(',');

    auto* validate = app.add_subcommand("validate", "run the cross-method validation suite");
    validate->add_option("--seed", vspec.seed, "RNG seed");
    validate->add_option("--sizes", sizes_text, "comma-separated node counts");
    validate->add_option("--instances", vspec.instances_per_size, "random systems per size");
    validate->add_flag("--perturb-f", vspec.perturb_f)->group("");

    for (auto* sub : {measure, sweep, rank, simulate, validate}) {
        sub->add_option("--out", out_path, "write the document here instead of stdout");
        sub->add_option("--format", sub == validate ? vspec.format : spec.format, "json | csv");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        out << dump(Json{{"error", error_json(ErrorKind::InvalidArgument, e.what())}});
        return kInputError;
    }

    CommandResult result;
    if (measure->parsed()) {
        result = cmd_measure(spec);
    } else if (sweep->parsed()) {
        result = cmd_sweep(spec);
    } else if (rank->parsed()) {
        result = cmd_rank(spec);
    } else if (simulate->parsed()) {
        result = cmd_simulate(spec);
    } else {
        result = guarded([&] {
            if (!sizes_text.empty()) vspec.sizes = parse_sizes(sizes_text);
            return cmd_validate(vspec);
        });
    }

    if (out_path) {
        std::ofstream file(*out_path, std::ios::binary);
        if (!file) {
            err << "cannot write " << out_path->string() << "\n";
            return kInputError;
        }
        file << result.output;
    } else {
        out << result.output;
    }
    if (result.exit_code != kSuccess) {
        err << "gridnoise: failed with exit code " << result.exit_code << "\n";
    }
    return result.exit_code;
}

}  // namespace gridnoise::cli
