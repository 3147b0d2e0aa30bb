// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridnoise/sysmodel.hpp"

#include "gridnoise/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace gridnoise {

namespace {

constexpr double kRatioTol = 1e-12;

Eigen::VectorXd inv_sqrt(const Eigen::VectorXd& v) {
    return v.array().rsqrt().matrix();
}

void check_symmetric_psd(const Eigen::MatrixXd& q, Index n, const char* name) {
    if (q.rows() != n || q.cols() != n) {
        throw Error(ErrorKind::InvalidArgument,
                    std::string(name) + " must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (!q.allFinite()) {
        throw Error(ErrorKind::InvalidArgument, std::string(name) + " has non-finite entries");
    }
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw Error(ErrorKind::InvalidArgument, std::string(name) + " is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw Error(ErrorKind::EigensolverFailure, std::string(name) + ": eigensolver failed");
    }
    if (n > 0 && es.eigenvalues()(0) < -1e-10 * scale) {
        throw Error(ErrorKind::InvalidArgument,
                    std::string(name) + " is not positive semidefinite");
    }
}

Eigen::MatrixXd centering_projector(Index n) {
    return Eigen::MatrixXd::Identity(n, n) -
           Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
}

}  // namespace

SwingModel::SwingModel(Network net, Eigen::VectorXd inertia, Eigen::VectorXd damping)
    : net_(std::move(net)), m_(std::move(inertia)), d_(std::move(damping)) {
    if (m_.size() != net_.size() || d_.size() != net_.size()) {
        throw Error(ErrorKind::InvalidArgument, "inertia/damping length must equal node count");
    }
    for (Index i = 0; i < m_.size(); ++i) {
        if (!(m_(i) > 0.0) || !std::isfinite(m_(i)) || !(d_(i) > 0.0) || !std::isfinite(d_(i))) {
            throw Error(ErrorKind::InvalidArgument,
                        "node " + std::to_string(i) + ": inertia and damping must be positive");
        }
    }
}

SwingModel SwingModel::uniform(Network net, double inertia, double damping) {
    const Index n = net.size();
    return SwingModel(std::move(net), Eigen::VectorXd::Constant(n, inertia),
                      Eigen::VectorXd::Constant(n, damping));
}

bool SwingModel::has_uniform_parameters() const {
    return (m_.array() == m_(0)).all() && (d_.array() == d_(0)).all();
}

NodeParameters load_node_parameters(std::string_view text, Index node_count) {
    NodeParameters out{Eigen::VectorXd::Zero(node_count), Eigen::VectorXd::Zero(node_count)};
    std::vector<bool> seen(static_cast<std::size_t>(node_count), false);
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        for (char& c : line) {
            if (c == ',') c = ' ';
        }
        std::istringstream fields(line);
        long long id = -1;
        double m = 0.0;
        double d = 0.0;
        std::string extra;
        if (!(fields >> id >> m >> d) || (fields >> extra)) {
            throw Error(ErrorKind::ParseError,
                        "node file line " + std::to_string(line_no) + ": expected \"i m d\"");
        }
        if (id < 0 || id >= node_count) {
            throw Error(ErrorKind::IndexOutOfRange,
                        "node file line " + std::to_string(line_no) + ": node id out of range");
        }
        if (seen[static_cast<std::size_t>(id)]) {
            throw Error(ErrorKind::ParseError,
                        "node file line " + std::to_string(line_no) + ": node listed twice");
        }
        seen[static_cast<std::size_t>(id)] = true;
        out.inertia(id) = m;
        out.damping(id) = d;
    }
    for (Index i = 0; i < node_count; ++i) {
        if (!seen[static_cast<std::size_t>(i)]) {
            throw Error(ErrorKind::ParseError,
                        "node file is missing node " + std::to_string(i));
        }
    }
    return out;
}

NodeParameters load_node_parameters_file(const std::filesystem::path& path, Index node_count) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidArgument, "cannot open node file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_node_parameters(buf.str(), node_count);
}

NoiseSpec NoiseSpec::single_node(Index node_count, Index alpha, double amplitude, double tau) {
    if (alpha < 0 || alpha >= node_count) {
        throw Error(ErrorKind::IndexOutOfRange, "noisy node " + std::to_string(alpha) +
                                                    " out of range");
    }
    NoiseSpec spec;
    spec.amplitude = Eigen::VectorXd::Zero(node_count);
    spec.amplitude(alpha) = amplitude;
    spec.tau = tau;
    return spec;
}

void NoiseSpec::validate(Index node_count) const {
    if (amplitude.size() != node_count) {
        throw Error(ErrorKind::InvalidArgument, "noise amplitude length must equal node count");
    }
    if (!amplitude.allFinite()) {
        throw Error(ErrorKind::InvalidArgument, "noise amplitude has non-finite entries");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw Error(ErrorKind::InvalidArgument, "correlation time tau must be positive");
    }
}

PerformanceSpec PerformanceSpec::phase_coherence(Index node_count) {
    return {centering_projector(node_count), Eigen::MatrixXd::Zero(node_count, node_count)};
}

PerformanceSpec PerformanceSpec::frequency_coherence(Index node_count) {
    return {Eigen::MatrixXd::Zero(node_count, node_count), centering_projector(node_count)};
}

void PerformanceSpec::validate(Index node_count) const {
    check_symmetric_psd(q11, node_count, "q11");
    check_symmetric_psd(q22, node_count, "q22");
}

bool PerformanceSpec::finiteness_holds() const {
    const Index n = q11.rows();
    if (n == 0) return true;
    const Eigen::VectorXd u1 = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
    const double scale = std::max(1.0, q11.cwiseAbs().maxCoeff());
    return (q11 * u1).cwiseAbs().maxCoeff() <= 1e-10 * scale;
}

void require_finiteness(const PerformanceSpec& perf) {
    if (!perf.finiteness_holds()) {
        throw Error(ErrorKind::FinitenessViolated,
                    "q11 observes the uniform phase shift (u1 not in ker q11); the measure "
                    "diverges");
    }
}

Eigen::MatrixXd scaled_laplacian(const SwingModel& model, double eps) {
    const Index n = model.size();
    const Eigen::VectorXd s = inv_sqrt(model.inertia());
    Eigen::MatrixXd reg = laplacian(model.network());
    reg.diagonal().array() += eps;
    Eigen::MatrixXd out = s.asDiagonal() * reg * s.asDiagonal();
    // exact symmetry for downstream symmetric solvers
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            out(j, i) = out(i, j);
        }
    }
    return out;
}

double ratio_spread(const SwingModel& model) {
    const Eigen::ArrayXd ratio = model.damping().array() / model.inertia().array();
    const double gamma = ratio(0);
    return (ratio - gamma).abs().maxCoeff() / gamma;
}

double uniform_ratio(const SwingModel& model) {
    const double spread = ratio_spread(model);
    if (!(spread < kRatioTol)) {
        std::ostringstream msg;
        msg << "damping/inertia ratio is not uniform (relative spread " << spread
            << "); use the Gramian oracle instead of the spectral formula";
        throw NonUniformRatioError(spread, msg.str());
    }
    return model.damping()(0) / model.inertia()(0);
}

AugmentedSystem build_augmented(const SwingModel& model, const NoiseSpec& noise, double eps) {
    const Index n = model.size();
    noise.validate(n);
    if (noise.mode != NoiseMode::coherent) {
        throw Error(ErrorKind::InvalidArgument,
                    "build_augmented needs a coherent noise channel; split independent noise "
                    "with coherent_channels()");
    }
    if (!(eps >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "regularization eps must be >= 0");
    }
    const Eigen::VectorXd s = inv_sqrt(model.inertia());
    const Index dim = 2 * n + 1;

    AugmentedSystem sys;
    sys.node_count = n;
    sys.eps = eps;
    sys.eta0 = std::sqrt(2.0 / noise.tau);
    sys.a = Eigen::MatrixXd::Zero(dim, dim);
    sys.a.block(0, n, n, n).setIdentity();
    sys.a.block(n, 0, n, n) = -scaled_laplacian(model, eps);
    sys.a.block(n, n, n, n).diagonal() =
        -(model.damping().array() / model.inertia().array()).matrix();
    sys.a.block(n, 2 * n, n, 1) = s.cwiseProduct(noise.amplitude);
    sys.a(2 * n, 2 * n) = -1.0 / noise.tau;
    sys.b = Eigen::VectorXd::Zero(dim);
    sys.b(2 * n) = sys.eta0;

    if (eps > 0.0) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(sys.a, false);
        if (es.info() != Eigen::Success) {
            throw Error(ErrorKind::EigensolverFailure, "eigensolver failed on augmented matrix");
        }
        const double max_re = es.eigenvalues().real().maxCoeff();
        if (!(max_re < 0.0)) {
            throw Error(ErrorKind::NotHurwitz, "augmented matrix is not Hurwitz (max Re = " +
                                                   std::to_string(max_re) + ")");
        }
    }
    return sys;
}

Eigen::MatrixXd q_weighted(const SwingModel& model, const PerformanceSpec& perf) {
    const Index n = model.size();
    const Eigen::VectorXd s = inv_sqrt(model.inertia());
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(2 * n + 1, 2 * n + 1);
    q.block(0, 0, n, n) = s.asDiagonal() * perf.q11 * s.asDiagonal();
    q.block(n, n, n, n) = s.asDiagonal() * perf.q22 * s.asDiagonal();
    return q;
}

std::vector<NoiseSpec> coherent_channels(const NoiseSpec& noise) {
    if (noise.mode == NoiseMode::coherent) {
        return {noise};
    }
    std::vector<NoiseSpec> out;
    for (Index i = 0; i < noise.amplitude.size(); ++i) {
        if (noise.amplitude(i) != 0.0) {
            out.push_back(NoiseSpec::single_node(noise.amplitude.size(), i, noise.amplitude(i),
                                                 noise.tau));
        }
    }
    return out;
}

}  // namespace gridnoise
