// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridnoise/netgraph.hpp"

#include "gridnoise/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <utility>

namespace gridnoise {

namespace {

constexpr double kZeroModeRelTol = 1e-9;

Index find_root(std::vector<Index>& parent, Index x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

void check_index(const LaplacianSpectrum& spec, Index i) {
    if (i < 0 || i >= spec.size()) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "node index " + std::to_string(i) + " out of range [0, " +
                        std::to_string(spec.size()) + ")");
    }
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!current.empty()) {
                fields.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) {
        fields.push_back(std::move(current));
    }
    return fields;
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

Network::Network(Index node_count, std::vector<Edge> edges) : n_(node_count), edges_(std::move(edges)) {
    if (n_ <= 0) {
        throw Error(ErrorKind::InvalidArgument, "network must have at least one node");
    }
    std::set<std::pair<Index, Index>> seen;
    std::vector<Index> parent(static_cast<std::size_t>(n_));
    std::iota(parent.begin(), parent.end(), Index{0});
    Index components = n_;

    for (const auto& e : edges_) {
        if (e.i < 0 || e.i >= n_ || e.j < 0 || e.j >= n_) {
            throw Error(ErrorKind::IndexOutOfRange, "edge endpoint out of range");
        }
        if (e.i == e.j) {
            throw Error(ErrorKind::SelfLoop, "self-loop at node " + std::to_string(e.i));
        }
        if (!(e.susceptance > 0.0) || !std::isfinite(e.susceptance)) {
            throw Error(ErrorKind::NonPositiveWeight, "edge (" + std::to_string(e.i) + ", " +
                                                          std::to_string(e.j) +
                                                          ") has non-positive weight");
        }
        const auto key = std::minmax(e.i, e.j);
        if (!seen.emplace(key.first, key.second).second) {
            throw Error(ErrorKind::DuplicateEdge, "duplicate edge (" + std::to_string(key.first) +
                                                      ", " + std::to_string(key.second) + ")");
        }
        const Index ri = find_root(parent, e.i);
        const Index rj = find_root(parent, e.j);
        if (ri != rj) {
            parent[ri] = rj;
            --components;
        }
    }
    if (components != 1) {
        throw Error(ErrorKind::Disconnected,
                    "network is disconnected (" + std::to_string(components) + " components)");
    }
}

Network load_network(std::string_view text) {
    std::vector<Edge> edges;
    Index max_id = -1;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || line[first] == '#') {
            if (end == text.size()) break;
            continue;
        }
        const auto fields = split_fields(line);
        Edge e;
        long long i = 0;
        long long j = 0;
        if (fields.size() != 3 || !parse_number(fields[0], i) || !parse_number(fields[1], j) ||
            !parse_number(fields[2], e.susceptance)) {
            throw Error(ErrorKind::ParseError,
                        "line " + std::to_string(line_no) + ": expected \"i j b\"");
        }
        if (i < 0 || j < 0) {
            throw Error(ErrorKind::ParseError,
                        "line " + std::to_string(line_no) + ": negative node id");
        }
        e.i = static_cast<Index>(i);
        e.j = static_cast<Index>(j);
        max_id = std::max({max_id, e.i, e.j});
        edges.push_back(e);
        if (end == text.size()) break;
    }
    if (edges.empty()) {
        throw Error(ErrorKind::ParseError, "edge list is empty");
    }
    return Network(max_id + 1, std::move(edges));
}

Network load_network_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidArgument, "cannot open network file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_network(buf.str());
}

Eigen::MatrixXd laplacian(const Network& net) {
    const Index n = net.size();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : net.edges()) {
        L(e.i, e.j) = -e.susceptance;
        L(e.j, e.i) = -e.susceptance;
    }
    for (Index i = 0; i < n; ++i) {
        double off = 0.0;
        for (Index j = 0; j < n; ++j) {
            if (j != i) off += L(i, j);
        }
        L(i, i) = -off;
    }
    return L;
}

bool LaplacianSpectrum::has_zero_mode() const {
    if (values.size() == 0) return false;
    const double scale = values.cwiseAbs().maxCoeff();
    return std::abs(values(0)) <= kZeroModeRelTol * std::max(scale, 1e-300);
}

LaplacianSpectrum spectrum(const Eigen::MatrixXd& symmetric) {
    if (symmetric.rows() != symmetric.cols()) {
        throw Error(ErrorKind::InvalidArgument, "spectrum: matrix is not square");
    }
    const double scale = std::max(1.0, symmetric.cwiseAbs().maxCoeff());
    if ((symmetric - symmetric.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw Error(ErrorKind::InvalidArgument, "spectrum: matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::EigensolverFailure, "symmetric eigensolver did not converge");
    }
    LaplacianSpectrum out{solver.eigenvalues(), solver.eigenvectors()};
    for (Index k = 0; k < out.vectors.cols(); ++k) {
        auto col = out.vectors.col(k);
        const double peak = col.cwiseAbs().maxCoeff();
        // first entry within rounding of the peak decides, so exact ties are stable
        for (Index r = 0; r < col.size(); ++r) {
            if (std::abs(col(r)) >= peak * (1.0 - 1e-12)) {
                if (col(r) < 0.0) col = -col;
                break;
            }
        }
    }
    return out;
}

double resistance_distance(const LaplacianSpectrum& spec, Index i, Index j) {
    check_index(spec, i);
    check_index(spec, j);
    if (i == j) return 0.0;
    double sum = 0.0;
    for (Index l = 1; l < spec.size(); ++l) {
        const double diff = spec.vectors(i, l) - spec.vectors(j, l);
        sum += diff * diff / spec.values(l);
    }
    return sum;
}

double inverse_closeness(const LaplacianSpectrum& spec, Index alpha) {
    check_index(spec, alpha);
    const double n = static_cast<double>(spec.size());
    double local = 0.0;
    double global = 0.0;
    for (Index l = 1; l < spec.size(); ++l) {
        const double u = spec.vectors(alpha, l);
        local += u * u / spec.values(l);
        global += 1.0 / spec.values(l);
    }
    return local + global / n;
}

double inverse_closeness_direct(const LaplacianSpectrum& spec, Index alpha) {
    check_index(spec, alpha);
    double sum = 0.0;
    for (Index j = 0; j < spec.size(); ++j) {
        sum += resistance_distance(spec, alpha, j);
    }
    return sum / static_cast<double>(spec.size());
}

double closeness_centrality(const LaplacianSpectrum& spec, Index alpha) {
    return 1.0 / inverse_closeness(spec, alpha);
}

double kirchhoff_index(const LaplacianSpectrum& spec) {
    double sum = 0.0;
    for (Index l = 1; l < spec.size(); ++l) {
        sum += 1.0 / spec.values(l);
    }
    return static_cast<double>(spec.size()) * sum;
}

double closeness_bracket(const LaplacianSpectrum& spec, Index alpha) {
    const double n = static_cast<double>(spec.size());
    return inverse_closeness(spec, alpha) - kirchhoff_index(spec) / (n * n);
}

}  // namespace gridnoise
