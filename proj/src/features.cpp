// Copyright 2026 The qmlp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmlp/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qmlp/errors.hpp"

namespace qmlp::features {

namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kJacobiOffTol = 1e-12;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kNormFloor = 1e-12;

double off_diagonal_norm(const Matrix &a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            acc += 2.0 * a(i, j) * a(i, j);
        }
    }
    return std::sqrt(acc);
}

/// Largest-magnitude entry of each eigenvector made non-negative, ties broken
/// by lowest index.
void apply_sign_convention(Matrix &v) {
    for (std::size_t j = 0; j < v.cols(); ++j) {
        std::size_t pivot = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < v.rows(); ++i) {
            const double mag = std::abs(v(i, j));
            if (mag > best) {
                best = mag;
                pivot = i;
            }
        }
        if (v(pivot, j) < 0.0) {
            for (std::size_t i = 0; i < v.rows(); ++i) {
                v(i, j) = -v(i, j);
            }
        }
    }
}

} // namespace

std::size_t expanded_dim(std::size_t input_dim) {
    return 2 * input_dim + input_dim * (input_dim - 1) / 2;
}

std::vector<double> expand_features(std::span<const double> x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            throw InvalidInput("expand_features: non-finite entry at index " +
                               std::to_string(i));
        }
    }
    const std::size_t d = x.size();
    std::vector<double> z;
    z.reserve(expanded_dim(d));
    for (std::size_t i = 0; i < d; ++i) {
        z.push_back(x[i]);
    }
    for (std::size_t i = 0; i < d; ++i) {
        z.push_back(x[i] * x[i]);
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            z.push_back(x[i] * x[j]);
        }
    }
    return z;
}

Matrix build_spd(std::span<const double> z, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw InvalidParameter("build_spd: epsilon must be positive, got " +
                               std::to_string(epsilon));
    }
    const std::size_t m = z.size();
    Matrix out(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            out(i, j) = z[i] * z[j];
        }
        out(i, i) += epsilon;
    }
    return out;
}

EigenBasis eigendecompose(const Matrix &z) {
    const std::size_t m = z.rows();
    if (z.cols() != m) {
        throw InvalidInput("eigendecompose: matrix is " +
                           std::to_string(m) + "x" + std::to_string(z.cols()) +
                           ", expected square");
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            if (std::abs(z(i, j) - z(j, i)) > kSymmetryTol) {
                throw InvalidInput(
                    "eigendecompose: input not symmetric at (" +
                    std::to_string(i) + "," + std::to_string(j) +
                    "), asymmetry " + std::to_string(z(i, j) - z(j, i)));
            }
        }
    }

    Matrix a = z;
    Matrix v = Matrix::identity(m);

    int sweep = 0;
    bool converged = (off_diagonal_norm(a) < kJacobiOffTol);
    while (!converged && sweep < kJacobiMaxSweeps) {
        ++sweep;
        // Fixed row-major sweep over the upper triangle keeps the rotation
        // order (and therefore the result bits) identical on every platform.
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) /
                    (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                const double app = a(p, p);
                const double aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    if (i == p || i == q) {
                        continue;
                    }
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(p, i) = a(i, p);
                    a(i, q) = s * aip + c * aiq;
                    a(q, i) = a(i, q);
                }
                for (std::size_t i = 0; i < m; ++i) {
                    const double vip = v(i, p);
                    const double viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
        converged = (off_diagonal_norm(a) < kJacobiOffTol);
    }
    if (!converged) {
        throw NumericalError(
            "eigendecompose: Jacobi sweep limit reached without convergence "
            "after " +
            std::to_string(sweep) + " sweeps (off-diagonal norm " +
            std::to_string(off_diagonal_norm(a)) + ")");
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) {
                         return a(i, i) > a(j, j);
                     });

    EigenBasis basis;
    basis.eigenvalues.resize(m);
    basis.eigenvectors = Matrix(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        basis.eigenvalues[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < m; ++i) {
            basis.eigenvectors(i, j) = v(i, order[j]);
        }
    }
    apply_sign_convention(basis.eigenvectors);
    return basis;
}

std::optional<Matrix> fit_projection(const Matrix &expanded, std::size_t k,
                                     double epsilon, ProjectionMode mode) {
    const std::size_t m = expanded.cols();
    if (k < 1 || k > m) {
        throw InvalidParameter("fit_projection: k = " + std::to_string(k) +
                               " out of range [1, " + std::to_string(m) + "]");
    }
    if (mode == ProjectionMode::PerSample) {
        return std::nullopt;
    }
    if (expanded.rows() == 0) {
        throw InvalidInput("fit_projection: empty dataset in batch mode");
    }

    Matrix mean_outer(m, m);
    for (std::size_t r = 0; r < expanded.rows(); ++r) {
        const auto z = expanded.row(r);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                mean_outer(i, j) += z[i] * z[j];
            }
        }
    }
    const double inv_n = 1.0 / static_cast<double>(expanded.rows());
    for (double &entry : mean_outer.storage()) {
        entry *= inv_n;
    }
    for (std::size_t i = 0; i < m; ++i) {
        mean_outer(i, i) += epsilon;
    }

    const EigenBasis basis = eigendecompose(mean_outer);
    Matrix top(m, k);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            top(i, j) = basis.eigenvectors(i, j);
        }
    }
    return top;
}

std::vector<double> project(std::span<const double> z, const Matrix &basis) {
    if (z.size() != basis.rows()) {
        throw InvalidInput("project: expanded vector length " +
                           std::to_string(z.size()) +
                           " does not match basis rows " +
                           std::to_string(basis.rows()));
    }
    return transpose_matvec(basis, z);
}

std::vector<double> normalize_state(std::span<const double> projected) {
    double norm_sq = 0.0;
    for (double v : projected) {
        norm_sq += v * v;
    }
    const double norm = std::sqrt(norm_sq);
    if (!(norm > kNormFloor)) {
        throw DegenerateStateError(
            "normalize_state: projection norm " + std::to_string(norm) +
            " is too small to encode");
    }
    std::vector<double> out(projected.begin(), projected.end());
    for (double &v : out) {
        v /= norm;
    }
    return out;
}

SpdPreprocessor::SpdPreprocessor(std::size_t k, double epsilon,
                                 ProjectionMode mode)
    : k_(k), epsilon_(epsilon), mode_(mode) {
    if (k_ < 1) {
        throw InvalidParameter("SpdPreprocessor: k must be at least 1");
    }
    if (!(epsilon_ > 0.0)) {
        throw InvalidParameter("SpdPreprocessor: epsilon must be positive");
    }
}

void SpdPreprocessor::fit(const Matrix &raw_inputs) {
    if (mode_ == ProjectionMode::PerSample) {
        return;
    }
    if (raw_inputs.rows() == 0) {
        throw InvalidInput("SpdPreprocessor::fit: empty dataset");
    }
    const std::size_t m = expanded_dim(raw_inputs.cols());
    Matrix expanded(raw_inputs.rows(), m);
    for (std::size_t r = 0; r < raw_inputs.rows(); ++r) {
        const auto z = expand_features(raw_inputs.row(r));
        std::copy(z.begin(), z.end(), expanded.row(r).begin());
    }
    basis_ = fit_projection(expanded, k_, epsilon_, mode_);
}

std::vector<double> SpdPreprocessor::transform(std::span<const double> x) const {
    const auto z = expand_features(x);
    if (mode_ == ProjectionMode::Batch) {
        if (!basis_) {
            throw InvalidParameter(
                "SpdPreprocessor::transform: batch mode used before fit");
        }
        return normalize_state(project(z, *basis_));
    }
    const Matrix spd = build_spd(z, epsilon_);
    const EigenBasis eig = eigendecompose(spd);
    if (k_ > eig.eigenvectors.cols()) {
        throw InvalidParameter("SpdPreprocessor::transform: k = " +
                               std::to_string(k_) + " exceeds expanded dim " +
                               std::to_string(eig.eigenvectors.cols()));
    }
    Matrix top(eig.eigenvectors.rows(), k_);
    for (std::size_t j = 0; j < k_; ++j) {
        for (std::size_t i = 0; i < eig.eigenvectors.rows(); ++i) {
            top(i, j) = eig.eigenvectors(i, j);
        }
    }
    return normalize_state(project(z, top));
}

} // namespace qmlp::features
