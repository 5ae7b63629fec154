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

/**
 * @file
 * SPD-manifold feature pipeline: degree-2 polynomial expansion, outer-product
 * SPD matrix construction, symmetric eigendecomposition, top-k projection and
 * unit-norm state preparation.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qmlp/matrix.hpp"

namespace qmlp::features {

inline constexpr std::size_t kDefaultInputDim = 7;
inline constexpr std::size_t kDefaultProjectionDim = 7;
inline constexpr double kDefaultEpsilon = 1e-6;

/// Expanded length m = 2d + d(d-1)/2 (originals, squares, i<j interactions;
/// no constant term).
std::size_t expanded_dim(std::size_t input_dim);

/// Degree-2 polynomial expansion of x in the fixed ordering
/// x1..xd, x1^2..xd^2, then x_i*x_j for i<j lexicographically.
/// Throws InvalidInput on non-finite entries.
std::vector<double> expand_features(std::span<const double> x);

/// Z = z z^T + epsilon I. Symmetric positive definite by construction with
/// spectrum {|z|^2 + epsilon, epsilon (m-1 times)}.
/// Throws InvalidParameter if epsilon <= 0.
Matrix build_spd(std::span<const double> z, double epsilon);

/// Spectral decomposition Z = V diag(lambda) V^T with eigenvalues sorted
/// descending and a fixed sign convention (largest-magnitude entry of each
/// eigenvector non-negative, ties broken by lowest index), so the
/// decomposition is a deterministic function of Z.
struct EigenBasis {
    std::vector<double> eigenvalues; // descending
    Matrix eigenvectors;             // column j pairs with eigenvalues[j]
};

/// Cyclic Jacobi eigensolver for symmetric matrices. Fixed row-major sweep
/// over the upper triangle; converged when the off-diagonal Frobenius norm
/// drops below 1e-12; at most 100 sweeps.
/// Throws InvalidInput if max |Z_ij - Z_ji| > 1e-10, NumericalError (with the
/// sweep count) on non-convergence.
EigenBasis eigendecompose(const Matrix &z);

enum class ProjectionMode { PerSample, Batch };

/// Batch mode: eigendecompose mean_i(z_i z_i^T) + epsilon I over the rows of
/// `expanded` and return the m x k matrix of top-k eigenvectors. Per-sample
/// mode has no shared basis and returns nullopt (each sample is projected
/// onto the top-k eigenvectors of its own outer-product matrix).
std::optional<Matrix> fit_projection(const Matrix &expanded, std::size_t k,
                                     double epsilon, ProjectionMode mode);

/// x_proj[j] = <column j of basis, z>.
std::vector<double> project(std::span<const double> z, const Matrix &basis);

/// x / |x|_2. Throws DegenerateStateError when |x|_2 <= 1e-12 (the sample
/// cannot be encoded as rotation angles).
std::vector<double> normalize_state(std::span<const double> projected);

/// End-to-end pipeline from a raw feature vector to the unit-norm k-vector
/// fed to the quantum circuit. Batch mode must be fit before transform.
class SpdPreprocessor {
  public:
    SpdPreprocessor(std::size_t k = kDefaultProjectionDim,
                    double epsilon = kDefaultEpsilon,
                    ProjectionMode mode = ProjectionMode::Batch);

    /// Fits the shared projection basis from raw training inputs (rows).
    /// No-op in per-sample mode.
    void fit(const Matrix &raw_inputs);

    /// expand -> project -> normalize for one raw sample.
    std::vector<double> transform(std::span<const double> x) const;

    std::size_t k() const { return k_; }
    double epsilon() const { return epsilon_; }
    ProjectionMode mode() const { return mode_; }
    const std::optional<Matrix> &basis() const { return basis_; }
    void set_basis(Matrix basis) { basis_ = std::move(basis); }

  private:
    std::size_t k_;
    double epsilon_;
    ProjectionMode mode_;
    std::optional<Matrix> basis_;
};

} // namespace qmlp::features
