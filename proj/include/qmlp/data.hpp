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
 * Synthetic surrogate datasets, CSV persistence, seeded splits and scaling.
 */

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qmlp/matrix.hpp"

namespace qmlp::data {

inline constexpr const char *kSyntheticGeneratorVersion = "synthetic-v1";

struct Dataset {
    Matrix inputs;  // N x d
    Matrix targets; // N x M
    std::uint64_t seed = 0;
    std::string generator;

    std::size_t size() const { return inputs.rows(); }
    std::size_t input_dim() const { return inputs.cols(); }
    std::size_t output_dim() const { return targets.cols(); }
};

/// Smooth nonlinear target map with interaction structure:
///   y_j(x) = sum_i A_ji sin(w_ji x_i + p_ji) + sum_{i<l} B_jil x_i x_l
/// Coefficients are drawn once from the seed; the public fields double as a
/// test hook (zeroing them gives the zero map) and feed the gradient-bound
/// check.
struct SyntheticMap {
    Matrix amplitude;   // M x d
    Matrix frequency;   // M x d
    Matrix phase;       // M x d
    Matrix interaction; // M x d(d-1)/2, pairs (i,l), i<l, lexicographic

    static SyntheticMap sample(std::uint64_t seed, std::size_t input_dim,
                               std::size_t output_dim);
    std::vector<double> evaluate(std::span<const double> x) const;
};

/// Inputs uniform on [0,1]^d, targets from SyntheticMap::sample(seed, ...).
Dataset generate_synthetic(std::uint64_t seed, std::size_t n_samples,
                           std::size_t input_dim = 7,
                           std::size_t output_dim = 32);

/// CSV with header x1,..,xd,y1,..,yM; one sample per line; 17-significant-
/// digit decimal text so a round trip reproduces every double exactly.
void save_csv(const Dataset &dataset, const std::string &path);
Dataset load_csv(const std::string &path);

/// Seeded shuffle, then split; train gets floor(N * fraction) samples.
std::pair<Dataset, Dataset> split(const Dataset &dataset,
                                  double train_fraction, std::uint64_t seed);

/// Min-max scaling for inputs, standardization for targets. Columns with no
/// spread are passed through and flagged.
struct Scaler {
    std::vector<double> input_min, input_max;
    std::vector<double> target_mean, target_std;
    std::vector<std::uint8_t> input_degenerate, target_degenerate;

    /// Identity pass-through for the given dims (used when scaling is off).
    static Scaler identity(std::size_t input_dim, std::size_t output_dim);

    Matrix scale_inputs(const Matrix &raw) const;
    Matrix scale_targets(const Matrix &raw) const;
    Matrix unscale_targets(const Matrix &scaled) const;
};

/// Fit on the training split only.
Scaler fit_scaler(const Dataset &train);

} // namespace qmlp::data
