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
 * The three hybrid regressor architectures: dense classical stacks composed
 * with one quantum layer (the fixed three-block ansatz), exact end-to-end
 * gradients, and the regression metrics.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmlp/features.hpp"
#include "qmlp/matrix.hpp"
#include "qmlp/qsim.hpp"

namespace qmlp::model {

enum class Activation { Relu, Identity };

struct DenseLayer {
    Matrix weights;           // out x in
    std::vector<double> bias; // out
    Activation activation = Activation::Relu;

    std::size_t in_dim() const { return weights.cols(); }
    std::size_t out_dim() const { return weights.rows(); }
    std::vector<double> forward(std::span<const double> x) const;
};

enum class Architecture { ClassicalQuantum, QuantumClassical, SpdEnhanced };

std::string to_string(Architecture arch);
/// Accepts "classical-quantum", "quantum-classical", "spd-enhanced".
/// Throws InvalidParameter otherwise, listing the valid names.
Architecture architecture_from_string(const std::string &name);

struct ModelConfig {
    Architecture architecture = Architecture::SpdEnhanced;
    std::size_t input_dim = features::kDefaultInputDim; // d
    std::size_t output_dim = 1017;                      // target width
    std::size_t num_qubits = 7;                         // n; also k for SPD
    std::size_t entangler_range = 1;
    /// Hidden widths of the dense stack ahead of the quantum layer
    /// (classical-quantum only).
    std::vector<std::size_t> pre_hidden = {64, 32};
    /// Hidden widths of the dense stack after the quantum layer
    /// (quantum-classical and spd-enhanced; classical-quantum maps the
    /// quantum outputs straight to the target width).
    std::vector<std::size_t> post_hidden = {64, 128, 256, 512};
    double spd_epsilon = features::kDefaultEpsilon;
    features::ProjectionMode projection_mode = features::ProjectionMode::Batch;
    qsim::JacobianMethod jacobian_method = qsim::JacobianMethod::Adjoint;

    void validate() const;
};

/// Per-sample backward result: the sample's MSE loss and d loss / d parameter
/// in the canonical flat order (see HybridModel::parameters).
struct SampleGradient {
    double loss = 0.0;
    std::vector<double> gradients;
};

/// One of the three hybrid architectures, assembled from the config:
///   classical-quantum : dense stack -> quantum layer -> one dense layer
///   quantum-classical : quantum layer -> dense stack
///   spd-enhanced      : SPD preprocessing -> quantum layer -> dense stack
class HybridModel {
  public:
    /// All parameters zero; use initialized() for training starts.
    explicit HybridModel(ModelConfig config);

    /// Glorot-uniform dense weights, circuit weights uniform in [0, 2*pi),
    /// drawn deterministically from the seed.
    static HybridModel initialized(ModelConfig config, std::uint64_t seed);

    const ModelConfig &config() const { return config_; }

    /// Fits the SPD projection basis on raw training inputs (rows).
    /// Only meaningful for the spd-enhanced architecture.
    void fit_preprocessor(const Matrix &train_inputs);

    const features::SpdPreprocessor *preprocessor() const {
        return preprocessor_ ? &*preprocessor_ : nullptr;
    }
    features::SpdPreprocessor *preprocessor() {
        return preprocessor_ ? &*preprocessor_ : nullptr;
    }

    std::vector<double> forward(std::span<const double> x) const;

    /// Exact gradient of the per-sample MSE by backpropagation; the quantum
    /// layer contributes its circuit Jacobian (weights and, for the
    /// classical-quantum architecture, input angles so gradients reach the
    /// upstream dense layers).
    SampleGradient backward(std::span<const double> x,
                            std::span<const double> target) const;

    /// Canonical flat parameter order: pre-quantum dense layers (weights
    /// row-major then bias, layer by layer), the three circuit blocks
    /// (row-major), post-quantum dense layers likewise.
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> flat);
    std::size_t parameter_count() const;

    const std::vector<DenseLayer> &pre_layers() const { return pre_layers_; }
    const std::vector<DenseLayer> &post_layers() const { return post_layers_; }
    const qsim::CircuitSpec &circuit() const { return circuit_; }

  private:
    struct Trace;
    std::vector<double> forward_traced(std::span<const double> x,
                                       Trace *trace) const;

    ModelConfig config_;
    std::vector<DenseLayer> pre_layers_;
    qsim::CircuitSpec circuit_;
    std::vector<DenseLayer> post_layers_;
    std::optional<features::SpdPreprocessor> preprocessor_;
};

/// Mean over all samples and output components of the squared error.
double mse(const Matrix &predictions, const Matrix &targets);
double mse(std::span<const double> prediction, std::span<const double> target);

/// Unweighted mean over output components of 1 - SS_res/SS_tot; components
/// with zero target variance are excluded. Throws InvalidInput for fewer
/// than 2 samples, NumericalError when every component is degenerate.
double r2_score(const Matrix &predictions, const Matrix &targets);

} // namespace qmlp::model
