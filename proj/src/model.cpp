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

#include "qmlp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmlp/errors.hpp"
#include "qmlp/rng.hpp"

namespace qmlp::model {

namespace {

std::vector<double> activate(std::vector<double> z, Activation activation) {
    if (activation == Activation::Relu) {
        for (double &v : z) {
            v = std::max(v, 0.0);
        }
    }
    return z;
}

/// Widths of every dense layer, in network order, for one architecture.
struct StackPlan {
    std::vector<std::pair<std::size_t, std::size_t>> pre;  // (in, out)
    std::vector<std::pair<std::size_t, std::size_t>> post; // (in, out)
};

StackPlan plan_stacks(const ModelConfig &c) {
    StackPlan plan;
    switch (c.architecture) {
    case Architecture::ClassicalQuantum: {
        std::size_t in = c.input_dim;
        for (std::size_t width : c.pre_hidden) {
            plan.pre.emplace_back(in, width);
            in = width;
        }
        plan.pre.emplace_back(in, c.num_qubits);
        plan.post.emplace_back(c.num_qubits, c.output_dim);
        break;
    }
    case Architecture::QuantumClassical:
    case Architecture::SpdEnhanced: {
        std::size_t in = c.num_qubits;
        for (std::size_t width : c.post_hidden) {
            plan.post.emplace_back(in, width);
            in = width;
        }
        plan.post.emplace_back(in, c.output_dim);
        break;
    }
    }
    return plan;
}

DenseLayer make_layer(std::size_t in, std::size_t out, Activation activation) {
    DenseLayer layer;
    layer.weights = Matrix(out, in);
    layer.bias.assign(out, 0.0);
    layer.activation = activation;
    return layer;
}

} // namespace

std::vector<double> DenseLayer::forward(std::span<const double> x) const {
    auto z = matvec(weights, x);
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] += bias[i];
    }
    return activate(std::move(z), activation);
}

std::string to_string(Architecture arch) {
    switch (arch) {
    case Architecture::ClassicalQuantum:
        return "classical-quantum";
    case Architecture::QuantumClassical:
        return "quantum-classical";
    default:
        return "spd-enhanced";
    }
}

Architecture architecture_from_string(const std::string &name) {
    if (name == "classical-quantum") {
        return Architecture::ClassicalQuantum;
    }
    if (name == "quantum-classical") {
        return Architecture::QuantumClassical;
    }
    if (name == "spd-enhanced") {
        return Architecture::SpdEnhanced;
    }
    throw InvalidParameter(
        "unknown architecture '" + name +
        "'; valid names: classical-quantum, quantum-classical, spd-enhanced");
}

void ModelConfig::validate() const {
    if (input_dim == 0 || output_dim == 0 || num_qubits == 0) {
        throw InvalidParameter("ModelConfig: dimensions must be positive");
    }
    if (num_qubits >= 2 &&
        (entangler_range < 1 || entangler_range > num_qubits - 1)) {
        throw InvalidParameter("ModelConfig: entangler range out of range");
    }
    if (architecture == Architecture::QuantumClassical &&
        num_qubits != input_dim) {
        throw InvalidParameter(
            "ModelConfig: quantum-classical feeds inputs directly into the "
            "embedding, so num_qubits (" +
            std::to_string(num_qubits) + ") must equal input_dim (" +
            std::to_string(input_dim) + ")");
    }
    if (architecture == Architecture::SpdEnhanced &&
        num_qubits > features::expanded_dim(input_dim)) {
        throw InvalidParameter(
            "ModelConfig: projection dim exceeds expanded feature dim");
    }
}

HybridModel::HybridModel(ModelConfig config) : config_(std::move(config)) {
    config_.validate();
    const StackPlan plan = plan_stacks(config_);
    for (std::size_t i = 0; i < plan.pre.size(); ++i) {
        // Hidden layers relu, the layer feeding the embedding identity
        // (angles are trig-periodic, no squashing needed).
        const Activation act = (i + 1 == plan.pre.size()) ? Activation::Identity
                                                          : Activation::Relu;
        pre_layers_.push_back(
            make_layer(plan.pre[i].first, plan.pre[i].second, act));
    }
    circuit_ = qsim::CircuitSpec::zeros(config_.num_qubits,
                                        config_.entangler_range);
    for (std::size_t i = 0; i < plan.post.size(); ++i) {
        const Activation act = (i + 1 == plan.post.size())
                                   ? Activation::Identity
                                   : Activation::Relu;
        post_layers_.push_back(
            make_layer(plan.post[i].first, plan.post[i].second, act));
    }
    if (config_.architecture == Architecture::SpdEnhanced) {
        preprocessor_.emplace(config_.num_qubits, config_.spd_epsilon,
                              config_.projection_mode);
    }
}

HybridModel HybridModel::initialized(ModelConfig config, std::uint64_t seed) {
    HybridModel model(std::move(config));
    SplitMix64 rng(seed);
    auto init_stack = [&rng](std::vector<DenseLayer> &layers) {
        for (DenseLayer &layer : layers) {
            const double bound = std::sqrt(
                6.0 / static_cast<double>(layer.in_dim() + layer.out_dim()));
            for (double &w : layer.weights.storage()) {
                w = rng.uniform(-bound, bound);
            }
            // Biases start at zero.
        }
    };
    init_stack(model.pre_layers_);
    for (Matrix &block : model.circuit_.blocks) {
        for (double &w : block.storage()) {
            w = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
    }
    init_stack(model.post_layers_);
    return model;
}

void HybridModel::fit_preprocessor(const Matrix &train_inputs) {
    if (!preprocessor_) {
        return;
    }
    preprocessor_->fit(train_inputs);
}

struct HybridModel::Trace {
    // Dense layer caches: the layer input and the pre-activation vector.
    std::vector<std::vector<double>> pre_inputs, pre_zs;
    std::vector<std::vector<double>> post_inputs, post_zs;
    std::vector<double> quantum_angles;
    std::vector<double> quantum_outputs;
};

std::vector<double> HybridModel::forward_traced(std::span<const double> x,
                                                Trace *trace) const {
    std::vector<double> current;
    switch (config_.architecture) {
    case Architecture::ClassicalQuantum:
    case Architecture::QuantumClassical:
        if (x.size() != config_.input_dim) {
            throw ShapeError("forward: input length " +
                             std::to_string(x.size()) + ", expected " +
                             std::to_string(config_.input_dim));
        }
        current.assign(x.begin(), x.end());
        break;
    case Architecture::SpdEnhanced:
        if (x.size() != config_.input_dim) {
            throw ShapeError("forward: input length " +
                             std::to_string(x.size()) + ", expected " +
                             std::to_string(config_.input_dim));
        }
        current = preprocessor_->transform(x);
        break;
    }

    for (const DenseLayer &layer : pre_layers_) {
        auto z = matvec(layer.weights, current);
        for (std::size_t i = 0; i < z.size(); ++i) {
            z[i] += layer.bias[i];
        }
        if (trace) {
            trace->pre_inputs.push_back(current);
            trace->pre_zs.push_back(z);
        }
        current = activate(std::move(z), layer.activation);
    }

    if (trace) {
        trace->quantum_angles = current;
    }
    current = qsim::run_circuit(circuit_, current);
    if (trace) {
        trace->quantum_outputs = current;
    }

    for (const DenseLayer &layer : post_layers_) {
        auto z = matvec(layer.weights, current);
        for (std::size_t i = 0; i < z.size(); ++i) {
            z[i] += layer.bias[i];
        }
        if (trace) {
            trace->post_inputs.push_back(current);
            trace->post_zs.push_back(z);
        }
        current = activate(std::move(z), layer.activation);
    }
    return current;
}

std::vector<double> HybridModel::forward(std::span<const double> x) const {
    return forward_traced(x, nullptr);
}

SampleGradient HybridModel::backward(std::span<const double> x,
                                     std::span<const double> target) const {
    Trace trace;
    const std::vector<double> output = forward_traced(x, &trace);
    if (target.size() != output.size()) {
        throw ShapeError("backward: target length " +
                         std::to_string(target.size()) +
                         " does not match output length " +
                         std::to_string(output.size()));
    }

    SampleGradient result;
    result.gradients.assign(parameter_count(), 0.0);

    const double inv_m = 1.0 / static_cast<double>(output.size());
    std::vector<double> upstream(output.size());
    double loss = 0.0;
    for (std::size_t j = 0; j < output.size(); ++j) {
        const double r = output[j] - target[j];
        loss += r * r;
        upstream[j] = 2.0 * r * inv_m;
    }
    result.loss = loss * inv_m;

    // Flat gradient layout mirrors parameters(): pre stack, circuit, post
    // stack. Compute offsets once.
    std::size_t offset = 0;
    std::vector<std::size_t> pre_offsets, post_offsets;
    for (const DenseLayer &layer : pre_layers_) {
        pre_offsets.push_back(offset);
        offset += layer.weights.size() + layer.bias.size();
    }
    const std::size_t circuit_offset = offset;
    offset += circuit_.weight_count();
    for (const DenseLayer &layer : post_layers_) {
        post_offsets.push_back(offset);
        offset += layer.weights.size() + layer.bias.size();
    }

    auto backprop_dense = [&](const std::vector<DenseLayer> &layers,
                              const std::vector<std::vector<double>> &inputs,
                              const std::vector<std::vector<double>> &zs,
                              const std::vector<std::size_t> &offsets,
                              std::vector<double> grad_out) {
        for (std::size_t li = layers.size(); li-- > 0;) {
            const DenseLayer &layer = layers[li];
            std::vector<double> dz = std::move(grad_out);
            if (layer.activation == Activation::Relu) {
                for (std::size_t i = 0; i < dz.size(); ++i) {
                    if (zs[li][i] <= 0.0) {
                        dz[i] = 0.0;
                    }
                }
            }
            double *wgrad = result.gradients.data() + offsets[li];
            double *bgrad = wgrad + layer.weights.size();
            const std::vector<double> &in = inputs[li];
            for (std::size_t r = 0; r < layer.out_dim(); ++r) {
                const double d = dz[r];
                for (std::size_t c = 0; c < layer.in_dim(); ++c) {
                    wgrad[r * layer.in_dim() + c] = d * in[c];
                }
                bgrad[r] = d;
            }
            grad_out = transpose_matvec(layer.weights, dz);
        }
        return grad_out;
    };

    // Post stack -> gradient at the quantum outputs.
    std::vector<double> g = backprop_dense(post_layers_, trace.post_inputs,
                                           trace.post_zs, post_offsets,
                                           std::move(upstream));

    // Quantum layer: circuit weight gradients always; input-angle gradients
    // only when a dense stack sits upstream.
    const bool need_input_grads = !pre_layers_.empty();
    const qsim::CircuitJacobian jac =
        qsim::circuit_jacobian(circuit_, trace.quantum_angles,
                               config_.jacobian_method);
    {
        double *cgrad = result.gradients.data() + circuit_offset;
        for (std::size_t p = 0; p < circuit_.weight_count(); ++p) {
            double acc = 0.0;
            for (std::size_t out = 0; out < g.size(); ++out) {
                acc += jac.weights(out, p) * g[out];
            }
            cgrad[p] = acc;
        }
    }
    if (need_input_grads) {
        std::vector<double> g_angles(config_.num_qubits, 0.0);
        for (std::size_t q = 0; q < config_.num_qubits; ++q) {
            double acc = 0.0;
            for (std::size_t out = 0; out < g.size(); ++out) {
                acc += jac.inputs(out, q) * g[out];
            }
            g_angles[q] = acc;
        }
        backprop_dense(pre_layers_, trace.pre_inputs, trace.pre_zs,
                       pre_offsets, std::move(g_angles));
    }
    return result;
}

std::vector<double> HybridModel::parameters() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    auto append_stack = [&flat](const std::vector<DenseLayer> &layers) {
        for (const DenseLayer &layer : layers) {
            const auto &w = layer.weights.storage();
            flat.insert(flat.end(), w.begin(), w.end());
            flat.insert(flat.end(), layer.bias.begin(), layer.bias.end());
        }
    };
    append_stack(pre_layers_);
    for (const Matrix &block : circuit_.blocks) {
        const auto &w = block.storage();
        flat.insert(flat.end(), w.begin(), w.end());
    }
    append_stack(post_layers_);
    return flat;
}

void HybridModel::set_parameters(std::span<const double> flat) {
    if (flat.size() != parameter_count()) {
        throw ShapeError("set_parameters: got " + std::to_string(flat.size()) +
                         " values, expected " +
                         std::to_string(parameter_count()));
    }
    std::size_t pos = 0;
    auto read_stack = [&flat, &pos](std::vector<DenseLayer> &layers) {
        for (DenseLayer &layer : layers) {
            auto &w = layer.weights.storage();
            std::copy_n(flat.begin() + pos, w.size(), w.begin());
            pos += w.size();
            std::copy_n(flat.begin() + pos, layer.bias.size(),
                        layer.bias.begin());
            pos += layer.bias.size();
        }
    };
    read_stack(pre_layers_);
    for (Matrix &block : circuit_.blocks) {
        auto &w = block.storage();
        std::copy_n(flat.begin() + pos, w.size(), w.begin());
        pos += w.size();
    }
    read_stack(post_layers_);
}

std::size_t HybridModel::parameter_count() const {
    std::size_t count = circuit_.weight_count();
    for (const DenseLayer &layer : pre_layers_) {
        count += layer.weights.size() + layer.bias.size();
    }
    for (const DenseLayer &layer : post_layers_) {
        count += layer.weights.size() + layer.bias.size();
    }
    return count;
}

double mse(std::span<const double> prediction, std::span<const double> target) {
    if (prediction.size() != target.size()) {
        throw ShapeError("mse: prediction length " +
                         std::to_string(prediction.size()) +
                         " vs target length " + std::to_string(target.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < prediction.size(); ++i) {
        const double r = prediction[i] - target[i];
        acc += r * r;
    }
    return acc / static_cast<double>(prediction.size());
}

double mse(const Matrix &predictions, const Matrix &targets) {
    if (predictions.rows() != targets.rows() ||
        predictions.cols() != targets.cols()) {
        throw ShapeError("mse: shape mismatch " +
                         std::to_string(predictions.rows()) + "x" +
                         std::to_string(predictions.cols()) + " vs " +
                         std::to_string(targets.rows()) + "x" +
                         std::to_string(targets.cols()));
    }
    double acc = 0.0;
    const auto &p = predictions.storage();
    const auto &t = targets.storage();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double r = p[i] - t[i];
        acc += r * r;
    }
    return acc / static_cast<double>(p.size());
}

double r2_score(const Matrix &predictions, const Matrix &targets) {
    if (predictions.rows() != targets.rows() ||
        predictions.cols() != targets.cols()) {
        throw ShapeError("r2_score: shape mismatch");
    }
    const std::size_t n = targets.rows();
    if (n < 2) {
        throw InvalidInput("r2_score: need at least 2 samples, got " +
                           std::to_string(n));
    }
    double r2_sum = 0.0;
    std::size_t included = 0;
    for (std::size_t c = 0; c < targets.cols(); ++c) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean += targets(i, c);
        }
        mean /= static_cast<double>(n);
        double ss_res = 0.0;
        double ss_tot = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double res = predictions(i, c) - targets(i, c);
            const double dev = targets(i, c) - mean;
            ss_res += res * res;
            ss_tot += dev * dev;
        }
        if (ss_tot == 0.0) {
            continue; // zero target variance: excluded
        }
        r2_sum += 1.0 - ss_res / ss_tot;
        ++included;
    }
    if (included == 0) {
        throw NumericalError(
            "r2_score undefined: every target component has zero variance");
    }
    return r2_sum / static_cast<double>(included);
}

} // namespace qmlp::model
