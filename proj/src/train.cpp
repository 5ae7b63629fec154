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

#include "qmlp/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "qmlp/rng.hpp"

namespace qmlp::train {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Matrix predict_all(const model::HybridModel &model, const Matrix &inputs,
                   std::size_t output_dim) {
    Matrix out(inputs.rows(), output_dim);
    for (std::size_t r = 0; r < inputs.rows(); ++r) {
        const auto y = model.forward(inputs.row(r));
        std::copy(y.begin(), y.end(), out.row(r).begin());
    }
    return out;
}

} // namespace

std::string to_string(MetricUnits units) {
    return units == MetricUnits::Standardized ? "standardized" : "original";
}

void TrainConfig::validate() const {
    model.validate();
    if (epochs < 1) {
        throw InvalidParameter("TrainConfig: epochs must be at least 1");
    }
    if (batch_size < 1) {
        throw InvalidParameter("TrainConfig: batch size must be at least 1");
    }
    // learning_rate == 0 is allowed (a no-op run is a useful control);
    // negative rates are not.
    if (learning_rate < 0.0 || !std::isfinite(learning_rate)) {
        throw InvalidParameter("TrainConfig: learning rate must be >= 0");
    }
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
        throw InvalidParameter("TrainConfig: train fraction must be in (0,1)");
    }
}

std::string TrainReport::to_text(bool include_timing) const {
    std::ostringstream out;
    out << "architecture=" << architecture << '\n';
    out << "status=" << status << '\n';
    out << "seed=" << seed << '\n';
    out << "epochs_completed=" << epochs_completed << '\n';
    out << "batch_size=" << batch_size << '\n';
    out << "learning_rate=" << format_double(learning_rate) << '\n';
    out << "n_train=" << n_train << '\n';
    out << "n_test=" << n_test << '\n';
    out << "input_dim=" << input_dim << '\n';
    out << "output_dim=" << output_dim << '\n';
    out << "num_qubits=" << num_qubits << '\n';
    out << "metric_units=" << units << '\n';
    out << "final_test_mse=" << format_double(final_test_mse) << '\n';
    out << "final_test_r2=" << format_double(final_test_r2) << '\n';
    for (std::size_t e = 0; e < epoch_train_mse.size(); ++e) {
        out << "epoch_" << (e + 1)
            << "_train_mse=" << format_double(epoch_train_mse[e]) << '\n';
    }
    if (include_timing) {
        out << "wall_clock_seconds=" << format_double(wall_clock_seconds)
            << '\n';
    }
    return out.str();
}

std::string TrainReport::to_json() const {
    std::ostringstream out;
    out << "{\n";
    out << "  \"architecture\": \"" << architecture << "\",\n";
    out << "  \"status\": \"" << status << "\",\n";
    out << "  \"seed\": " << seed << ",\n";
    out << "  \"epochs_completed\": " << epochs_completed << ",\n";
    out << "  \"batch_size\": " << batch_size << ",\n";
    out << "  \"learning_rate\": " << format_double(learning_rate) << ",\n";
    out << "  \"n_train\": " << n_train << ",\n";
    out << "  \"n_test\": " << n_test << ",\n";
    out << "  \"input_dim\": " << input_dim << ",\n";
    out << "  \"output_dim\": " << output_dim << ",\n";
    out << "  \"num_qubits\": " << num_qubits << ",\n";
    out << "  \"metric_units\": \"" << units << "\",\n";
    out << "  \"final_test_mse\": " << format_double(final_test_mse) << ",\n";
    out << "  \"final_test_r2\": " << format_double(final_test_r2) << ",\n";
    out << "  \"epoch_train_mse\": [";
    for (std::size_t e = 0; e < epoch_train_mse.size(); ++e) {
        out << (e ? ", " : "") << format_double(epoch_train_mse[e]);
    }
    out << "]\n}\n";
    return out.str();
}

AdamOptimizer::AdamOptimizer(std::size_t n_params, double learning_rate,
                             double beta1, double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon),
      m_(n_params, 0.0), v_(n_params, 0.0) {}

void AdamOptimizer::step(std::span<double> params,
                         std::span<const double> grads) {
    if (params.size() != m_.size() || grads.size() != m_.size()) {
        throw ShapeError("AdamOptimizer::step: size mismatch");
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grads[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grads[i] * grads[i];
        const double m_hat = m_[i] / bc1;
        const double v_hat = v_[i] / bc2;
        params[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
}

TrainResult train(const TrainConfig &config, const data::Dataset &dataset) {
    config.validate();
    if (dataset.input_dim() != config.model.input_dim) {
        throw ShapeError("train: dataset input dim " +
                         std::to_string(dataset.input_dim()) +
                         " does not match model input dim " +
                         std::to_string(config.model.input_dim));
    }
    if (dataset.output_dim() != config.model.output_dim) {
        throw ShapeError("train: dataset output dim " +
                         std::to_string(dataset.output_dim()) +
                         " does not match model output dim " +
                         std::to_string(config.model.output_dim));
    }

    const auto start = std::chrono::steady_clock::now();

    auto [train_set, test_set] =
        data::split(dataset, config.train_fraction, config.seed);
    const data::Scaler scaler =
        config.standardize
            ? data::fit_scaler(train_set)
            : data::Scaler::identity(dataset.input_dim(),
                                     dataset.output_dim());
    const Matrix x_train = scaler.scale_inputs(train_set.inputs);
    const Matrix y_train = scaler.scale_targets(train_set.targets);

    model::HybridModel net = model::HybridModel::initialized(
        config.model, mix_seed(config.seed, seed_tag::kModelInit));
    net.fit_preprocessor(x_train);

    std::vector<double> params = net.parameters();
    AdamOptimizer adam(params.size(), config.learning_rate, config.beta1,
                       config.beta2, config.adam_epsilon);

    TrainReport report;
    report.architecture = model::to_string(config.model.architecture);
    report.seed = config.seed;
    report.batch_size = config.batch_size;
    report.learning_rate = config.learning_rate;
    report.n_train = train_set.size();
    report.n_test = test_set.size();
    report.input_dim = dataset.input_dim();
    report.output_dim = dataset.output_dim();
    report.num_qubits = config.model.num_qubits;
    report.units = to_string(config.report_units);

    const std::size_t n_train = train_set.size();
    std::vector<std::size_t> order(n_train);
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 shuffle_rng(mix_seed(config.seed, seed_tag::kBatchShuffle));
    std::vector<double> grad_sum(params.size(), 0.0);

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        for (std::size_t i = n_train; i > 1; --i) {
            const std::size_t j = shuffle_rng.next_below(i);
            std::swap(order[i - 1], order[j]);
        }
        double loss_sum = 0.0;
        for (std::size_t begin = 0; begin < n_train;
             begin += config.batch_size) {
            const std::size_t end =
                std::min(begin + config.batch_size, n_train);
            std::fill(grad_sum.begin(), grad_sum.end(), 0.0);
            for (std::size_t i = begin; i < end; ++i) {
                const std::size_t row = order[i];
                const auto sample =
                    net.backward(x_train.row(row), y_train.row(row));
                loss_sum += sample.loss;
                for (std::size_t p = 0; p < grad_sum.size(); ++p) {
                    grad_sum[p] += sample.gradients[p];
                }
            }
            const double inv_batch = 1.0 / static_cast<double>(end - begin);
            for (double &g : grad_sum) {
                g *= inv_batch;
            }
            adam.step(params, grad_sum);
            net.set_parameters(params);
        }
        const double epoch_mse = loss_sum / static_cast<double>(n_train);
        report.epoch_train_mse.push_back(epoch_mse);
        report.epochs_completed = epoch;
        if (!std::isfinite(epoch_mse)) {
            report.status = "diverged at epoch " + std::to_string(epoch);
            report.wall_clock_seconds =
                std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
            throw DivergenceError(epoch, report);
        }
    }

    const auto [test_mse, test_r2] =
        evaluate(net, scaler, test_set, config.report_units);
    report.final_test_mse = test_mse;
    report.final_test_r2 = test_r2;
    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return TrainResult{std::move(net), scaler, std::move(report)};
}

std::pair<double, double> evaluate(const model::HybridModel &model,
                                   const data::Scaler &scaler,
                                   const data::Dataset &dataset,
                                   MetricUnits units) {
    if (dataset.input_dim() != model.config().input_dim ||
        dataset.output_dim() != model.config().output_dim) {
        throw ShapeError("evaluate: dataset dims " +
                         std::to_string(dataset.input_dim()) + "->" +
                         std::to_string(dataset.output_dim()) +
                         " do not match model dims " +
                         std::to_string(model.config().input_dim) + "->" +
                         std::to_string(model.config().output_dim));
    }
    const Matrix x = scaler.scale_inputs(dataset.inputs);
    Matrix predictions = predict_all(model, x, dataset.output_dim());
    if (units == MetricUnits::Standardized) {
        const Matrix y = scaler.scale_targets(dataset.targets);
        return {model::mse(predictions, y),
                model::r2_score(predictions, y)};
    }
    predictions = scaler.unscale_targets(predictions);
    return {model::mse(predictions, dataset.targets),
            model::r2_score(predictions, dataset.targets)};
}

std::array<TrainResult, 3> compare_architectures(const TrainConfig &base,
                                                 const data::Dataset &dataset) {
    auto run = [&](model::Architecture arch) {
        TrainConfig config = base;
        config.model.architecture = arch;
        // The quantum-classical architecture embeds the raw inputs directly,
        // so its qubit count is pinned to the input width.
        config.model.num_qubits =
            (arch == model::Architecture::QuantumClassical)
                ? base.model.input_dim
                : base.model.num_qubits;
        return train(config, dataset);
    };
    return {run(model::Architecture::ClassicalQuantum),
            run(model::Architecture::QuantumClassical),
            run(model::Architecture::SpdEnhanced)};
}

} // namespace qmlp::train
