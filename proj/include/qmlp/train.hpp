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
 * Deterministic training loop (Adam over the flat parameter vector),
 * evaluation, the three-architecture comparison, and checkpoint I/O.
 */

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qmlp/data.hpp"
#include "qmlp/errors.hpp"
#include "qmlp/model.hpp"

namespace qmlp::train {

enum class MetricUnits { Standardized, Original };

std::string to_string(MetricUnits units);

struct TrainConfig {
    model::ModelConfig model;
    std::size_t epochs = 200;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 1;
    double train_fraction = 0.8;
    /// Min-max scale inputs and standardize targets, fit on the train split.
    bool standardize = true;
    MetricUnits report_units = MetricUnits::Standardized;

    void validate() const;
};

/// Everything the run produced. Wall-clock time is kept in memory for
/// humans but deliberately left out of both serialized forms so reports from
/// identically-seeded runs are bit-identical.
struct TrainReport {
    std::string architecture;
    std::vector<double> epoch_train_mse;
    double final_test_mse = 0.0;
    double final_test_r2 = 0.0;
    double wall_clock_seconds = 0.0;
    std::string units;
    std::uint64_t seed = 0;
    std::size_t epochs_completed = 0;
    std::string status = "ok"; // or "diverged at epoch N"
    // Config echo.
    std::size_t n_train = 0, n_test = 0;
    std::size_t input_dim = 0, output_dim = 0, num_qubits = 0;
    std::size_t batch_size = 0;
    double learning_rate = 0.0;

    /// Flat key=value block; timing included only when asked for.
    std::string to_text(bool include_timing) const;
    /// Machine-readable JSON, deterministic byte-for-byte.
    std::string to_json() const;
};

/// Raised when the train MSE goes non-finite; carries the partial report so
/// callers can still persist it.
class DivergenceError : public NumericalError {
  public:
    DivergenceError(std::size_t epoch, TrainReport partial)
        : NumericalError("training diverged: non-finite train MSE at epoch " +
                         std::to_string(epoch)),
          epoch_(epoch), partial_(std::move(partial)) {}

    std::size_t epoch() const { return epoch_; }
    const TrainReport &partial_report() const { return partial_; }

  private:
    std::size_t epoch_;
    TrainReport partial_;
};

struct TrainResult {
    model::HybridModel model;
    data::Scaler scaler;
    TrainReport report;
};

/// Splits, scales, initializes and optimizes. Fully deterministic given
/// (config, dataset).
TrainResult train(const TrainConfig &config, const data::Dataset &dataset);

/// MSE and R2 of the model on a dataset in raw units; inputs are scaled with
/// the given scaler before the forward pass, and metrics are computed on
/// standardized or original targets depending on `units`.
std::pair<double, double> evaluate(const model::HybridModel &model,
                                   const data::Scaler &scaler,
                                   const data::Dataset &dataset,
                                   MetricUnits units);

/// Trains all three architectures under the same budget and seed.
std::array<TrainResult, 3> compare_architectures(const TrainConfig &base,
                                                 const data::Dataset &dataset);

/// Adam with bias correction over a flat parameter vector.
class AdamOptimizer {
  public:
    AdamOptimizer(std::size_t n_params, double learning_rate, double beta1,
                  double beta2, double epsilon);

    void step(std::span<double> params, std::span<const double> grads);

  private:
    double lr_, beta1_, beta2_, eps_;
    std::uint64_t t_ = 0;
    std::vector<double> m_, v_;
};

// --- checkpoint file (binary, little-endian, self-describing) ---

struct Checkpoint {
    model::HybridModel model;
    data::Scaler scaler;
};

/// Single-file binary checkpoint: magic string, format version, model config,
/// then every parameter array with its declared shape as little-endian
/// 64-bit floats. A round trip reproduces forward outputs bit-identically.
void save_checkpoint(const model::HybridModel &model,
                     const data::Scaler &scaler, const std::string &path);
Checkpoint load_checkpoint(const std::string &path);

} // namespace qmlp::train
