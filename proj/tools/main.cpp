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

// qmlp command-line entry point.
//
// Subcommands: gen-data, train, eval, compare, gradcheck.
// Exit codes: 0 success, 1 gradcheck tolerance breach, 2 usage/config error,
// 3 runtime/numeric error, 4 I/O error. Every subcommand is reproducible
// from its flags and seed alone.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmlp/data.hpp"
#include "qmlp/errors.hpp"
#include "qmlp/model.hpp"
#include "qmlp/oracle.hpp"
#include "qmlp/qsim.hpp"
#include "qmlp/train.hpp"

namespace {

using nlohmann::ordered_json;

std::string fmt5(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.5g", v);
    return buf;
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw qmlp::IoError("cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out) {
        throw qmlp::IoError("write failure on '" + path + "'");
    }
}

void ensure_dir(const std::string &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw qmlp::IoError("cannot create directory '" + dir +
                            "': " + ec.message());
    }
}

qmlp::train::MetricUnits parse_units(const std::string &name) {
    if (name == "standardized") {
        return qmlp::train::MetricUnits::Standardized;
    }
    if (name == "original") {
        return qmlp::train::MetricUnits::Original;
    }
    throw qmlp::InvalidParameter("unknown units '" + name +
                                 "'; valid: standardized, original");
}

struct TrainFlags {
    std::string data_path;
    std::string out_dir = ".";
    std::size_t epochs = 200;
    std::size_t batch = 32;
    double lr = 1e-3;
    std::uint64_t seed = 1;
    std::size_t qubits = 7;
    std::size_t entangler_range = 1;
    double spd_epsilon = 1e-6;
    std::string mode = "batch";
    std::string units = "standardized";
    double train_fraction = 0.8;
    bool no_standardize = false;
    std::vector<std::size_t> pre_hidden = {64, 32};
    std::vector<std::size_t> post_hidden = {64, 128, 256, 512};
};

void add_train_flags(CLI::App *cmd, TrainFlags &f) {
    cmd->add_option("--data", f.data_path, "dataset CSV")->required();
    cmd->add_option("--out-dir", f.out_dir, "output directory");
    cmd->add_option("--epochs", f.epochs, "training epochs");
    cmd->add_option("--batch", f.batch, "mini-batch size");
    cmd->add_option("--lr", f.lr, "learning rate");
    cmd->add_option("--seed", f.seed, "run seed");
    cmd->add_option("--qubits", f.qubits, "qubit count (and projection dim)");
    cmd->add_option("--range", f.entangler_range, "CNOT ring range");
    cmd->add_option("--spd-epsilon", f.spd_epsilon, "SPD regularizer");
    cmd->add_option("--mode", f.mode, "projection fit: batch|per-sample");
    cmd->add_option("--units", f.units, "metric units: standardized|original");
    cmd->add_option("--train-fraction", f.train_fraction, "train split size");
    cmd->add_flag("--no-standardize", f.no_standardize,
                  "train on raw inputs/targets");
    cmd->add_option("--pre-hidden", f.pre_hidden,
                    "hidden widths before the quantum layer");
    cmd->add_option("--post-hidden", f.post_hidden,
                    "hidden widths after the quantum layer");
}

qmlp::train::TrainConfig
build_config(const TrainFlags &f, qmlp::model::Architecture arch,
             const qmlp::data::Dataset &dataset, bool qubits_given) {
    qmlp::train::TrainConfig config;
    config.model.architecture = arch;
    config.model.input_dim = dataset.input_dim();
    config.model.output_dim = dataset.output_dim();
    config.model.num_qubits = f.qubits;
    if (arch == qmlp::model::Architecture::QuantumClassical) {
        if (qubits_given && f.qubits != dataset.input_dim()) {
            throw qmlp::InvalidParameter(
                "--qubits " + std::to_string(f.qubits) +
                " conflicts with quantum-classical input width " +
                std::to_string(dataset.input_dim()));
        }
        config.model.num_qubits = dataset.input_dim();
    }
    config.model.entangler_range = f.entangler_range;
    config.model.pre_hidden = f.pre_hidden;
    config.model.post_hidden = f.post_hidden;
    config.model.spd_epsilon = f.spd_epsilon;
    if (f.mode == "batch") {
        config.model.projection_mode = qmlp::features::ProjectionMode::Batch;
    } else if (f.mode == "per-sample") {
        config.model.projection_mode =
            qmlp::features::ProjectionMode::PerSample;
    } else {
        throw qmlp::InvalidParameter("unknown mode '" + f.mode +
                                     "'; valid: batch, per-sample");
    }
    config.epochs = f.epochs;
    config.batch_size = f.batch;
    config.learning_rate = f.lr;
    config.seed = f.seed;
    config.train_fraction = f.train_fraction;
    config.standardize = !f.no_standardize;
    config.report_units = parse_units(f.units);
    return config;
}

int cmd_gen_data(const std::string &out_path, std::uint64_t seed,
                 std::size_t n, std::size_t inputs, std::size_t outputs) {
    const auto dataset = qmlp::data::generate_synthetic(seed, n, inputs,
                                                        outputs);
    qmlp::data::save_csv(dataset, out_path);
    ordered_json meta;
    meta["generator"] = dataset.generator;
    meta["seed"] = seed;
    meta["samples"] = n;
    meta["inputs"] = inputs;
    meta["outputs"] = outputs;
    write_file(out_path + ".meta.json", meta.dump(2) + "\n");
    std::cout << "wrote " << out_path << ": " << n << "x" << inputs
              << " inputs, " << n << "x" << outputs << " targets (seed "
              << seed << ")\n";
    return 0;
}

void write_reports(const qmlp::train::TrainReport &report,
                   const std::string &out_dir, const std::string &stem) {
    write_file(out_dir + "/" + stem + ".txt",
               report.to_text(/*include_timing=*/false));
    write_file(out_dir + "/" + stem + ".json", report.to_json());
}

int cmd_train(const TrainFlags &f, const std::string &arch_name,
              bool qubits_given) {
    const auto arch = qmlp::model::architecture_from_string(arch_name);
    const auto dataset = qmlp::data::load_csv(f.data_path);
    const auto config = build_config(f, arch, dataset, qubits_given);
    ensure_dir(f.out_dir);
    try {
        auto result = qmlp::train::train(config, dataset);
        qmlp::train::save_checkpoint(result.model, result.scaler,
                                     f.out_dir + "/checkpoint.bin");
        write_reports(result.report, f.out_dir, "report");
        std::cout << "trained " << result.report.architecture << ": epochs="
                  << result.report.epochs_completed
                  << " final_train_mse="
                  << fmt5(result.report.epoch_train_mse.back())
                  << " test_mse=" << fmt5(result.report.final_test_mse)
                  << " test_r2=" << fmt5(result.report.final_test_r2) << " ("
                  << fmt5(result.report.wall_clock_seconds) << " s)\n";
        std::cout << "checkpoint: " << f.out_dir << "/checkpoint.bin\n";
        return 0;
    } catch (const qmlp::train::DivergenceError &e) {
        write_reports(e.partial_report(), f.out_dir, "report");
        std::cerr << "error: " << e.what() << " (report written to "
                  << f.out_dir << ")\n";
        return 3;
    }
}

int cmd_eval(const std::string &checkpoint_path, const std::string &data_path,
             const std::string &units_name, const std::string &out_path) {
    const auto checkpoint = qmlp::train::load_checkpoint(checkpoint_path);
    const auto dataset = qmlp::data::load_csv(data_path);
    const auto units = parse_units(units_name);
    const auto [mse, r2] = qmlp::train::evaluate(checkpoint.model,
                                                 checkpoint.scaler, dataset,
                                                 units);
    const std::string line = "MSE=" + fmt5(mse) + " R2=" + fmt5(r2);
    std::cout << line << "\n";
    if (!out_path.empty()) {
        write_file(out_path, line + "\n");
    }
    return 0;
}

int cmd_compare(const TrainFlags &f, bool qubits_given) {
    const auto dataset = qmlp::data::load_csv(f.data_path);
    const auto base = build_config(
        f, qmlp::model::Architecture::SpdEnhanced, dataset, qubits_given);
    ensure_dir(f.out_dir);
    const auto results = qmlp::train::compare_architectures(base, dataset);

    static constexpr const char *kLabels[3] = {
        "Classical-Quantum Hybrid",
        "Quantum-Classical Hybrid",
        "SPD-Enhanced Hybrid",
    };
    // Published reference values for the original (unreleased) bridge FEM
    // dataset; shown for context only.
    static constexpr double kReferenceMse[3] = {0.00096, 0.00047, 0.00031};
    static constexpr double kReferenceR2[3] = {0.96143, 0.98445, 0.98765};

    std::string table;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-26s %-12s %-12s\n", "Model", "MSE",
                  "R2");
    table += buf;
    for (int i = 0; i < 3; ++i) {
        std::snprintf(buf, sizeof(buf), "%-26s %-12s %-12s\n", kLabels[i],
                      fmt5(results[i].report.final_test_mse).c_str(),
                      fmt5(results[i].report.final_test_r2).c_str());
        table += buf;
    }
    table += "\nReference (original bridge FEM dataset, not distributed; "
             "context only):\n";
    for (int i = 0; i < 3; ++i) {
        std::snprintf(buf, sizeof(buf), "%-26s %-12s %-12s\n", kLabels[i],
                      fmt5(kReferenceMse[i]).c_str(),
                      fmt5(kReferenceR2[i]).c_str());
        table += buf;
    }
    std::cout << table;
    write_file(f.out_dir + "/comparison.txt", table);
    for (const auto &result : results) {
        write_reports(result.report, f.out_dir,
                      "report-" + result.report.architecture);
    }
    return 0;
}

int cmd_gradcheck(std::size_t qubits, std::uint64_t seed,
                  std::size_t oracle_circuits, std::size_t gradient_circuits,
                  bool inject_fault) {
    if (qubits < 1 || qubits > 4) {
        throw qmlp::InvalidParameter("gradcheck runs at 1..4 qubits, got " +
                                     std::to_string(qubits));
    }
    constexpr double kOracleTol = 1e-12;
    constexpr double kGradRelTol = 1e-6;
    constexpr double kGradAbsTol = 1e-8;
    constexpr double kFdStep = 1e-5;

    qmlp::SplitMix64 rng(seed);

    // Fast simulator vs the dense-matrix reference.
    double max_abs = 0.0;
    for (std::size_t c = 0; c < oracle_circuits; ++c) {
        const auto spec = qmlp::qsim::CircuitSpec::random(qubits, rng);
        std::vector<double> inputs(qubits);
        for (double &v : inputs) {
            v = rng.uniform(-3.141592653589793, 3.141592653589793);
        }
        const auto fast = qmlp::qsim::run_circuit(spec, inputs);
        const auto reference =
            qmlp::qsim::oracle::dense_matrix_expectations(spec, inputs);
        for (std::size_t q = 0; q < qubits; ++q) {
            max_abs = std::max(max_abs, std::abs(fast[q] - reference[q]));
        }
    }
    const bool oracle_ok = max_abs <= kOracleTol;
    std::printf("oracle check:   circuits=%zu qubits=%zu max_abs_error=%.3g "
                "tol=%.0e -> %s\n",
                oracle_circuits, qubits, max_abs, kOracleTol,
                oracle_ok ? "PASS" : "FAIL");

    // Parameter-shift gradients vs central finite differences.
    double max_rel = 0.0;
    bool grad_ok = true;
    std::size_t bad_param = 0;
    std::size_t bad_circuit = 0;
    bool bad_is_input = false;
    for (std::size_t c = 0; c < gradient_circuits && grad_ok; ++c) {
        const auto spec = qmlp::qsim::CircuitSpec::random(qubits, rng);
        std::vector<double> inputs(qubits);
        for (double &v : inputs) {
            v = rng.uniform(-3.141592653589793, 3.141592653589793);
        }
        auto jac = qmlp::qsim::circuit_jacobian(
            spec, inputs, qmlp::qsim::JacobianMethod::ParameterShift);
        if (inject_fault && c == 0) {
            jac.weights(0, 0) = -jac.weights(0, 0) - 1.0; // test-only hook
        }
        auto check = [&](double analytic, double fd, std::size_t param,
                         bool is_input) {
            const double err = std::abs(analytic - fd);
            const double scale = std::max(std::abs(analytic), std::abs(fd));
            const double rel = scale > 0.0 ? err / scale : 0.0;
            if (scale > 1e-6) {
                max_rel = std::max(max_rel, rel);
            }
            const bool ok = (scale <= 1e-6) ? (err <= kGradAbsTol)
                                            : (rel <= kGradRelTol);
            if (!ok && grad_ok) {
                grad_ok = false;
                bad_param = param;
                bad_circuit = c;
                bad_is_input = is_input;
            }
        };
        for (std::size_t p = 0; p < spec.weight_count(); ++p) {
            auto shifted = spec;
            shifted.set_weight(p, spec.weight(p) + kFdStep);
            const auto plus = qmlp::qsim::run_circuit(shifted, inputs);
            shifted.set_weight(p, spec.weight(p) - kFdStep);
            const auto minus = qmlp::qsim::run_circuit(shifted, inputs);
            for (std::size_t out = 0; out < qubits; ++out) {
                check(jac.weights(out, p),
                      (plus[out] - minus[out]) / (2.0 * kFdStep), p, false);
            }
        }
        auto shifted_inputs = inputs;
        for (std::size_t q = 0; q < qubits; ++q) {
            shifted_inputs[q] = inputs[q] + kFdStep;
            const auto plus = qmlp::qsim::run_circuit(spec, shifted_inputs);
            shifted_inputs[q] = inputs[q] - kFdStep;
            const auto minus = qmlp::qsim::run_circuit(spec, shifted_inputs);
            shifted_inputs[q] = inputs[q];
            for (std::size_t out = 0; out < qubits; ++out) {
                check(jac.inputs(out, q),
                      (plus[out] - minus[out]) / (2.0 * kFdStep), q, true);
            }
        }
    }
    std::printf("gradient check: circuits=%zu qubits=%zu max_rel_error=%.3g "
                "tol=%.0e -> %s\n",
                gradient_circuits, qubits, max_rel, kGradRelTol,
                grad_ok ? "PASS" : "FAIL");
    if (!grad_ok) {
        std::printf("  first breach: circuit %zu, %s parameter %zu\n",
                    bad_circuit, bad_is_input ? "input" : "weight", bad_param);
    }
    return (oracle_ok && grad_ok) ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"hybrid quantum-classical regression toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key=value config file (command-line flags win)");

    // gen-data
    auto *gen = app.add_subcommand("gen-data",
                                   "generate a synthetic dataset CSV");
    std::string gen_out;
    std::uint64_t gen_seed = 1;
    std::size_t gen_n = 0, gen_inputs = 7, gen_outputs = 32;
    gen->add_option("--out", gen_out, "output CSV path")->required();
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--n", gen_n, "sample count")->required();
    gen->add_option("--inputs", gen_inputs, "input dimension");
    gen->add_option("--outputs", gen_outputs, "target dimension");

    // train
    auto *tr = app.add_subcommand("train", "train one architecture");
    TrainFlags tr_flags;
    std::string tr_arch;
    tr->add_option("--arch", tr_arch,
                   "classical-quantum | quantum-classical | spd-enhanced")
        ->required();
    add_train_flags(tr, tr_flags);

    // eval
    auto *ev = app.add_subcommand("eval", "evaluate a checkpoint");
    std::string ev_checkpoint, ev_data, ev_units = "standardized", ev_out;
    ev->add_option("--checkpoint", ev_checkpoint, "checkpoint file")
        ->required();
    ev->add_option("--data", ev_data, "dataset CSV")->required();
    ev->add_option("--units", ev_units, "standardized|original");
    ev->add_option("--out", ev_out, "also write the metrics line here");

    // compare
    auto *cmp = app.add_subcommand(
        "compare", "train and compare all three architectures");
    TrainFlags cmp_flags;
    add_train_flags(cmp, cmp_flags);

    // gradcheck
    auto *gc = app.add_subcommand(
        "gradcheck", "verify gradients and simulator against oracles");
    std::size_t gc_qubits = 4;
    std::uint64_t gc_seed = 1;
    std::size_t gc_oracle = 200, gc_circuits = 20;
    bool gc_fault = false;
    gc->add_option("--qubits", gc_qubits, "qubit count (1..4)");
    gc->add_option("--seed", gc_seed, "random seed");
    gc->add_option("--oracle-circuits", gc_oracle,
                   "circuits for the dense-matrix comparison");
    gc->add_option("--circuits", gc_circuits,
                   "circuits for the finite-difference comparison");
    gc->add_flag("--inject-fault", gc_fault)->group(""); // test-only hook

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen_data(gen_out, gen_seed, gen_n, gen_inputs,
                                gen_outputs);
        }
        if (tr->parsed()) {
            return cmd_train(tr_flags, tr_arch,
                             tr->count("--qubits") > 0);
        }
        if (ev->parsed()) {
            return cmd_eval(ev_checkpoint, ev_data, ev_units, ev_out);
        }
        if (cmp->parsed()) {
            return cmd_compare(cmp_flags, cmp->count("--qubits") > 0);
        }
        if (gc->parsed()) {
            return cmd_gradcheck(gc_qubits, gc_seed, gc_oracle, gc_circuits,
                                 gc_fault);
        }
    } catch (const qmlp::InvalidParameter &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qmlp::IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const qmlp::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const qmlp::FormatError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const qmlp::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
