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

// Checkpoint layout (all integers and float bit patterns little-endian):
//   magic "QMLPCKPT", u32 version,
//   u8 architecture, u64 input_dim, u64 output_dim, u64 num_qubits,
//   u64 entangler_range, u8 projection_mode, f64 spd_epsilon,
//   u8 jacobian_method,
//   u64 pre_layer_count,  per layer: u64 out, u64 in, u8 activation,
//                                    f64 weights[out*in], f64 bias[out],
//   3 circuit blocks: f64[num_qubits*3] each,
//   u64 post_layer_count, per layer as above,
//   scaler: u64 d, f64 min[d], max[d], u8 flags[d],
//           u64 m, f64 mean[m], std[m], u8 flags[m],
//   u8 has_basis, if set: u64 rows, u64 cols, f64 data[rows*cols].

#include <cstring>
#include <fstream>
#include <limits>

#include "qmlp/train.hpp"

namespace qmlp::train {

namespace {

constexpr char kMagic[8] = {'Q', 'M', 'L', 'P', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;
// Sanity caps so a corrupt count cannot trigger a giant allocation.
constexpr std::uint64_t kMaxLayers = 64;
constexpr std::uint64_t kMaxDim = 10'000'000;

void put_bytes(std::ostream &out, const char *data, std::size_t n) {
    out.write(data, static_cast<std::streamsize>(n));
}

void put_u8(std::ostream &out, std::uint8_t v) {
    put_bytes(out, reinterpret_cast<const char *>(&v), 1);
}

void put_u32(std::ostream &out, std::uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) {
        buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    }
    put_bytes(out, buf, 4);
}

void put_u64(std::ostream &out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) {
        buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    }
    put_bytes(out, buf, 8);
}

void put_f64(std::ostream &out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    put_u64(out, bits);
}

void get_bytes(std::istream &in, char *data, std::size_t n) {
    in.read(data, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
        throw TruncatedFileError("checkpoint ends mid-record");
    }
}

std::uint8_t get_u8(std::istream &in) {
    char c;
    get_bytes(in, &c, 1);
    return static_cast<std::uint8_t>(c);
}

std::uint32_t get_u32(std::istream &in) {
    char buf[4];
    get_bytes(in, buf, 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) {
        v = (v << 8) | static_cast<std::uint8_t>(buf[i]);
    }
    return v;
}

std::uint64_t get_u64(std::istream &in) {
    char buf[8];
    get_bytes(in, buf, 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | static_cast<std::uint8_t>(buf[i]);
    }
    return v;
}

double get_f64(std::istream &in) {
    const std::uint64_t bits = get_u64(in);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

std::uint64_t get_dim(std::istream &in, const char *what) {
    const std::uint64_t v = get_u64(in);
    if (v > kMaxDim) {
        throw FormatError(std::string("checkpoint: implausible ") + what +
                          " " + std::to_string(v));
    }
    return v;
}

void put_layer(std::ostream &out, const model::DenseLayer &layer) {
    put_u64(out, layer.out_dim());
    put_u64(out, layer.in_dim());
    put_u8(out, layer.activation == model::Activation::Relu ? 1 : 0);
    for (double w : layer.weights.storage()) {
        put_f64(out, w);
    }
    for (double b : layer.bias) {
        put_f64(out, b);
    }
}

struct LayerRecord {
    std::uint64_t out_dim, in_dim;
    std::uint8_t activation;
    std::vector<double> weights, bias;
};

LayerRecord get_layer(std::istream &in) {
    LayerRecord rec;
    rec.out_dim = get_dim(in, "layer width");
    rec.in_dim = get_dim(in, "layer width");
    rec.activation = get_u8(in);
    rec.weights.resize(rec.out_dim * rec.in_dim);
    for (double &w : rec.weights) {
        w = get_f64(in);
    }
    rec.bias.resize(rec.out_dim);
    for (double &b : rec.bias) {
        b = get_f64(in);
    }
    return rec;
}

} // namespace

void save_checkpoint(const model::HybridModel &net, const data::Scaler &scaler,
                     const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("save_checkpoint: cannot open '" + path +
                      "' for writing");
    }
    const model::ModelConfig &c = net.config();

    put_bytes(out, kMagic, sizeof(kMagic));
    put_u32(out, kVersion);
    put_u8(out, static_cast<std::uint8_t>(c.architecture));
    put_u64(out, c.input_dim);
    put_u64(out, c.output_dim);
    put_u64(out, c.num_qubits);
    put_u64(out, c.entangler_range);
    put_u8(out, c.projection_mode == features::ProjectionMode::Batch ? 1 : 0);
    put_f64(out, c.spd_epsilon);
    put_u8(out, c.jacobian_method == qsim::JacobianMethod::Adjoint ? 1 : 0);

    put_u64(out, net.pre_layers().size());
    for (const auto &layer : net.pre_layers()) {
        put_layer(out, layer);
    }
    for (const Matrix &block : net.circuit().blocks) {
        for (double w : block.storage()) {
            put_f64(out, w);
        }
    }
    put_u64(out, net.post_layers().size());
    for (const auto &layer : net.post_layers()) {
        put_layer(out, layer);
    }

    put_u64(out, scaler.input_min.size());
    for (double v : scaler.input_min) {
        put_f64(out, v);
    }
    for (double v : scaler.input_max) {
        put_f64(out, v);
    }
    for (std::uint8_t f : scaler.input_degenerate) {
        put_u8(out, f);
    }
    put_u64(out, scaler.target_mean.size());
    for (double v : scaler.target_mean) {
        put_f64(out, v);
    }
    for (double v : scaler.target_std) {
        put_f64(out, v);
    }
    for (std::uint8_t f : scaler.target_degenerate) {
        put_u8(out, f);
    }

    const features::SpdPreprocessor *prep = net.preprocessor();
    const bool has_basis = prep && prep->basis().has_value();
    put_u8(out, has_basis ? 1 : 0);
    if (has_basis) {
        const Matrix &basis = *prep->basis();
        put_u64(out, basis.rows());
        put_u64(out, basis.cols());
        for (double v : basis.storage()) {
            put_f64(out, v);
        }
    }
    if (!out) {
        throw IoError("save_checkpoint: write failure on '" + path + "'");
    }
}

Checkpoint load_checkpoint(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("load_checkpoint: cannot open '" + path + "'");
    }
    char magic[8];
    get_bytes(in, magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw FormatError("load_checkpoint: '" + path +
                          "' does not start with the checkpoint magic string");
    }
    const std::uint32_t version = get_u32(in);
    if (version != kVersion) {
        throw VersionError("load_checkpoint: file version " +
                           std::to_string(version) + ", this build reads " +
                           std::to_string(kVersion));
    }

    model::ModelConfig config;
    const std::uint8_t arch = get_u8(in);
    if (arch > 2) {
        throw FormatError("load_checkpoint: unknown architecture tag " +
                          std::to_string(arch));
    }
    config.architecture = static_cast<model::Architecture>(arch);
    config.input_dim = get_dim(in, "input dim");
    config.output_dim = get_dim(in, "output dim");
    config.num_qubits = get_dim(in, "qubit count");
    config.entangler_range = get_dim(in, "entangler range");
    config.projection_mode = get_u8(in) ? features::ProjectionMode::Batch
                                        : features::ProjectionMode::PerSample;
    config.spd_epsilon = get_f64(in);
    config.jacobian_method = get_u8(in) ? qsim::JacobianMethod::Adjoint
                                        : qsim::JacobianMethod::ParameterShift;

    const std::uint64_t n_pre = get_u64(in);
    if (n_pre > kMaxLayers) {
        throw FormatError("load_checkpoint: implausible layer count " +
                          std::to_string(n_pre));
    }
    std::vector<LayerRecord> pre(n_pre);
    for (auto &rec : pre) {
        rec = get_layer(in);
    }
    std::vector<double> circuit_weights(config.num_qubits * 9);
    for (double &w : circuit_weights) {
        w = get_f64(in);
    }
    const std::uint64_t n_post = get_u64(in);
    if (n_post > kMaxLayers) {
        throw FormatError("load_checkpoint: implausible layer count " +
                          std::to_string(n_post));
    }
    std::vector<LayerRecord> post(n_post);
    for (auto &rec : post) {
        rec = get_layer(in);
    }

    data::Scaler scaler;
    const std::uint64_t sd = get_dim(in, "scaler input width");
    scaler.input_min.resize(sd);
    scaler.input_max.resize(sd);
    scaler.input_degenerate.resize(sd);
    for (double &v : scaler.input_min) {
        v = get_f64(in);
    }
    for (double &v : scaler.input_max) {
        v = get_f64(in);
    }
    for (std::uint8_t &f : scaler.input_degenerate) {
        f = get_u8(in);
    }
    const std::uint64_t sm = get_dim(in, "scaler target width");
    scaler.target_mean.resize(sm);
    scaler.target_std.resize(sm);
    scaler.target_degenerate.resize(sm);
    for (double &v : scaler.target_mean) {
        v = get_f64(in);
    }
    for (double &v : scaler.target_std) {
        v = get_f64(in);
    }
    for (std::uint8_t &f : scaler.target_degenerate) {
        f = get_u8(in);
    }

    const bool has_basis = get_u8(in) != 0;
    Matrix basis;
    if (has_basis) {
        const std::uint64_t rows = get_dim(in, "basis rows");
        const std::uint64_t cols = get_dim(in, "basis cols");
        basis = Matrix(rows, cols);
        for (double &v : basis.storage()) {
            v = get_f64(in);
        }
    }

    // Cross-checks between the declared config and the stored arrays.
    if (!post.empty() && post.back().out_dim != config.output_dim) {
        throw ShapeError("load_checkpoint: config declares output width " +
                         std::to_string(config.output_dim) +
                         " but the final layer has width " +
                         std::to_string(post.back().out_dim));
    }
    if (sd != config.input_dim || sm != config.output_dim) {
        throw ShapeError("load_checkpoint: scaler widths " +
                         std::to_string(sd) + "/" + std::to_string(sm) +
                         " do not match declared dims " +
                         std::to_string(config.input_dim) + "/" +
                         std::to_string(config.output_dim));
    }

    // Rebuild the hidden-width lists from the stored layer dims so the
    // reconstructed model has exactly the stored shapes.
    config.pre_hidden.clear();
    for (std::size_t i = 0; i + 1 < pre.size(); ++i) {
        config.pre_hidden.push_back(pre[i].out_dim);
    }
    config.post_hidden.clear();
    for (std::size_t i = 0; i + 1 < post.size(); ++i) {
        config.post_hidden.push_back(post[i].out_dim);
    }

    model::HybridModel net(config);
    if (net.pre_layers().size() != pre.size() ||
        net.post_layers().size() != post.size()) {
        throw ShapeError("load_checkpoint: layer counts do not match the "
                         "declared architecture");
    }
    auto check_stack = [](const std::vector<model::DenseLayer> &built,
                          const std::vector<LayerRecord> &stored) {
        for (std::size_t i = 0; i < built.size(); ++i) {
            if (built[i].out_dim() != stored[i].out_dim ||
                built[i].in_dim() != stored[i].in_dim) {
                throw ShapeError(
                    "load_checkpoint: layer " + std::to_string(i) +
                    " is declared " + std::to_string(stored[i].out_dim) + "x" +
                    std::to_string(stored[i].in_dim) +
                    " but the architecture requires " +
                    std::to_string(built[i].out_dim()) + "x" +
                    std::to_string(built[i].in_dim()));
            }
            const bool stored_relu = stored[i].activation == 1;
            const bool built_relu =
                built[i].activation == model::Activation::Relu;
            if (stored_relu != built_relu) {
                throw FormatError("load_checkpoint: stored activation layout "
                                  "is not supported by this build");
            }
        }
    };
    check_stack(net.pre_layers(), pre);
    check_stack(net.post_layers(), post);

    std::vector<double> flat;
    flat.reserve(net.parameter_count());
    for (const auto &rec : pre) {
        flat.insert(flat.end(), rec.weights.begin(), rec.weights.end());
        flat.insert(flat.end(), rec.bias.begin(), rec.bias.end());
    }
    flat.insert(flat.end(), circuit_weights.begin(), circuit_weights.end());
    for (const auto &rec : post) {
        flat.insert(flat.end(), rec.weights.begin(), rec.weights.end());
        flat.insert(flat.end(), rec.bias.begin(), rec.bias.end());
    }
    net.set_parameters(flat);

    if (has_basis) {
        if (!net.preprocessor()) {
            throw FormatError("load_checkpoint: projection basis present but "
                              "the architecture has no preprocessing stage");
        }
        const std::size_t m = features::expanded_dim(config.input_dim);
        if (basis.rows() != m || basis.cols() != config.num_qubits) {
            throw ShapeError("load_checkpoint: projection basis is " +
                             std::to_string(basis.rows()) + "x" +
                             std::to_string(basis.cols()) + ", expected " +
                             std::to_string(m) + "x" +
                             std::to_string(config.num_qubits));
        }
        net.preprocessor()->set_basis(std::move(basis));
    }
    return Checkpoint{std::move(net), std::move(scaler)};
}

} // namespace qmlp::train
