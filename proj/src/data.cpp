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

#include "qmlp/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qmlp/errors.hpp"
#include "qmlp/rng.hpp"

namespace qmlp::data {

namespace {

// Coefficient design. Frequencies span [2, 5] rad over the unit input range
// and phases are centered on sinusoid extrema (plus a small jitter), so each
// sin term is curvature-dominated: second-order feature maps can represent
// it while a linear fit on raw inputs cannot. A geometric per-coordinate
// decay concentrates the signal in the leading coordinates, keeping the map
// learnable at desk-scale sample counts.
constexpr double kAmplitudeLo = -1.0, kAmplitudeHi = 1.0;
constexpr double kFrequencyLo = 2.0, kFrequencyHi = 5.0;
constexpr double kInteractionLo = -0.5, kInteractionHi = 0.5;
constexpr double kPhaseJitter = 0.1;
constexpr double kCoordinateDecay = 0.45;

void fill_uniform(Matrix &m, SplitMix64 &rng, double lo, double hi) {
    for (double &v : m.storage()) {
        v = rng.uniform(lo, hi);
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_fields(const std::string &line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_field(const std::string &field, std::size_t line_number,
                   std::size_t column) {
    double value = 0.0;
    const char *first = field.data();
    const char *last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError(line_number, "non-numeric value '" + field +
                                          "' in column " +
                                          std::to_string(column + 1));
    }
    return value;
}

} // namespace

SyntheticMap SyntheticMap::sample(std::uint64_t seed, std::size_t input_dim,
                                  std::size_t output_dim) {
    const std::size_t pairs = input_dim * (input_dim - 1) / 2;
    SyntheticMap map;
    map.amplitude = Matrix(output_dim, input_dim);
    map.frequency = Matrix(output_dim, input_dim);
    map.phase = Matrix(output_dim, input_dim);
    map.interaction = Matrix(output_dim, pairs);

    SplitMix64 rng(mix_seed(seed, seed_tag::kSyntheticCoefficients));
    fill_uniform(map.amplitude, rng, kAmplitudeLo, kAmplitudeHi);
    fill_uniform(map.frequency, rng, kFrequencyLo, kFrequencyHi);
    for (std::size_t i = 0; i < map.phase.storage().size(); ++i) {
        // Center the window [phi, phi + w] on a sinusoid extremum (randomly a
        // crest or a trough), jittered.
        const double v = rng.uniform(0.0, 2.0);
        const double branch = std::floor(v);
        const double jitter = (v - branch - 0.5) * 2.0 * kPhaseJitter;
        map.phase.storage()[i] = std::numbers::pi / 2.0 -
                                 0.5 * map.frequency.storage()[i] +
                                 std::numbers::pi * branch + jitter;
    }
    fill_uniform(map.interaction, rng, kInteractionLo, kInteractionHi);

    std::vector<double> scale(input_dim, 1.0);
    for (std::size_t i = 1; i < input_dim; ++i) {
        scale[i] = scale[i - 1] * kCoordinateDecay;
    }
    for (std::size_t j = 0; j < output_dim; ++j) {
        for (std::size_t i = 0; i < input_dim; ++i) {
            map.amplitude(j, i) *= scale[i];
        }
        std::size_t pair = 0;
        for (std::size_t i = 0; i < input_dim; ++i) {
            for (std::size_t l = i + 1; l < input_dim; ++l, ++pair) {
                map.interaction(j, pair) *= std::sqrt(scale[i] * scale[l]);
            }
        }
    }
    return map;
}

std::vector<double> SyntheticMap::evaluate(std::span<const double> x) const {
    const std::size_t d = amplitude.cols();
    if (x.size() != d) {
        throw InvalidInput("SyntheticMap::evaluate: input length " +
                           std::to_string(x.size()) + ", expected " +
                           std::to_string(d));
    }
    std::vector<double> y(amplitude.rows(), 0.0);
    for (std::size_t j = 0; j < y.size(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            acc += amplitude(j, i) *
                   std::sin(frequency(j, i) * x[i] + phase(j, i));
        }
        std::size_t pair = 0;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t l = i + 1; l < d; ++l, ++pair) {
                acc += interaction(j, pair) * x[i] * x[l];
            }
        }
        y[j] = acc;
    }
    return y;
}

Dataset generate_synthetic(std::uint64_t seed, std::size_t n_samples,
                           std::size_t input_dim, std::size_t output_dim) {
    if (n_samples < 1 || input_dim < 1 || output_dim < 1) {
        throw InvalidParameter("generate_synthetic: sizes must be positive");
    }
    Dataset out;
    out.seed = seed;
    out.generator = kSyntheticGeneratorVersion;
    out.inputs = Matrix(n_samples, input_dim);
    out.targets = Matrix(n_samples, output_dim);

    SplitMix64 rng(mix_seed(seed, seed_tag::kSyntheticInputs));
    for (double &v : out.inputs.storage()) {
        v = rng.uniform();
    }
    const SyntheticMap map = SyntheticMap::sample(seed, input_dim, output_dim);
    for (std::size_t r = 0; r < n_samples; ++r) {
        const auto y = map.evaluate(out.inputs.row(r));
        std::copy(y.begin(), y.end(), out.targets.row(r).begin());
    }
    return out;
}

void save_csv(const Dataset &dataset, const std::string &path) {
    std::ofstream file(path);
    if (!file) {
        throw IoError("save_csv: cannot open '" + path + "' for writing");
    }
    const std::size_t d = dataset.input_dim();
    const std::size_t m = dataset.output_dim();
    for (std::size_t i = 0; i < d; ++i) {
        file << 'x' << (i + 1) << ',';
    }
    for (std::size_t j = 0; j < m; ++j) {
        file << 'y' << (j + 1) << (j + 1 < m ? "," : "\n");
    }
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            file << format_double(dataset.inputs(r, i)) << ',';
        }
        for (std::size_t j = 0; j < m; ++j) {
            file << format_double(dataset.targets(r, j))
                 << (j + 1 < m ? "," : "\n");
        }
    }
    if (!file) {
        throw IoError("save_csv: write failure on '" + path + "'");
    }
}

Dataset load_csv(const std::string &path) {
    std::ifstream file(path);
    if (!file) {
        throw IoError("load_csv: cannot open '" + path + "'");
    }
    std::string line;
    if (!std::getline(file, line)) {
        throw FormatError("load_csv: '" + path + "' is empty, missing header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const auto header = split_fields(line);
    std::size_t d = 0;
    while (d < header.size() &&
           header[d] == "x" + std::to_string(d + 1)) {
        ++d;
    }
    std::size_t m = 0;
    while (d + m < header.size() &&
           header[d + m] == "y" + std::to_string(m + 1)) {
        ++m;
    }
    if (d == 0 || m == 0 || d + m != header.size()) {
        throw FormatError(
            "load_csv: header must be x1..xd,y1..yM, got '" + line + "'");
    }

    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t line_number = 1;
    while (std::getline(file, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != d + m) {
            throw ParseError(line_number,
                             "expected " + std::to_string(d + m) +
                                 " fields, got " +
                                 std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            values.push_back(parse_field(fields[c], line_number, c));
        }
        ++rows;
    }
    if (rows == 0) {
        throw InvalidInput("load_csv: '" + path + "' has a header but no data");
    }

    Dataset out;
    out.generator = "csv";
    out.inputs = Matrix(rows, d);
    out.targets = Matrix(rows, m);
    for (std::size_t r = 0; r < rows; ++r) {
        const double *rowp = values.data() + r * (d + m);
        std::copy_n(rowp, d, out.inputs.row(r).begin());
        std::copy_n(rowp + d, m, out.targets.row(r).begin());
    }
    return out;
}

std::pair<Dataset, Dataset> split(const Dataset &dataset,
                                  double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
        throw InvalidParameter("split: train fraction must be in (0, 1), got " +
                               std::to_string(train_fraction));
    }
    const std::size_t n = dataset.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng(mix_seed(seed, seed_tag::kSplit));
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.next_below(i);
        std::swap(order[i - 1], order[j]);
    }
    const std::size_t n_train =
        static_cast<std::size_t>(static_cast<double>(n) * train_fraction);

    auto take = [&dataset](std::span<const std::size_t> rows) {
        Dataset out;
        out.seed = dataset.seed;
        out.generator = dataset.generator;
        out.inputs = Matrix(rows.size(), dataset.input_dim());
        out.targets = Matrix(rows.size(), dataset.output_dim());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto in = dataset.inputs.row(rows[r]);
            const auto tg = dataset.targets.row(rows[r]);
            std::copy(in.begin(), in.end(), out.inputs.row(r).begin());
            std::copy(tg.begin(), tg.end(), out.targets.row(r).begin());
        }
        return out;
    };
    return {take({order.data(), n_train}),
            take({order.data() + n_train, n - n_train})};
}

Scaler Scaler::identity(std::size_t input_dim, std::size_t output_dim) {
    Scaler s;
    s.input_min.assign(input_dim, 0.0);
    s.input_max.assign(input_dim, 0.0);
    s.input_degenerate.assign(input_dim, 1);
    s.target_mean.assign(output_dim, 0.0);
    s.target_std.assign(output_dim, 0.0);
    s.target_degenerate.assign(output_dim, 1);
    return s;
}

Matrix Scaler::scale_inputs(const Matrix &raw) const {
    if (raw.cols() != input_min.size()) {
        throw ShapeError("Scaler: input width mismatch");
    }
    Matrix out = raw;
    for (std::size_t c = 0; c < raw.cols(); ++c) {
        if (input_degenerate[c]) {
            continue;
        }
        const double span = input_max[c] - input_min[c];
        for (std::size_t r = 0; r < raw.rows(); ++r) {
            out(r, c) = (raw(r, c) - input_min[c]) / span;
        }
    }
    return out;
}

Matrix Scaler::scale_targets(const Matrix &raw) const {
    if (raw.cols() != target_mean.size()) {
        throw ShapeError("Scaler: target width mismatch");
    }
    Matrix out = raw;
    for (std::size_t c = 0; c < raw.cols(); ++c) {
        if (target_degenerate[c]) {
            continue;
        }
        for (std::size_t r = 0; r < raw.rows(); ++r) {
            out(r, c) = (raw(r, c) - target_mean[c]) / target_std[c];
        }
    }
    return out;
}

Matrix Scaler::unscale_targets(const Matrix &scaled) const {
    if (scaled.cols() != target_mean.size()) {
        throw ShapeError("Scaler: target width mismatch");
    }
    Matrix out = scaled;
    for (std::size_t c = 0; c < scaled.cols(); ++c) {
        if (target_degenerate[c]) {
            continue;
        }
        for (std::size_t r = 0; r < scaled.rows(); ++r) {
            out(r, c) = scaled(r, c) * target_std[c] + target_mean[c];
        }
    }
    return out;
}

Scaler fit_scaler(const Dataset &train) {
    if (train.size() == 0) {
        throw InvalidInput("fit_scaler: empty training split");
    }
    const std::size_t d = train.input_dim();
    const std::size_t m = train.output_dim();
    Scaler s;
    s.input_min.assign(d, 0.0);
    s.input_max.assign(d, 0.0);
    s.input_degenerate.assign(d, 0);
    s.target_mean.assign(m, 0.0);
    s.target_std.assign(m, 0.0);
    s.target_degenerate.assign(m, 0);

    for (std::size_t c = 0; c < d; ++c) {
        double lo = train.inputs(0, c);
        double hi = lo;
        for (std::size_t r = 1; r < train.size(); ++r) {
            lo = std::min(lo, train.inputs(r, c));
            hi = std::max(hi, train.inputs(r, c));
        }
        s.input_min[c] = lo;
        s.input_max[c] = hi;
        if (hi == lo) {
            s.input_degenerate[c] = 1;
        }
    }
    const double inv_n = 1.0 / static_cast<double>(train.size());
    for (std::size_t c = 0; c < m; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < train.size(); ++r) {
            mean += train.targets(r, c);
        }
        mean *= inv_n;
        double var = 0.0;
        for (std::size_t r = 0; r < train.size(); ++r) {
            const double dev = train.targets(r, c) - mean;
            var += dev * dev;
        }
        var *= inv_n;
        s.target_mean[c] = mean;
        s.target_std[c] = std::sqrt(var);
        if (s.target_std[c] == 0.0) {
            s.target_degenerate[c] = 1;
        }
    }
    return s;
}

} // namespace qmlp::data
