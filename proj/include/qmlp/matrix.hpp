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

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "qmlp/errors.hpp"

namespace qmlp {

/// Dense row-major matrix of doubles. Value semantics throughout; all
/// numerical kernels in this project are written against this one type.
class Matrix {
  public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    double &operator()(std::size_t i, std::size_t j) {
        return data_[i * cols_ + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) {
        return {data_.data() + i * cols_, cols_};
    }

    const std::vector<double> &storage() const { return data_; }
    std::vector<double> &storage() { return data_; }

    bool operator==(const Matrix &other) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// y = A x
inline std::vector<double> matvec(const Matrix &a, std::span<const double> x) {
    if (x.size() != a.cols()) {
        throw ShapeError("matvec: vector length " + std::to_string(x.size()) +
                         " does not match matrix columns " +
                         std::to_string(a.cols()));
    }
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            acc += a(i, j) * x[j];
        }
        y[i] = acc;
    }
    return y;
}

/// y = A^T x
inline std::vector<double> transpose_matvec(const Matrix &a,
                                            std::span<const double> x) {
    if (x.size() != a.rows()) {
        throw ShapeError("transpose_matvec: vector length " +
                         std::to_string(x.size()) +
                         " does not match matrix rows " +
                         std::to_string(a.rows()));
    }
    std::vector<double> y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        for (std::size_t j = 0; j < a.cols(); ++j) {
            y[j] += a(i, j) * xi;
        }
    }
    return y;
}

inline double frobenius_norm(const Matrix &a) {
    double acc = 0.0;
    for (double v : a.storage()) {
        acc += v * v;
    }
    return std::sqrt(acc);
}

} // namespace qmlp
