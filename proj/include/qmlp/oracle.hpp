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
 * Dense-matrix reference simulator. Every gate is materialized as an explicit
 * 2^n x 2^n matrix through Kronecker products and applied in order; Pauli-Z
 * expectations are quadratic forms against the full observable matrix. This
 * path shares no kernels with the fast simulator and exists to check it — in
 * tests and in the `gradcheck` command.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qmlp/qsim.hpp"

namespace qmlp::qsim::oracle {

/// Dense complex matrix, row-major. Kept local to the oracle on purpose.
struct ComplexMatrix {
    std::size_t dim = 0;
    std::vector<std::complex<double>> data;

    explicit ComplexMatrix(std::size_t dim_)
        : dim(dim_), data(dim_ * dim_, {0.0, 0.0}) {}

    std::complex<double> &at(std::size_t i, std::size_t j) {
        return data[i * dim + j];
    }
    std::complex<double> at(std::size_t i, std::size_t j) const {
        return data[i * dim + j];
    }
};

/// I x ... x g x ... x I with g at position `qubit` (qubit 0 owns the most
/// significant bit, i.e. the leftmost Kronecker factor).
ComplexMatrix single_qubit_gate(std::size_t num_qubits, std::size_t qubit,
                                const std::array<std::complex<double>, 4> &g);

/// Full 2^n x 2^n CNOT permutation matrix.
ComplexMatrix cnot_gate(std::size_t num_qubits, std::size_t control,
                        std::size_t target);

/// Full Pauli-Z observable on one qubit.
ComplexMatrix pauli_z(std::size_t num_qubits, std::size_t qubit);

std::vector<std::complex<double>> apply(const ComplexMatrix &m,
                                        std::span<const std::complex<double>> v);

/// <v| m |v>, real part.
double quadratic_form(const ComplexMatrix &m,
                      std::span<const std::complex<double>> v);

/// Reference expectations for the full embed + 3-block ansatz.
/// Throws ResourceError for more than 10 qubits.
std::vector<double> dense_matrix_expectations(const CircuitSpec &spec,
                                              std::span<const double> inputs);

} // namespace qmlp::qsim::oracle
