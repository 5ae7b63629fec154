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

#include "qmlp/oracle.hpp"

#include <cmath>

#include "qmlp/errors.hpp"

namespace qmlp::qsim::oracle {

namespace {

using Complex = std::complex<double>;

constexpr std::size_t kMaxOracleQubits = 10;

ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m.at(i, i) = {1.0, 0.0};
    }
    return m;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.dim * b.dim);
    for (std::size_t ia = 0; ia < a.dim; ++ia) {
        for (std::size_t ja = 0; ja < a.dim; ++ja) {
            const Complex f = a.at(ia, ja);
            if (f == Complex{0.0, 0.0}) {
                continue;
            }
            for (std::size_t ib = 0; ib < b.dim; ++ib) {
                for (std::size_t jb = 0; jb < b.dim; ++jb) {
                    out.at(ia * b.dim + ib, ja * b.dim + jb) =
                        f * b.at(ib, jb);
                }
            }
        }
    }
    return out;
}

ComplexMatrix from_2x2(const std::array<Complex, 4> &g) {
    ComplexMatrix m(2);
    m.at(0, 0) = g[0];
    m.at(0, 1) = g[1];
    m.at(1, 0) = g[2];
    m.at(1, 1) = g[3];
    return m;
}

// 2x2 building blocks written out independently of the fast simulator.
std::array<Complex, 4> rx2(double theta) {
    const Complex mi{0.0, -1.0};
    return {Complex{std::cos(theta / 2.0), 0.0},
            mi * std::sin(theta / 2.0), mi * std::sin(theta / 2.0),
            Complex{std::cos(theta / 2.0), 0.0}};
}

std::array<Complex, 4> ry2(double theta) {
    return {Complex{std::cos(theta / 2.0), 0.0},
            Complex{-std::sin(theta / 2.0), 0.0},
            Complex{std::sin(theta / 2.0), 0.0},
            Complex{std::cos(theta / 2.0), 0.0}};
}

std::array<Complex, 4> rz2(double theta) {
    return {std::polar(1.0, -theta / 2.0), Complex{0.0, 0.0},
            Complex{0.0, 0.0}, std::polar(1.0, theta / 2.0)};
}

} // namespace

ComplexMatrix single_qubit_gate(std::size_t num_qubits, std::size_t qubit,
                                const std::array<Complex, 4> &g) {
    ComplexMatrix out = identity(1);
    for (std::size_t q = 0; q < num_qubits; ++q) {
        out = (q == qubit) ? kron(out, from_2x2(g))
                           : kron(out, identity(2));
    }
    return out;
}

ComplexMatrix cnot_gate(std::size_t num_qubits, std::size_t control,
                        std::size_t target) {
    if (control == target || control >= num_qubits || target >= num_qubits) {
        throw InvalidInput("cnot_gate: bad control/target pair");
    }
    const std::size_t dim = std::size_t{1} << num_qubits;
    const std::size_t cbit = std::size_t{1} << (num_qubits - 1 - control);
    const std::size_t tbit = std::size_t{1} << (num_qubits - 1 - target);
    ComplexMatrix m(dim);
    for (std::size_t col = 0; col < dim; ++col) {
        const std::size_t row = (col & cbit) ? (col ^ tbit) : col;
        m.at(row, col) = {1.0, 0.0};
    }
    return m;
}

ComplexMatrix pauli_z(std::size_t num_qubits, std::size_t qubit) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    const std::size_t bit = std::size_t{1} << (num_qubits - 1 - qubit);
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m.at(i, i) = {(i & bit) ? -1.0 : 1.0, 0.0};
    }
    return m;
}

std::vector<Complex> apply(const ComplexMatrix &m,
                           std::span<const Complex> v) {
    if (v.size() != m.dim) {
        throw InvalidInput("oracle apply: dimension mismatch");
    }
    std::vector<Complex> out(m.dim, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < m.dim; ++i) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < m.dim; ++j) {
            acc += m.at(i, j) * v[j];
        }
        out[i] = acc;
    }
    return out;
}

double quadratic_form(const ComplexMatrix &m, std::span<const Complex> v) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < m.dim; ++i) {
        Complex row{0.0, 0.0};
        for (std::size_t j = 0; j < m.dim; ++j) {
            row += m.at(i, j) * v[j];
        }
        acc += std::conj(v[i]) * row;
    }
    return acc.real();
}

std::vector<double> dense_matrix_expectations(const CircuitSpec &spec,
                                              std::span<const double> inputs) {
    spec.validate();
    const std::size_t n = spec.num_qubits;
    if (n > kMaxOracleQubits) {
        throw ResourceError("dense_matrix_expectations: " + std::to_string(n) +
                            " qubits exceeds the dense-matrix limit of " +
                            std::to_string(kMaxOracleQubits));
    }
    if (inputs.size() != n) {
        throw InvalidInput("dense_matrix_expectations: input length mismatch");
    }

    const std::size_t dim = std::size_t{1} << n;
    std::vector<Complex> state(dim, Complex{0.0, 0.0});
    state[0] = {1.0, 0.0};

    auto apply_gate = [&state](const ComplexMatrix &g) {
        state = apply(g, state);
    };

    for (std::size_t q = 0; q < n; ++q) {
        apply_gate(single_qubit_gate(n, q, rx2(inputs[q])));
    }
    for (const Matrix &block : spec.blocks) {
        for (std::size_t q = 0; q < n; ++q) {
            // Rot(phi, theta, omega) = Rz(omega) Ry(theta) Rz(phi),
            // rightmost applied first.
            apply_gate(single_qubit_gate(n, q, rz2(block(q, 0))));
            apply_gate(single_qubit_gate(n, q, ry2(block(q, 1))));
            apply_gate(single_qubit_gate(n, q, rz2(block(q, 2))));
        }
        if (n > 1) {
            for (std::size_t q = 0; q < n; ++q) {
                apply_gate(cnot_gate(n, q, (q + spec.entangler_range) % n));
            }
        }
    }

    std::vector<double> expectations(n);
    for (std::size_t q = 0; q < n; ++q) {
        expectations[q] = quadratic_form(pauli_z(n, q), state);
    }
    return expectations;
}

} // namespace qmlp::qsim::oracle
