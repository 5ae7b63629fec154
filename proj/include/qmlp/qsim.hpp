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
 * Exact statevector simulation of the fixed ansatz used by the hybrid models:
 * per-qubit Rx angle embedding, three strongly-entangling blocks (general
 * Euler rotations plus a ring of CNOTs), Pauli-Z expectation readout, and
 * exact differentiation by parameter shift or adjoint sweep.
 *
 * Conventions, fixed for reproducibility:
 *  - qubit 0 is the most significant bit of the basis-state index;
 *  - Rot(phi, theta, omega) = Rz(omega) * Ry(theta) * Rz(phi), rightmost
 *    applied first;
 *  - entanglers are CNOT(q, (q + r) mod n) for q = 0..n-1, skipped when n = 1.
 */

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qmlp/matrix.hpp"
#include "qmlp/rng.hpp"

namespace qmlp::qsim {

/// n-qubit pure state: 2^n complex amplitudes, unit norm. Gates mutate the
/// owned buffer in place; the type itself has plain value semantics (copy it
/// to branch a simulation).
class StateVector {
  public:
    explicit StateVector(std::size_t num_qubits);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t size() const { return amplitudes_.size(); }

    std::span<const std::complex<double>> amplitudes() const {
        return amplitudes_;
    }
    std::vector<std::complex<double>> &raw() { return amplitudes_; }

    void apply_rx(std::size_t qubit, double theta);
    void apply_ry(std::size_t qubit, double theta);
    void apply_rz(std::size_t qubit, double theta);
    /// Rz(omega) * Ry(theta) * Rz(phi) as one fused 2x2 unitary.
    void apply_rot(std::size_t qubit, double phi, double theta, double omega);
    void apply_cnot(std::size_t control, std::size_t target);

    /// Applies an arbitrary 2x2 matrix {u00, u01, u10, u11} to one qubit.
    void apply_matrix(std::size_t qubit,
                      const std::array<std::complex<double>, 4> &u);

    /// <Z_q> = P(bit q = 0) - P(bit q = 1).
    double expectation_z(std::size_t qubit) const;
    std::vector<double> expectation_z_all() const;

    double norm_squared() const;

  private:
    void check_qubit(std::size_t qubit) const;

    std::size_t num_qubits_;
    std::vector<std::complex<double>> amplitudes_;
};

/// Full circuit description: three blocks of per-qubit (phi, theta, omega)
/// rotation triples plus the ring-entangler range.
struct CircuitSpec {
    std::size_t num_qubits = 0;
    std::array<Matrix, 3> blocks; // each num_qubits x 3
    std::size_t entangler_range = 1;

    static CircuitSpec zeros(std::size_t num_qubits, std::size_t range = 1);
    /// Weights uniform in [0, 2*pi).
    static CircuitSpec random(std::size_t num_qubits, SplitMix64 &rng,
                              std::size_t range = 1);

    /// 9n trainable weights, flattened as block-major, then qubit, then
    /// (phi, theta, omega): p = block*3n + qubit*3 + angle.
    std::size_t weight_count() const { return 9 * num_qubits; }
    double weight(std::size_t flat_index) const;
    void set_weight(std::size_t flat_index, double value);

    void validate() const;
};

/// Rx(angles[q]) on each qubit of |0...0>.
StateVector angle_embed(std::size_t num_qubits, std::span<const double> angles);

/// One strongly-entangling block: Rot(row q of weights) on each qubit, then
/// the CNOT ring at the given range.
void apply_entangling_block(StateVector &state, const Matrix &weights,
                            std::size_t range);

/// Embedding, three blocks, then <Z_q> for every qubit.
std::vector<double> run_circuit(const CircuitSpec &spec,
                                std::span<const double> inputs);

enum class JacobianMethod {
    /// Reference method: d f/d theta = [f(theta + pi/2) - f(theta - pi/2)]/2,
    /// exact for every gate here (all generators have eigenvalues +-1/2).
    ParameterShift,
    /// O(gates + params) reverse sweep; agrees with ParameterShift to 1e-10
    /// and is the default inside training.
    Adjoint,
};

/// d<Z_q>/d(parameter) for all 9n circuit weights and all n embedding angles.
struct CircuitJacobian {
    Matrix weights; // num_qubits x 9*num_qubits, column p as in CircuitSpec
    Matrix inputs;  // num_qubits x num_qubits, column q = embedding angle q
};

CircuitJacobian circuit_jacobian(
    const CircuitSpec &spec, std::span<const double> inputs,
    JacobianMethod method = JacobianMethod::ParameterShift);

} // namespace qmlp::qsim
