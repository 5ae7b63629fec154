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

#include "qmlp/qsim.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qmlp/errors.hpp"

namespace qmlp::qsim {

namespace {

using Complex = std::complex<double>;
using Gate2x2 = std::array<Complex, 4>;

constexpr Complex kI{0.0, 1.0};

Gate2x2 rx_matrix(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {Complex{c, 0.0}, -kI * s, -kI * s, Complex{c, 0.0}};
}

Gate2x2 ry_matrix(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {Complex{c, 0.0}, Complex{-s, 0.0}, Complex{s, 0.0},
            Complex{c, 0.0}};
}

Gate2x2 rz_matrix(double theta) {
    return {std::exp(-kI * (theta / 2.0)), Complex{0.0, 0.0},
            Complex{0.0, 0.0}, std::exp(kI * (theta / 2.0))};
}

/// Rz(omega) * Ry(theta) * Rz(phi) composed analytically.
Gate2x2 rot_matrix(double phi, double theta, double omega) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {std::exp(-kI * ((phi + omega) / 2.0)) * c,
            -std::exp(kI * ((phi - omega) / 2.0)) * s,
            std::exp(-kI * ((phi - omega) / 2.0)) * s,
            std::exp(kI * ((phi + omega) / 2.0)) * c};
}

/// d/dtheta of exp(-i theta G / 2) for G in {X, Y, Z}.
Gate2x2 rx_derivative(double theta) {
    const double c = 0.5 * std::cos(theta / 2.0);
    const double s = 0.5 * std::sin(theta / 2.0);
    return {Complex{-s, 0.0}, -kI * c, -kI * c, Complex{-s, 0.0}};
}

Gate2x2 ry_derivative(double theta) {
    const double c = 0.5 * std::cos(theta / 2.0);
    const double s = 0.5 * std::sin(theta / 2.0);
    return {Complex{-s, 0.0}, Complex{-c, 0.0}, Complex{c, 0.0},
            Complex{-s, 0.0}};
}

Gate2x2 rz_derivative(double theta) {
    return {-kI * 0.5 * std::exp(-kI * (theta / 2.0)), Complex{0.0, 0.0},
            Complex{0.0, 0.0}, kI * 0.5 * std::exp(kI * (theta / 2.0))};
}

Gate2x2 adjoint_of(const Gate2x2 &u) {
    return {std::conj(u[0]), std::conj(u[2]), std::conj(u[1]),
            std::conj(u[3])};
}

/// Flat tape of primitive operations; every rotation carries the parameter it
/// belongs to so both differentiation methods can address it.
struct GateOp {
    enum class Kind { Rx, Ry, Rz, Cnot } kind;
    std::size_t qubit = 0;
    std::size_t qubit2 = 0; // CNOT target
    double angle = 0.0;
    enum class Param { None, Input, Weight } param = Param::None;
    std::size_t param_index = 0;
};

std::vector<GateOp> build_tape(const CircuitSpec &spec,
                               std::span<const double> inputs) {
    const std::size_t n = spec.num_qubits;
    std::vector<GateOp> tape;
    tape.reserve(n + 3 * (3 * n + n));
    for (std::size_t q = 0; q < n; ++q) {
        tape.push_back({GateOp::Kind::Rx, q, 0, inputs[q],
                        GateOp::Param::Input, q});
    }
    for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
        const Matrix &w = spec.blocks[b];
        for (std::size_t q = 0; q < n; ++q) {
            const std::size_t base = b * 3 * n + q * 3;
            // Rot(phi, theta, omega): Rz(phi) first, then Ry, then Rz(omega).
            tape.push_back({GateOp::Kind::Rz, q, 0, w(q, 0),
                            GateOp::Param::Weight, base + 0});
            tape.push_back({GateOp::Kind::Ry, q, 0, w(q, 1),
                            GateOp::Param::Weight, base + 1});
            tape.push_back({GateOp::Kind::Rz, q, 0, w(q, 2),
                            GateOp::Param::Weight, base + 2});
        }
        if (n > 1) {
            for (std::size_t q = 0; q < n; ++q) {
                tape.push_back({GateOp::Kind::Cnot, q,
                                (q + spec.entangler_range) % n, 0.0,
                                GateOp::Param::None, 0});
            }
        }
    }
    return tape;
}

Gate2x2 op_matrix(const GateOp &op) {
    switch (op.kind) {
    case GateOp::Kind::Rx:
        return rx_matrix(op.angle);
    case GateOp::Kind::Ry:
        return ry_matrix(op.angle);
    default:
        return rz_matrix(op.angle);
    }
}

Gate2x2 op_derivative(const GateOp &op) {
    switch (op.kind) {
    case GateOp::Kind::Rx:
        return rx_derivative(op.angle);
    case GateOp::Kind::Ry:
        return ry_derivative(op.angle);
    default:
        return rz_derivative(op.angle);
    }
}

void apply_op(StateVector &state, const GateOp &op) {
    if (op.kind == GateOp::Kind::Cnot) {
        state.apply_cnot(op.qubit, op.qubit2);
    } else {
        state.apply_matrix(op.qubit, op_matrix(op));
    }
}

void apply_op_adjoint(StateVector &state, const GateOp &op) {
    if (op.kind == GateOp::Kind::Cnot) {
        state.apply_cnot(op.qubit, op.qubit2);
    } else {
        state.apply_matrix(op.qubit, adjoint_of(op_matrix(op)));
    }
}

Complex inner_product(const StateVector &a, const StateVector &b) {
    Complex acc{0.0, 0.0};
    const auto av = a.amplitudes();
    const auto bv = b.amplitudes();
    for (std::size_t i = 0; i < av.size(); ++i) {
        acc += std::conj(av[i]) * bv[i];
    }
    return acc;
}

void validate_inputs(const CircuitSpec &spec, std::span<const double> inputs) {
    spec.validate();
    if (inputs.size() != spec.num_qubits) {
        throw InvalidInput("run_circuit: " + std::to_string(inputs.size()) +
                           " input angles for " +
                           std::to_string(spec.num_qubits) + " qubits");
    }
}

CircuitJacobian parameter_shift_jacobian(const CircuitSpec &spec,
                                         std::span<const double> inputs) {
    const std::size_t n = spec.num_qubits;
    constexpr double kShift = std::numbers::pi / 2.0;
    CircuitJacobian jac;
    jac.weights = Matrix(n, spec.weight_count());
    jac.inputs = Matrix(n, n);

    for (std::size_t p = 0; p < spec.weight_count(); ++p) {
        CircuitSpec shifted = spec;
        shifted.set_weight(p, spec.weight(p) + kShift);
        const auto plus = run_circuit(shifted, inputs);
        shifted.set_weight(p, spec.weight(p) - kShift);
        const auto minus = run_circuit(shifted, inputs);
        for (std::size_t out = 0; out < n; ++out) {
            jac.weights(out, p) = 0.5 * (plus[out] - minus[out]);
        }
    }
    std::vector<double> shifted_inputs(inputs.begin(), inputs.end());
    for (std::size_t q = 0; q < n; ++q) {
        shifted_inputs[q] = inputs[q] + kShift;
        const auto plus = run_circuit(spec, shifted_inputs);
        shifted_inputs[q] = inputs[q] - kShift;
        const auto minus = run_circuit(spec, shifted_inputs);
        shifted_inputs[q] = inputs[q];
        for (std::size_t out = 0; out < n; ++out) {
            jac.inputs(out, q) = 0.5 * (plus[out] - minus[out]);
        }
    }
    return jac;
}

/// Reverse sweep over the gate tape. For each measured Z_q keep the
/// companion state Z_q|psi>; walking gates backwards, the derivative with
/// respect to the parameter of gate U_j is 2 Re <phi_q| dU_j |psi_before_j>.
CircuitJacobian adjoint_jacobian(const CircuitSpec &spec,
                                 std::span<const double> inputs) {
    const std::size_t n = spec.num_qubits;
    const auto tape = build_tape(spec, inputs);

    StateVector psi(n);
    for (const GateOp &op : tape) {
        apply_op(psi, op);
    }

    std::vector<StateVector> companions;
    companions.reserve(n);
    for (std::size_t q = 0; q < n; ++q) {
        StateVector phi = psi;
        const std::size_t bit = n - 1 - q; // qubit 0 = most significant bit
        auto &amps = phi.raw();
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if ((i >> bit) & 1ULL) {
                amps[i] = -amps[i];
            }
        }
        companions.push_back(std::move(phi));
    }

    CircuitJacobian jac;
    jac.weights = Matrix(n, spec.weight_count());
    jac.inputs = Matrix(n, n);

    for (auto it = tape.rbegin(); it != tape.rend(); ++it) {
        const GateOp &op = *it;
        apply_op_adjoint(psi, op);
        if (op.param != GateOp::Param::None) {
            StateVector mu = psi;
            mu.apply_matrix(op.qubit, op_derivative(op));
            for (std::size_t q = 0; q < n; ++q) {
                const double grad =
                    2.0 * inner_product(companions[q], mu).real();
                if (op.param == GateOp::Param::Weight) {
                    jac.weights(q, op.param_index) += grad;
                } else {
                    jac.inputs(q, op.param_index) += grad;
                }
            }
        }
        for (StateVector &phi : companions) {
            apply_op_adjoint(phi, op);
        }
    }
    return jac;
}

} // namespace

StateVector::StateVector(std::size_t num_qubits)
    : num_qubits_(num_qubits),
      amplitudes_(std::size_t{1} << num_qubits, Complex{0.0, 0.0}) {
    if (num_qubits == 0) {
        throw InvalidParameter("StateVector: need at least one qubit");
    }
    amplitudes_[0] = Complex{1.0, 0.0};
}

void StateVector::check_qubit(std::size_t qubit) const {
    if (qubit >= num_qubits_) {
        throw InvalidInput("qubit index " + std::to_string(qubit) +
                           " out of range for " + std::to_string(num_qubits_) +
                           " qubits");
    }
}

void StateVector::apply_matrix(std::size_t qubit, const Gate2x2 &u) {
    check_qubit(qubit);
    const std::size_t stride = std::size_t{1} << (num_qubits_ - 1 - qubit);
    const std::size_t block = stride << 1;
    for (std::size_t base = 0; base < amplitudes_.size(); base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + stride;
            const Complex a = amplitudes_[i0];
            const Complex b = amplitudes_[i1];
            amplitudes_[i0] = u[0] * a + u[1] * b;
            amplitudes_[i1] = u[2] * a + u[3] * b;
        }
    }
}

void StateVector::apply_rx(std::size_t qubit, double theta) {
    apply_matrix(qubit, rx_matrix(theta));
}

void StateVector::apply_ry(std::size_t qubit, double theta) {
    apply_matrix(qubit, ry_matrix(theta));
}

void StateVector::apply_rz(std::size_t qubit, double theta) {
    apply_matrix(qubit, rz_matrix(theta));
}

void StateVector::apply_rot(std::size_t qubit, double phi, double theta,
                            double omega) {
    apply_matrix(qubit, rot_matrix(phi, theta, omega));
}

void StateVector::apply_cnot(std::size_t control, std::size_t target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw InvalidInput("apply_cnot: control and target are both qubit " +
                           std::to_string(control));
    }
    const std::size_t cbit = std::size_t{1} << (num_qubits_ - 1 - control);
    const std::size_t tbit = std::size_t{1} << (num_qubits_ - 1 - target);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & cbit) && !(i & tbit)) {
            std::swap(amplitudes_[i], amplitudes_[i | tbit]);
        }
    }
}

double StateVector::expectation_z(std::size_t qubit) const {
    check_qubit(qubit);
    const std::size_t bit = std::size_t{1} << (num_qubits_ - 1 - qubit);
    double acc = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        const double p = std::norm(amplitudes_[i]);
        acc += (i & bit) ? -p : p;
    }
    return acc;
}

std::vector<double> StateVector::expectation_z_all() const {
    std::vector<double> out(num_qubits_);
    for (std::size_t q = 0; q < num_qubits_; ++q) {
        out[q] = expectation_z(q);
    }
    return out;
}

double StateVector::norm_squared() const {
    double acc = 0.0;
    for (const Complex &a : amplitudes_) {
        acc += std::norm(a);
    }
    return acc;
}

CircuitSpec CircuitSpec::zeros(std::size_t num_qubits, std::size_t range) {
    CircuitSpec spec;
    spec.num_qubits = num_qubits;
    spec.entangler_range = range;
    for (Matrix &block : spec.blocks) {
        block = Matrix(num_qubits, 3);
    }
    spec.validate();
    return spec;
}

CircuitSpec CircuitSpec::random(std::size_t num_qubits, SplitMix64 &rng,
                                std::size_t range) {
    CircuitSpec spec = zeros(num_qubits, range);
    for (Matrix &block : spec.blocks) {
        for (double &w : block.storage()) {
            w = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
    }
    return spec;
}

double CircuitSpec::weight(std::size_t flat_index) const {
    const std::size_t per_block = 3 * num_qubits;
    return blocks[flat_index / per_block]
        .storage()[flat_index % per_block];
}

void CircuitSpec::set_weight(std::size_t flat_index, double value) {
    const std::size_t per_block = 3 * num_qubits;
    blocks[flat_index / per_block].storage()[flat_index % per_block] = value;
}

void CircuitSpec::validate() const {
    if (num_qubits == 0) {
        throw InvalidParameter("CircuitSpec: num_qubits must be positive");
    }
    if (num_qubits >= 2 &&
        (entangler_range < 1 || entangler_range > num_qubits - 1)) {
        throw InvalidParameter("CircuitSpec: entangler range " +
                               std::to_string(entangler_range) +
                               " outside [1, " +
                               std::to_string(num_qubits - 1) + "]");
    }
    for (const Matrix &block : blocks) {
        if (block.rows() != num_qubits || block.cols() != 3) {
            throw InvalidInput(
                "CircuitSpec: block weights are " +
                std::to_string(block.rows()) + "x" +
                std::to_string(block.cols()) + ", expected " +
                std::to_string(num_qubits) + "x3");
        }
        for (double w : block.storage()) {
            if (!std::isfinite(w)) {
                throw InvalidInput("CircuitSpec: non-finite block weight");
            }
        }
    }
}

StateVector angle_embed(std::size_t num_qubits,
                        std::span<const double> angles) {
    if (angles.size() != num_qubits) {
        throw InvalidInput("angle_embed: " + std::to_string(angles.size()) +
                           " angles for " + std::to_string(num_qubits) +
                           " qubits");
    }
    StateVector state(num_qubits);
    for (std::size_t q = 0; q < num_qubits; ++q) {
        state.apply_rx(q, angles[q]);
    }
    return state;
}

void apply_entangling_block(StateVector &state, const Matrix &weights,
                            std::size_t range) {
    const std::size_t n = state.num_qubits();
    if (weights.rows() != n || weights.cols() != 3) {
        throw InvalidInput("apply_entangling_block: weights are " +
                           std::to_string(weights.rows()) + "x" +
                           std::to_string(weights.cols()) + ", expected " +
                           std::to_string(n) + "x3");
    }
    for (std::size_t q = 0; q < n; ++q) {
        state.apply_rot(q, weights(q, 0), weights(q, 1), weights(q, 2));
    }
    if (n == 1) {
        return;
    }
    for (std::size_t q = 0; q < n; ++q) {
        state.apply_cnot(q, (q + range) % n);
    }
}

std::vector<double> run_circuit(const CircuitSpec &spec,
                                std::span<const double> inputs) {
    validate_inputs(spec, inputs);
    StateVector state = angle_embed(spec.num_qubits, inputs);
    for (const Matrix &block : spec.blocks) {
        apply_entangling_block(state, block, spec.entangler_range);
    }
    return state.expectation_z_all();
}

CircuitJacobian circuit_jacobian(const CircuitSpec &spec,
                                 std::span<const double> inputs,
                                 JacobianMethod method) {
    validate_inputs(spec, inputs);
    if (method == JacobianMethod::ParameterShift) {
        return parameter_shift_jacobian(spec, inputs);
    }
    return adjoint_jacobian(spec, inputs);
}

} // namespace qmlp::qsim
