// Copyright 2026 the qoc authors
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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qoc/system.hpp"

namespace qoc {

/**
 * A single-qubit target gate. The optimization works entirely through the
 * induced real 4x4 matrix of the conjugation rho -> U rho U^dagger in the
 * sigma_i / 2 basis; the complex matrix is kept for construction and
 * documentation. Global phase does not enter psi_u.
 */
struct Gate {
    std::string name;
    Eigen::Matrix2cd U;
    Eigen::Matrix4d psi_u;

    /// Rotation block of the conjugation action on Bloch vectors.
    Eigen::Matrix3d rotation() const { return psi_u.block<3, 3>(1, 1); }

    Eigen::Vector3d apply_bloch(const Eigen::Vector3d& r) const { return rotation() * r; }
};

/// psi_u[i][j] = Tr(sigma_i U sigma_j U^dagger) / 2; unitarity makes it
/// block-diagonal: first row/column (1, 0, 0, 0), orthogonal rotation block.
inline Gate make_gate(std::string name, const Eigen::Matrix2cd& u)
{
    if ((u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("make_gate: matrix is not unitary");
    }
    Gate gate;
    gate.name = std::move(name);
    gate.U = u;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            gate.psi_u(i, j) = 0.5 * (pauli(i) * u * pauli(j) * u.adjoint()).trace().real();
        }
    }
    return gate;
}

inline Gate gate_H()
{
    Eigen::Matrix2cd u;
    u << 1, 1, 1, -1;
    return make_gate("H", u / std::numbers::sqrt2);
}

/// Phase-shift gate diag(1, e^{i delta}): rotation about z by delta.
inline Gate gate_phase_shift(double delta)
{
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
    u(1, 1) = std::polar(1.0, delta);
    return make_gate("phase:" + std::to_string(delta), u);
}

inline Gate gate_T()
{
    Gate gate = gate_phase_shift(std::numbers::pi / 4.0);
    gate.name = "T";
    return gate;
}

/**
 * The one-parameter family of unitaries acting on |0><0| and |1><1| exactly
 * as the Hadamard gate: rotations about the axis
 * (cos(theta)/sqrt(2), sin(theta), cos(theta)/sqrt(2)) by 2 arctan(1/sin(theta)),
 * theta in (-pi/2, pi/2]. theta = 0 recovers H, theta = pi/2 the sqrt(Y) gate.
 */
inline Gate gate_rotation_family(double theta)
{
    constexpr double half_pi = std::numbers::pi / 2.0;
    if (!(theta > -half_pi && theta <= half_pi)) {
        throw std::invalid_argument("gate_rotation_family: theta outside (-pi/2, pi/2]");
    }
    // atan2 keeps the angle continuous through sin(theta) = 0; the branch
    // offset of pi only changes the global phase of U.
    const double phi = std::atan2(1.0, std::sin(theta));
    const Eigen::Vector3d axis(std::cos(theta) / std::numbers::sqrt2, std::sin(theta),
                               std::cos(theta) / std::numbers::sqrt2);
    Eigen::Matrix2cd axis_dot_sigma = Eigen::Matrix2cd::Zero();
    for (int j = 0; j < 3; ++j) {
        axis_dot_sigma += axis[j] * pauli(j + 1);
    }
    const std::complex<double> i(0.0, 1.0);
    const Eigen::Matrix2cd u =
        std::cos(phi) * pauli(0) - i * std::sin(phi) * axis_dot_sigma;
    return make_gate("rotation:" + std::to_string(theta), u);
}

/// Parses "H", "T", "rotation:<theta>" or "phase:<delta>".
inline Gate parse_gate(const std::string& id)
{
    if (id == "H") return gate_H();
    if (id == "T") return gate_T();
    const auto colon = id.find(':');
    if (colon != std::string::npos) {
        const std::string kind = id.substr(0, colon);
        const std::string arg = id.substr(colon + 1);
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(arg, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("unknown gate: " + id);
        }
        if (used != arg.size()) {
            throw std::invalid_argument("unknown gate: " + id);
        }
        if (kind == "rotation") return gate_rotation_family(value);
        if (kind == "phase") return gate_phase_shift(value);
    }
    throw std::invalid_argument("unknown gate: " + id);
}

} // namespace qoc
