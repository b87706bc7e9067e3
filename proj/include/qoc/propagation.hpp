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
#include <vector>

#include "qoc/matrix_exp.hpp"
#include "qoc/system.hpp"

namespace qoc {

/**
 * Decides whether the relaxation generator is safe to invert. For gamma > 0
 * the eigenvalues -gamma(n + 1/2) +- i omega and -2 gamma(n + 1/2) keep A
 * nonsingular, but the conservative bound cond_2(A) <= ||A||_F^3 / |det A| is
 * cheap and total; the augmented-exponential route below covers the rest.
 */
inline bool generator_safely_invertible(const Eigen::Matrix3d& a)
{
    const double det = std::abs(a.determinant());
    const double norm = a.norm();
    return det > 0.0 && norm * norm * norm < 1e8 * det;
}

/**
 * Increment accumulated from the inhomogeneous pump over one interval:
 *
 *   g = integral_0^dt e^{A s} ds  b.
 *
 * When A is invertible this is (e^{A dt} - I) A^{-1} b; otherwise the same
 * integral is read off the top-right block of exp([[A dt, b dt], [0, 0]]).
 */
inline Eigen::Vector3d compute_g(const Eigen::Matrix3d& a, const Eigen::Vector3d& b, double dt)
{
    if (generator_safely_invertible(a)) {
        const Eigen::Vector3d x = a.partialPivLu().solve(b);
        return matrix_exp(Eigen::Matrix3d(a * dt)) * x - x;
    }
    Eigen::Matrix4d z = Eigen::Matrix4d::Zero();
    z.topLeftCorner<3, 3>() = a * dt;
    z.topRightCorner<3, 1>() = b * dt;
    return matrix_exp(z).topRightCorner<3, 1>();
}

/// Per-interval generator, propagator and pump increment for one control vector.
struct SegmentOps {
    std::vector<Eigen::Matrix3d> A; // A_k = B + B_u u_k + B_n w_k^2
    std::vector<Eigen::Matrix3d> E; // e^{A_k dt_k}
    std::vector<Eigen::Vector3d> g; // pump increment on interval k
};

inline SegmentOps segment_ops(const SystemParams& p, const TimeGrid& grid,
                              const ControlVector& controls)
{
    const GeneratorMatrices gen(p);
    SegmentOps ops;
    ops.A.resize(grid.M);
    ops.E.resize(grid.M);
    ops.g.resize(grid.M);
    for (int k = 0; k < grid.M; ++k) {
        ops.A[k] = gen.B + controls.u[k] * gen.Bu + controls.n(k) * gen.Bn;
        ops.E[k] = matrix_exp(Eigen::Matrix3d(ops.A[k] * grid.dt(k)));
        ops.g[k] = compute_g(ops.A[k], gen.b, grid.dt(k));
    }
    return ops;
}

/// Bloch-vector trajectory r_0, ..., r_M with r_k = E_k r_{k-1} + g_k.
inline std::vector<Eigen::Vector3d> propagate_state(const SegmentOps& ops,
                                                    const Eigen::Vector3d& r0)
{
    std::vector<Eigen::Vector3d> r(ops.E.size() + 1);
    r[0] = r0;
    for (std::size_t k = 0; k < ops.E.size(); ++k) {
        r[k + 1] = ops.E[k] * r[k] + ops.g[k];
    }
    return r;
}

inline std::vector<Eigen::Vector3d> propagate_state(const SystemParams& p, const TimeGrid& grid,
                                                    const ControlVector& controls,
                                                    const Eigen::Vector3d& r0)
{
    return propagate_state(segment_ops(p, grid, controls), r0);
}

/**
 * The 4x4 evolution matrix acting on extended vectors q = (1, r). Its first
 * row is (1, 0, 0, 0); the translation block psi_prime vanishes exactly when
 * the dynamical map is unital.
 */
struct EvolutionMatrix {
    Eigen::Matrix4d psi = Eigen::Matrix4d::Identity();

    Eigen::Vector3d psi_prime() const { return psi.block<3, 1>(1, 0); }
    Eigen::Matrix3d psi_doubleprime() const { return psi.block<3, 3>(1, 1); }

    Eigen::Vector3d apply(const Eigen::Vector3d& r0) const
    {
        return psi_doubleprime() * r0 + psi_prime();
    }
};

/// Psi(T) = e^{C_M dt_M} ... e^{C_1 dt_1}, assembled from the homogeneous form.
inline EvolutionMatrix propagate_evolution_matrix(const SystemParams& p, const TimeGrid& grid,
                                                  const ControlVector& controls)
{
    EvolutionMatrix result;
    for (int k = 0; k < grid.M; ++k) {
        const Eigen::Matrix4d c = build_generator_C(p, controls.u[k], controls.n(k));
        result.psi = matrix_exp(Eigen::Matrix4d(c * grid.dt(k))) * result.psi;
    }
    return result;
}

} // namespace qoc
