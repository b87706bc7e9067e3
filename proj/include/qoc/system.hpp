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
#include <stdexcept>
#include <vector>

namespace qoc {

/**
 * Physical constants of the driven open qubit, in dimensionless units
 * (the transition frequency sets the scale).
 *
 *   omega  transition frequency
 *   mu     dipole moment coupling the coherent drive, > 0
 *   gamma  decoherence rate coefficient, >= 0
 */
struct SystemParams {
    double omega = 1.0;
    double mu = 0.1;
    double gamma = 0.01;

    void validate() const
    {
        if (!std::isfinite(omega) || !std::isfinite(mu) || !std::isfinite(gamma)) {
            throw std::invalid_argument("SystemParams: non-finite value");
        }
        if (mu <= 0.0) {
            throw std::invalid_argument("SystemParams: mu must be > 0");
        }
        if (gamma < 0.0) {
            throw std::invalid_argument("SystemParams: gamma must be >= 0");
        }
    }
};

/**
 * Partition of [0, T] into M control intervals. The default grid is regular;
 * arbitrary strictly increasing boundaries are accepted.
 */
struct TimeGrid {
    double T = 5.0;
    int M = 10;
    std::vector<double> boundaries; // t_0 = 0 < t_1 < ... < t_M = T

    TimeGrid() { fill_regular(5.0, 10); }

    static TimeGrid regular(double horizon, int intervals)
    {
        if (!(horizon > 0.0) || intervals < 1) {
            throw std::invalid_argument("TimeGrid: need T > 0 and M >= 1");
        }
        TimeGrid g;
        g.fill_regular(horizon, intervals);
        return g;
    }

    static TimeGrid from_boundaries(std::vector<double> bounds)
    {
        if (bounds.size() < 2 || bounds.front() != 0.0) {
            throw std::invalid_argument("TimeGrid: boundaries must start at 0");
        }
        for (std::size_t i = 1; i < bounds.size(); ++i) {
            if (!(bounds[i] > bounds[i - 1])) {
                throw std::invalid_argument("TimeGrid: boundaries must increase strictly");
            }
        }
        TimeGrid g;
        g.M = static_cast<int>(bounds.size()) - 1;
        g.T = bounds.back();
        g.boundaries = std::move(bounds);
        return g;
    }

    double dt(int k) const { return boundaries[k + 1] - boundaries[k]; }

private:
    void fill_regular(double horizon, int intervals)
    {
        T = horizon;
        M = intervals;
        boundaries.resize(intervals + 1);
        for (int k = 0; k <= intervals; ++k) {
            boundaries[k] = horizon * static_cast<double>(k) / intervals;
        }
        boundaries.back() = horizon;
    }
};

/**
 * Piecewise-constant control amplitudes: coherent u_k and auxiliary w_k per
 * interval. The physical incoherent control is n_k = w_k^2, nonnegative by
 * construction.
 */
struct ControlVector {
    std::vector<double> u;
    std::vector<double> w;

    ControlVector() = default;
    ControlVector(std::vector<double> cu, std::vector<double> cw)
        : u(std::move(cu)), w(std::move(cw))
    {
        if (u.size() != w.size()) {
            throw std::invalid_argument("ControlVector: u and w must have equal length");
        }
    }

    static ControlVector zeros(int m)
    {
        return ControlVector(std::vector<double>(m, 0.0), std::vector<double>(m, 0.0));
    }

    int size() const { return static_cast<int>(u.size()); }
    double n(int k) const { return w[k] * w[k]; }

    bool all_finite() const
    {
        for (double v : u) {
            if (!std::isfinite(v)) return false;
        }
        for (double v : w) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }
};

/**
 * Generator blocks of the Bloch-coordinate master equation
 *
 *   dr/dt = A(u, n) r + b,   A(u, n) = B + B_u u + B_n n,
 *
 * with drift B (free precession and relaxation), coherent coupling B_u,
 * incoherent broadening B_n, and the inhomogeneous pump vector b.
 */
struct GeneratorMatrices {
    Eigen::Matrix3d B;
    Eigen::Matrix3d Bu;
    Eigen::Matrix3d Bn;
    Eigen::Vector3d b;

    explicit GeneratorMatrices(const SystemParams& p)
    {
        const double w = p.omega, g = p.gamma, m = p.mu;
        B << -g / 2.0, w, 0.0,
             -w, -g / 2.0, 0.0,
             0.0, 0.0, -g;
        Bu << 0.0, 0.0, 0.0,
              0.0, 0.0, -2.0 * m,
              0.0, 2.0 * m, 0.0;
        Bn = -g * Eigen::Vector3d(1.0, 1.0, 2.0).asDiagonal();
        b = Eigen::Vector3d(0.0, 0.0, g);
    }
};

/// A(u, n) = B + B_u u + B_n n for constant control values on one interval.
inline Eigen::Matrix3d build_generator_A(const SystemParams& p, double u, double n)
{
    const GeneratorMatrices gen(p);
    return gen.B + u * gen.Bu + n * gen.Bn;
}

/// Homogeneous 4-vector form: zero first row, first column (0, b), lower-right A(u, n).
inline Eigen::Matrix4d build_generator_C(const SystemParams& p, double u, double n)
{
    Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
    c.block<3, 3>(1, 1) = build_generator_A(p, u, n);
    c.block<3, 1>(1, 0) = GeneratorMatrices(p).b;
    return c;
}

inline const Eigen::Matrix2cd& pauli(int i)
{
    using namespace std::complex_literals;
    static const Eigen::Matrix2cd sigma[4] = {
        (Eigen::Matrix2cd() << 1, 0, 0, 1).finished(),
        (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(),
        (Eigen::Matrix2cd() << 0, -1i, 1i, 0).finished(),
        (Eigen::Matrix2cd() << 1, 0, 0, -1).finished(),
    };
    return sigma[i];
}

inline void require_hermitian(const Eigen::Matrix2cd& m, double tol = 1e-12)
{
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol * std::max(1.0, m.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("expected a Hermitian matrix");
    }
}

/// Bloch coordinates r_j = Tr(rho sigma_j) of a density matrix.
inline Eigen::Vector3d density_to_bloch(const Eigen::Matrix2cd& rho)
{
    require_hermitian(rho);
    Eigen::Vector3d r;
    for (int j = 1; j <= 3; ++j) {
        r[j - 1] = (rho * pauli(j)).trace().real();
    }
    return r;
}

/// rho = (I + sum_j r_j sigma_j) / 2.
inline Eigen::Matrix2cd bloch_to_density(const Eigen::Vector3d& r)
{
    Eigen::Matrix2cd rho = pauli(0);
    for (int j = 1; j <= 3; ++j) {
        rho += r[j - 1] * pauli(j);
    }
    return 0.5 * rho;
}

/// Extended 4-vector q_i = Tr(h sigma_i) of a general Hermitian matrix;
/// density matrices give q = (1, r).
inline Eigen::Vector4d hermitian_to_extended(const Eigen::Matrix2cd& h)
{
    require_hermitian(h);
    Eigen::Vector4d q;
    for (int i = 0; i < 4; ++i) {
        q[i] = (h * pauli(i)).trace().real();
    }
    return q;
}

} // namespace qoc
