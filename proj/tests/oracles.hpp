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

// Independent reference implementations the tests compare against. Each one
// deliberately takes a different numerical route than the library: Taylor
// series instead of Pade, Runge-Kutta instead of exponentials, finite
// differences instead of the analytic gradient.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qoc/grape.hpp"
#include "qoc/sampling.hpp"

namespace oracles {

/// Scaled Taylor series for e^A, summed to machine precision.
template <typename Matrix>
Matrix series_exp(Matrix a)
{
    int squarings = 0;
    while (a.norm() > 0.25) {
        a *= 0.5;
        ++squarings;
    }
    Matrix result = Matrix::Identity(a.rows(), a.cols());
    Matrix term = result;
    for (int k = 1; k <= 60; ++k) {
        term = (term * a / static_cast<double>(k)).eval();
        result += term;
        if (term.norm() <= 1e-20 * result.norm()) break;
    }
    for (int s = 0; s < squarings; ++s) {
        result = (result * result).eval();
    }
    return result;
}

/// Classical fixed-step RK4 for the affine system r' = A r + b.
inline Eigen::Vector3d rk4_affine(const Eigen::Matrix3d& a, const Eigen::Vector3d& b,
                                  Eigen::Vector3d r, double duration, int steps)
{
    const double h = duration / steps;
    for (int s = 0; s < steps; ++s) {
        const Eigen::Vector3d k1 = a * r + b;
        const Eigen::Vector3d k2 = a * (r + 0.5 * h * k1) + b;
        const Eigen::Vector3d k3 = a * (r + 0.5 * h * k2) + b;
        const Eigen::Vector3d k4 = a * (r + h * k3) + b;
        r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return r;
}

/// Piecewise-constant master-equation propagation by per-interval RK4.
inline Eigen::Vector3d rk4_propagate(const qoc::SystemParams& p, const qoc::TimeGrid& grid,
                                     const qoc::ControlVector& controls,
                                     const Eigen::Vector3d& r0, int steps_per_interval = 600)
{
    const qoc::GeneratorMatrices gen(p);
    Eigen::Vector3d r = r0;
    for (int k = 0; k < grid.M; ++k) {
        const Eigen::Matrix3d a = gen.B + controls.u[k] * gen.Bu + controls.n(k) * gen.Bn;
        r = rk4_affine(a, gen.b, r, grid.dt(k), steps_per_interval);
    }
    return r;
}

/// Central finite-difference gradient of an arbitrary functional of the
/// controls, in the library's (u_1..u_M, w_1..w_M) layout.
template <typename F>
Eigen::VectorXd fd_gradient(F f, const qoc::ControlVector& v, double step)
{
    const int m = v.size();
    Eigen::VectorXd grad(2 * m);
    for (int k = 0; k < m; ++k) {
        qoc::ControlVector hi = v, lo = v;
        hi.u[k] += step;
        lo.u[k] -= step;
        grad[k] = (f(hi) - f(lo)) / (2.0 * step);
        hi = v;
        lo = v;
        hi.w[k] += step;
        lo.w[k] -= step;
        grad[m + k] = (f(hi) - f(lo)) / (2.0 * step);
    }
    return grad;
}

/// max_i |a_i - b_i| / max(1, |b_i|): relative for large components, absolute
/// for small ones, so cancellation-dominated entries do not inflate the score.
inline double max_mixed_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    double worst = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
    }
    return worst;
}

/// Kolmogorov-Smirnov distance between the sample and the uniform law on
/// [0, 1].
inline double ks_uniform(std::vector<double> samples)
{
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = samples[i];
        d = std::max(d, std::abs((i + 1) / n - cdf));
        d = std::max(d, std::abs(cdf - i / n));
    }
    return d;
}

/// Standard normal deviate by Box-Muller, driven by the library stream.
inline double standard_normal(qoc::SplitMix64& rng)
{
    const double a = std::max(rng.next_unit(), 1e-300);
    const double b = rng.next_unit();
    return std::sqrt(-2.0 * std::log(a)) * std::cos(6.283185307179586 * b);
}

/// Uniform draw from [lo, hi).
inline double uniform(qoc::SplitMix64& rng, double lo, double hi)
{
    return lo + (hi - lo) * rng.next_unit();
}

/// Random control vector with u in [-1, 1] and w in [0, 1].
inline qoc::ControlVector random_controls(qoc::SplitMix64& rng, int m)
{
    qoc::ControlVector v = qoc::ControlVector::zeros(m);
    for (int k = 0; k < m; ++k) {
        v.u[k] = uniform(rng, -1.0, 1.0);
    }
    for (int k = 0; k < m; ++k) {
        v.w[k] = uniform(rng, 0.0, 1.0);
    }
    return v;
}

} // namespace oracles
