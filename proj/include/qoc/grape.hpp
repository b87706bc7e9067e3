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
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qoc/objectives.hpp"

namespace qoc {

/**
 * Settings of the adaptive gradient descent.
 *
 *   eps          objective value below which a run counts as converged
 *   eps_grad     gradient 2-norm below which a run counts as converged
 *                (first-order optimality; this is the stop that fires on the
 *                gate-generation landscapes, where the objective itself
 *                plateaus well above eps)
 *   h0, c, d     initial step, growth factor on acceptance, shrink factor
 *                on rejection
 *   L_stuck      consecutive rejections that end a run as stuck
 *   N_partition  trapezoid panels for the propagator-derivative integral
 *   max_iters    hard iteration cap
 */
struct OptimizerConfig {
    double eps = 1e-5;
    double eps_grad = 1e-4;
    double h0 = 1.0;
    double c = 1.1;
    double d = 0.5;
    int L_stuck = 20;
    int N_partition = 20;
    int max_iters = 10000;
    bool record_trace = false;

    void validate() const
    {
        if (!(eps > 0.0) || !(eps_grad > 0.0)) {
            throw std::invalid_argument("OptimizerConfig: tolerances must be > 0");
        }
        if (!(c > 1.0) || !(d > 0.0 && d < 1.0) || !(h0 > 0.0)) {
            throw std::invalid_argument("OptimizerConfig: need h0 > 0, c > 1, 0 < d < 1");
        }
        if (L_stuck < 1 || N_partition < 2 || max_iters < 1) {
            throw std::invalid_argument(
                "OptimizerConfig: need L_stuck >= 1, N_partition >= 2, max_iters >= 1");
        }
    }
};

enum class Termination { Converged, Stuck, MaxIters, Failed };

inline std::string termination_name(Termination t)
{
    switch (t) {
    case Termination::Converged: return "CONVERGED";
    case Termination::Stuck: return "STUCK";
    case Termination::MaxIters: return "MAX_ITERS";
    case Termination::Failed: return "FAILED";
    }
    return "?";
}

/// Outcome of one descent run.
struct RunRecord {
    std::uint64_t seed = 0;
    ControlVector initial;
    ControlVector final_controls;
    int iterations = 0;
    Termination termination = Termination::Failed;
    double objective = std::numeric_limits<double>::quiet_NaN();
    double frobenius = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> trace; // accepted objective values, when recorded

    bool terminated_normally() const
    {
        return termination == Termination::Converged || termination == Termination::Stuck;
    }
};

namespace detail {

/// Trapezoid value of integral_0^dt e^{A t} Bx e^{A (dt - t)} dt built from the
/// precomputed powers p[i] = e^{A dt i / N}, i = 0..N.
inline Eigen::Matrix3d trapezoid_sandwich(const std::vector<Eigen::Matrix3d>& p,
                                          const Eigen::Matrix3d& bx, double dt)
{
    const int n = static_cast<int>(p.size()) - 1;
    Eigen::Matrix3d sum = 0.5 * (p[0] * bx * p[n] + p[n] * bx * p[0]);
    for (int i = 1; i < n; ++i) {
        sum += p[i] * bx * p[n - i];
    }
    return sum * (dt / n);
}

inline std::vector<Eigen::Matrix3d> propagator_powers(const Eigen::Matrix3d& a, double dt, int n)
{
    std::vector<Eigen::Matrix3d> p(n + 1);
    p[0] = Eigen::Matrix3d::Identity();
    p[1] = matrix_exp(Eigen::Matrix3d(a * (dt / n)));
    for (int i = 2; i <= n; ++i) {
        p[i] = p[i - 1] * p[1];
    }
    return p;
}

/// 4x4 variant used by the augmented-exponential derivative fallback.
inline Eigen::Matrix4d trapezoid_sandwich4(const std::vector<Eigen::Matrix4d>& p,
                                           const Eigen::Matrix4d& bx, double dt)
{
    const int n = static_cast<int>(p.size()) - 1;
    Eigen::Matrix4d sum = 0.5 * (p[0] * bx * p[n] + p[n] * bx * p[0]);
    for (int i = 1; i < n; ++i) {
        sum += p[i] * bx * p[n - i];
    }
    return sum * (dt / n);
}

} // namespace detail

/// Derivative of e^{A dt} along the coherent control, as the trapezoid
/// approximation of integral_0^dt e^{A t} B_u e^{A (dt - t)} dt.
inline Eigen::Matrix3d d_exp_du(const Eigen::Matrix3d& a, const Eigen::Matrix3d& bu, double dt,
                                int n_partition)
{
    return detail::trapezoid_sandwich(detail::propagator_powers(a, dt, n_partition), bu, dt);
}

/// Derivative of e^{A dt} along the auxiliary amplitude w; the chain rule
/// through n = w^2 contributes the factor 2w.
inline Eigen::Matrix3d d_exp_dw(const Eigen::Matrix3d& a, const Eigen::Matrix3d& bn, double w,
                                double dt, int n_partition)
{
    return 2.0 * w
           * detail::trapezoid_sandwich(detail::propagator_powers(a, dt, n_partition), bn, dt);
}

/**
 * Derivative of the pump increment g along one control channel:
 *
 *   dg = (dExp - scale (e^{A dt} - I) A^{-1} Bx) A^{-1} b,
 *
 * with (Bx, scale) = (B_u, 1) for u and (B_n, 2w) for w. When A is not safely
 * invertible the same quantity is read off the top-right block of the
 * derivative of the augmented exponential.
 */
inline Eigen::Vector3d d_g(const Eigen::Matrix3d& a, const Eigen::Vector3d& b,
                           const Eigen::Matrix3d& bx, double dt, const Eigen::Matrix3d& d_exp,
                           double scale, int n_partition)
{
    if (generator_safely_invertible(a)) {
        const auto lu = a.partialPivLu();
        const Eigen::Vector3d x = lu.solve(b);
        const Eigen::Vector3d z = lu.solve(bx * x);
        const Eigen::Matrix3d e = matrix_exp(Eigen::Matrix3d(a * dt));
        return d_exp * x - scale * (e * z - z);
    }
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m.topLeftCorner<3, 3>() = a;
    m.topRightCorner<3, 1>() = b;
    Eigen::Matrix4d mx = Eigen::Matrix4d::Zero();
    mx.topLeftCorner<3, 3>() = bx;
    std::vector<Eigen::Matrix4d> p(n_partition + 1);
    p[0] = Eigen::Matrix4d::Identity();
    p[1] = matrix_exp(Eigen::Matrix4d(m * (dt / n_partition)));
    for (int i = 2; i <= n_partition; ++i) {
        p[i] = p[i - 1] * p[1];
    }
    return scale * detail::trapezoid_sandwich4(p, mx, dt).topRightCorner<3, 1>();
}

namespace detail {

/// Per-interval derivative data shared by all states of one gradient pass.
struct SegmentDerivatives {
    std::vector<Eigen::Matrix3d> du;  // d e^{A_k dt_k} / d u_k
    std::vector<Eigen::Matrix3d> dw;  // d e^{A_k dt_k} / d w_k
    std::vector<Eigen::Vector3d> dgu; // d g_k / d u_k
    std::vector<Eigen::Vector3d> dgw; // d g_k / d w_k
};

inline SegmentDerivatives segment_derivatives(const GeneratorMatrices& gen, const TimeGrid& grid,
                                              const ControlVector& controls,
                                              const SegmentOps& ops, int n_partition)
{
    SegmentDerivatives der;
    der.du.resize(grid.M);
    der.dw.resize(grid.M);
    der.dgu.resize(grid.M);
    der.dgw.resize(grid.M);
    for (int k = 0; k < grid.M; ++k) {
        const double dt = grid.dt(k);
        const double w = controls.w[k];
        const auto powers = propagator_powers(ops.A[k], dt, n_partition);
        der.du[k] = trapezoid_sandwich(powers, gen.Bu, dt);
        der.dw[k] = 2.0 * w * trapezoid_sandwich(powers, gen.Bn, dt);
        if (generator_safely_invertible(ops.A[k])) {
            const auto lu = ops.A[k].partialPivLu();
            const Eigen::Vector3d x = lu.solve(gen.b);
            const Eigen::Vector3d zu = lu.solve(gen.Bu * x);
            const Eigen::Vector3d zn = lu.solve(gen.Bn * x);
            der.dgu[k] = der.du[k] * x - (ops.E[k] * zu - zu);
            der.dgw[k] = der.dw[k] * x - 2.0 * w * (ops.E[k] * zn - zn);
        } else {
            der.dgu[k] = d_g(ops.A[k], gen.b, gen.Bu, dt, der.du[k], 1.0, n_partition);
            der.dgw[k] = d_g(ops.A[k], gen.b, gen.Bn, dt, der.dw[k], 2.0 * w, n_partition);
        }
    }
    return der;
}

inline Eigen::VectorXd gradient_from_ops(const GeneratorMatrices& gen, const TimeGrid& grid,
                                         const ControlVector& controls, const SegmentOps& ops,
                                         const StateSet& set,
                                         const std::vector<Eigen::Vector3d>& targets,
                                         int n_partition)
{
    const int m = grid.M;
    const int num_states = set.size();
    const SegmentDerivatives der = segment_derivatives(gen, grid, controls, ops, n_partition);

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(2 * m);
    for (int j = 0; j < num_states; ++j) {
        const auto r = propagate_state(ops, set.bloch[j]);
        // row_k^T = (r_M - target)^T E_M ... E_{k+1}; peeling one factor per
        // interval walks the sensitivity back to every control slot.
        Eigen::Vector3d row = r[m] - targets[j];
        for (int k = m - 1; k >= 0; --k) {
            grad[k] += row.dot(der.du[k] * r[k] + der.dgu[k]) / num_states;
            grad[m + k] += row.dot(der.dw[k] * r[k] + der.dgw[k]) / num_states;
            row = ops.E[k].transpose() * row;
        }
    }
    return grad;
}

} // namespace detail

/// Exact gradient of the state-transfer objective with respect to all 2M
/// control components, laid out as (u_1..u_M, w_1..w_M).
inline Eigen::VectorXd gradient(const SystemParams& p, const TimeGrid& grid,
                                const ControlVector& controls, const ObjectiveSpec& spec,
                                int n_partition = 20)
{
    if (spec.kind != ObjectiveKind::States) {
        throw std::invalid_argument("gradient: defined for state-transfer objectives only");
    }
    const GeneratorMatrices gen(p);
    const SegmentOps ops = segment_ops(p, grid, controls);
    return detail::gradient_from_ops(gen, grid, controls, ops, spec.set,
                                     target_states(spec.gate, spec.set), n_partition);
}

/**
 * Adaptive gradient descent: the trial step v - h grad F is accepted only if
 * it strictly decreases F, growing h by c on success and shrinking it by d
 * otherwise. Runs end converged (small objective or small gradient), stuck
 * (L_stuck consecutive rejections), capped (max_iters) or failed (non-finite
 * values). Purely deterministic in its inputs.
 */
inline RunRecord descend(const SystemParams& p, const TimeGrid& grid, const ControlVector& init,
                         const ObjectiveSpec& spec, const OptimizerConfig& config,
                         std::uint64_t seed = 0)
{
    if (spec.kind != ObjectiveKind::States) {
        throw std::invalid_argument("descend: requires a state-transfer objective");
    }
    config.validate();

    const GeneratorMatrices gen(p);
    const auto targets = target_states(spec.gate, spec.set);

    RunRecord rec;
    rec.seed = seed;
    rec.initial = init;
    rec.final_controls = init;

    if (!init.all_finite()) {
        rec.termination = Termination::Failed;
        return rec;
    }

    ControlVector v = init;
    SegmentOps ops = segment_ops(p, grid, v);
    double f = objective_states_from_ops(ops, spec.set, targets);
    if (config.record_trace) {
        rec.trace.push_back(f);
    }

    Termination term = Termination::Failed;
    double h = config.h0;
    int iters = 0;
    int rejects = 0;

    if (!std::isfinite(f)) {
        rec.objective = f;
        rec.iterations = 0;
        rec.termination = term;
        return rec;
    }

    Eigen::VectorXd grad =
        detail::gradient_from_ops(gen, grid, v, ops, spec.set, targets, config.N_partition);
    double grad_norm = grad.norm();

    while (true) {
        if (!std::isfinite(grad_norm)) {
            term = Termination::Failed;
            break;
        }
        if (f < config.eps || grad_norm < config.eps_grad) {
            term = Termination::Converged;
            break;
        }
        if (iters >= config.max_iters) {
            term = Termination::MaxIters;
            break;
        }

        ControlVector trial = v;
        for (int k = 0; k < grid.M; ++k) {
            trial.u[k] -= h * grad[k];
            trial.w[k] -= h * grad[grid.M + k];
        }
        if (!trial.all_finite()) {
            term = Termination::Failed;
            break;
        }
        SegmentOps trial_ops = segment_ops(p, grid, trial);
        const double f_trial = objective_states_from_ops(trial_ops, spec.set, targets);
        ++iters;

        if (!std::isfinite(f_trial)) {
            term = Termination::Failed;
            break;
        }

        if (f_trial < f) {
            v = std::move(trial);
            ops = std::move(trial_ops);
            f = f_trial;
            h *= config.c;
            rejects = 0;
            if (config.record_trace) {
                rec.trace.push_back(f);
            }
            grad = detail::gradient_from_ops(gen, grid, v, ops, spec.set, targets,
                                             config.N_partition);
            grad_norm = grad.norm();
        } else {
            h *= config.d;
            ++rejects;
            if (rejects >= config.L_stuck) {
                term = Termination::Stuck;
                break;
            }
        }
    }

    rec.final_controls = v;
    rec.iterations = iters;
    rec.termination = term;
    rec.objective = f;
    rec.frobenius = objective_frobenius(p, grid, v, spec.gate);
    return rec;
}

} // namespace qoc
