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

#include <stdexcept>
#include <string>
#include <utility>

#include "qoc/propagation.hpp"
#include "qoc/state_sets.hpp"

namespace qoc {

enum class ObjectiveKind { States, Frobenius };

/// Which infidelity to evaluate: the state-transfer mean over a state set, or
/// the Frobenius distance between evolution matrices.
struct ObjectiveSpec {
    Gate gate;
    ObjectiveKind kind = ObjectiveKind::States;
    StateSet set; // meaningful when kind == States

    static ObjectiveSpec states(Gate gate, StateSetKind set_kind)
    {
        ObjectiveSpec spec;
        spec.gate = std::move(gate);
        spec.kind = ObjectiveKind::States;
        spec.set = state_set(set_kind);
        return spec;
    }

    static ObjectiveSpec frobenius(Gate gate)
    {
        ObjectiveSpec spec;
        spec.gate = std::move(gate);
        spec.kind = ObjectiveKind::Frobenius;
        return spec;
    }

    std::string name() const
    {
        return kind == ObjectiveKind::Frobenius ? "frobenius" : state_set_name(set.kind);
    }
};

/// Mean squared distance between propagated and target Bloch vectors,
/// F = (1/2K) sum_j ||r_j(T) - r_target_j||^2. Equals the mean squared
/// Hilbert-Schmidt distance of the density matrices (||rho||^2 = ||r||^2 / 2
/// plus the common trace term).
inline double objective_states_from_ops(const SegmentOps& ops, const StateSet& set,
                                        const std::vector<Eigen::Vector3d>& targets)
{
    double sum = 0.0;
    for (int j = 0; j < set.size(); ++j) {
        Eigen::Vector3d r = set.bloch[j];
        for (std::size_t k = 0; k < ops.E.size(); ++k) {
            r = ops.E[k] * r + ops.g[k];
        }
        sum += (r - targets[j]).squaredNorm();
    }
    return sum / (2.0 * set.size());
}

inline double objective_states(const SystemParams& p, const TimeGrid& grid,
                               const ControlVector& controls, const Gate& gate,
                               const StateSet& set)
{
    return objective_states_from_ops(segment_ops(p, grid, controls), set,
                                     target_states(gate, set));
}

/// Squared Frobenius distance between the 4x4 evolution matrix and the gate's.
inline double objective_frobenius(const SystemParams& p, const TimeGrid& grid,
                                  const ControlVector& controls, const Gate& gate)
{
    const EvolutionMatrix psi = propagate_evolution_matrix(p, grid, controls);
    return (psi.psi - gate.psi_u).squaredNorm();
}

inline double evaluate_objective(const SystemParams& p, const TimeGrid& grid,
                                 const ControlVector& controls, const ObjectiveSpec& spec)
{
    if (spec.kind == ObjectiveKind::Frobenius) {
        return objective_frobenius(p, grid, controls, spec.gate);
    }
    return objective_states(p, grid, controls, spec.gate, spec.set);
}

/**
 * For unital dynamics (gamma = 0) the Frobenius objective collapses to six
 * times the state-transfer objective over the three Bloch basis vectors.
 * Returns both sides of the identity; rejects gamma != 0, where the
 * translation block breaks the equality.
 */
inline std::pair<double, double> check_unital_relation(const SystemParams& p,
                                                       const TimeGrid& grid,
                                                       const ControlVector& controls,
                                                       const Gate& gate)
{
    if (p.gamma != 0.0) {
        throw std::invalid_argument("check_unital_relation: requires gamma = 0");
    }
    const double lhs = objective_frobenius(p, grid, controls, gate);
    const double rhs =
        6.0 * objective_states(p, grid, controls, gate, state_set(StateSetKind::Basis3));
    return {lhs, rhs};
}

/// Evaluates controls optimized under one objective against another.
inline double cross_evaluate(const SystemParams& p, const TimeGrid& grid,
                             const ControlVector& controls, const ObjectiveSpec& to_spec)
{
    return evaluate_objective(p, grid, controls, to_spec);
}

/// Parses "set2", "set3-grk", "set4" or "frobenius" into a spec for the gate.
inline ObjectiveSpec parse_objective(const std::string& id, const Gate& gate)
{
    if (id == "frobenius") return ObjectiveSpec::frobenius(gate);
    if (id == "set2" || id == "set3-grk" || id == "set4") {
        return ObjectiveSpec::states(gate, parse_state_set(id));
    }
    throw std::invalid_argument("unknown objective: " + id);
}

} // namespace qoc
