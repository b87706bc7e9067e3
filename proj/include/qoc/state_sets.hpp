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
#include <stdexcept>
#include <string>
#include <vector>

#include "qoc/gates.hpp"

namespace qoc {

enum class StateSetKind { Set2, Set3Grk, Set4, Basis3 };

/**
 * Initial-state collections that define the state-transfer objectives.
 *
 *   Set2    |0><0|, |1><1|                      two basis projectors
 *   Set3Grk diag(2/3, 1/3), |+><+|, I/2         three mixed states that
 *                                               certify a unitary map
 *   Set4    |0><0|, |1><1|, |+><+|, |i><i|      a Hermitian operator basis
 *   Basis3  Bloch unit vectors e1, e2, e3       used by the unital-map
 *                                               Frobenius identity
 */
struct StateSet {
    StateSetKind kind = StateSetKind::Set3Grk;
    std::vector<Eigen::Vector3d> bloch;

    int size() const { return static_cast<int>(bloch.size()); }
};

inline StateSet state_set(StateSetKind kind)
{
    StateSet s;
    s.kind = kind;
    switch (kind) {
    case StateSetKind::Set2:
        s.bloch = {{0, 0, 1}, {0, 0, -1}};
        break;
    case StateSetKind::Set3Grk:
        s.bloch = {{0, 0, 1.0 / 3.0}, {1, 0, 0}, {0, 0, 0}};
        break;
    case StateSetKind::Set4:
        s.bloch = {{0, 0, 1}, {0, 0, -1}, {1, 0, 0}, {0, 1, 0}};
        break;
    case StateSetKind::Basis3:
        s.bloch = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        break;
    }
    return s;
}

/// Gate images of the set's Bloch vectors; the optimization targets.
inline std::vector<Eigen::Vector3d> target_states(const Gate& gate, const StateSet& set)
{
    std::vector<Eigen::Vector3d> targets;
    targets.reserve(set.bloch.size());
    for (const auto& r0 : set.bloch) {
        targets.push_back(gate.apply_bloch(r0));
    }
    return targets;
}

inline StateSetKind parse_state_set(const std::string& id)
{
    if (id == "set2") return StateSetKind::Set2;
    if (id == "set3-grk") return StateSetKind::Set3Grk;
    if (id == "set4") return StateSetKind::Set4;
    if (id == "basis3") return StateSetKind::Basis3;
    throw std::invalid_argument("unknown state set: " + id);
}

inline std::string state_set_name(StateSetKind kind)
{
    switch (kind) {
    case StateSetKind::Set2: return "set2";
    case StateSetKind::Set3Grk: return "set3-grk";
    case StateSetKind::Set4: return "set4";
    case StateSetKind::Basis3: return "basis3";
    }
    return "?";
}

} // namespace qoc
