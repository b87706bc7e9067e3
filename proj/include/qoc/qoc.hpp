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

#include "qoc/gates.hpp"
#include "qoc/grape.hpp"
#include "qoc/matrix_exp.hpp"
#include "qoc/objectives.hpp"
#include "qoc/peaks.hpp"
#include "qoc/propagation.hpp"
#include "qoc/sampling.hpp"
#include "qoc/serialize.hpp"
#include "qoc/state_sets.hpp"
#include "qoc/survey.hpp"
#include "qoc/svg.hpp"
#include "qoc/system.hpp"
