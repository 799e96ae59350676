// Copyright 2026 The qhechain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <limits>

#include "qhechain/engine.hpp"

namespace qhe {

/// Phenomenological longitudinal relaxation toward the pumped state.
struct NoiseParams {
    double t1_seconds = std::numeric_limits<double>::infinity();
    bool enabled = false;

    static NoiseParams disabled() { return {}; }
    static NoiseParams with_t1(double t1) { return {t1, true}; }

    /// Throws std::domain_error when enabled with a non-positive T1.
    void validate() const;
};

/// Per-qubit jump probability 1 - exp(-dt / T1).
double t1_jump_probability(double dt, const NoiseParams& noise);

/// One quantum-trajectory step: each qubit independently, with the jump
/// probability, is measured in sigma_z and flipped back to |0> if found in
/// |1>. Returns the state unchanged when noise is disabled.
StateVector apply_t1_channel(StateVector state, double dt, const NoiseParams& noise, Rng& rng);

}  // namespace qhe
