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

#include "qhechain/relaxation.hpp"

#include <cmath>
#include <stdexcept>

namespace qhe {

void NoiseParams::validate() const {
    if (enabled && !(t1_seconds > 0.0)) {
        throw std::domain_error("T1 must be positive when relaxation is enabled");
    }
}

double t1_jump_probability(double dt, const NoiseParams& noise) {
    noise.validate();
    if (!(dt >= 0.0)) {
        throw std::domain_error("relaxation step must be non-negative");
    }
    if (!noise.enabled || std::isinf(noise.t1_seconds)) {
        return 0.0;
    }
    return -std::expm1(-dt / noise.t1_seconds);
}

StateVector apply_t1_channel(StateVector state, double dt, const NoiseParams& noise, Rng& rng) {
    const double p = t1_jump_probability(dt, noise);
    if (!noise.enabled) {
        return state;
    }
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const Eigen::Matrix2cd flip = rotation_matrix({1.0, 0.0, 0.0}, M_PI);
    for (int q = 0; q < state.qubits(); ++q) {
        if (!(uniform(rng) < p)) {
            continue;
        }
        auto outcome = measure_single(state, q, 0.0, rng);
        state = std::move(outcome.post_state);
        if (outcome.eigenvalues.front() == -1) {
            state = apply_single_qubit(std::move(state), q, flip);
        }
    }
    return state;
}

}  // namespace qhe
