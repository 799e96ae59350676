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

// Gate synthesis on hardware with always-on XY couplings: closed-form
// iSWAP calibration, refocusing sequences that idle as the identity, and a
// derivative-free fidelity optimizer over parameterized programs.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qhechain/control.hpp"

namespace qhe {

/// |Tr(U^dagger V)| / dim. Equal to 1 iff U = e^{i phi} V.
double gate_fidelity(const Eigen::MatrixXcd& target, const Eigen::MatrixXcd& achieved);

/// A k-qubit unitary (k = 1..3) acting on the listed chain spins; the first
/// listed spin is the most significant bit of `matrix`.
struct TargetUnitary {
    Eigen::MatrixXcd matrix;
    std::vector<int> qubits;

    void validate(int chain_size) const;
};

/// target (x) identity on the rest of an n-spin chain.
Eigen::MatrixXcd embed_unitary(const TargetUnitary& target, int n);

namespace gates {
Eigen::MatrixXcd identity(int qubits);
Eigen::MatrixXcd iswap();
Eigen::MatrixXcd cnot();
Eigen::MatrixXcd swap();
Eigen::MatrixXcd rx(double angle);
}  // namespace gates

/// Infidelity below which a synthesis counts as converged.
inline constexpr double kConvergedInfidelity = 1e-6;

struct SynthesisResult {
    Program program;
    /// Recomputed from scratch from the emitted program.
    double fidelity = 0.0;
    /// The optimizer's own best objective, kept for cross-checking.
    double objective_fidelity = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::vector<std::string> warnings;
};

/// z rotations of angle 2 w_j t that undo the Zeeman phase accumulated by
/// every spin over `elapsed` seconds of free evolution.
Program zeeman_corrections(const ChainSpec& spec, double elapsed);

/// Delay of pi / (2 J) with only `pair` switched on, followed by Zeeman
/// corrections. Exact iSWAP when the pair's Larmor frequencies agree;
/// otherwise the result is flagged as not converged. Throws
/// std::invalid_argument when the pair does not couple.
SynthesisResult calibrate_iswap(const ChainSpec& spec, std::array<int, 2> pair);

/// Delay(tau), R_z(pi), Delay(tau), R_z(-pi) on one spin of the pair, then
/// Zeeman corrections. `pulsed_spin` defaults to pair[0].
Program refocus_pair(const ChainSpec& spec, std::array<int, 2> pair, double tau, int pulsed_spin = -1);

/// Alternating-parity refocusing of a whole chain over total time tau:
/// R_z(pi) on every even spin between two tau/2 halves. Exact for
/// nearest-neighbour couplings; warns when same-parity pairs couple.
SynthesisResult idle_identity(const ChainSpec& spec, double tau);

/// A free real parameter of a template, bound to one event field.
struct ParameterBinding {
    enum class Field { Duration, Angle };

    std::size_t event_index = 0;
    Field field = Field::Angle;
    /// Physical value = scale * parameter (durations use |parameter|).
    double scale = 1.0;
};

struct ProgramTemplate {
    Program base;
    std::vector<ParameterBinding> parameters;
    std::vector<double> initial;

    Program instantiate(std::span<const double> values) const;
    void validate() const;
};

struct SynthesisBudget {
    int max_evaluations = 300000;
    int max_restarts = 60;
    std::uint64_t seed = 1;
};

/// Maximizes gate fidelity over the template parameters by multi-start
/// Nelder-Mead. Deterministic for a given (seed, budget).
SynthesisResult synthesize(const ChainSpec& spec, const TargetUnitary& target, const ProgramTemplate& templ,
                           const SynthesisBudget& budget = {});

/// One pulse on `target` about `axis` with a free angle.
ProgramTemplate single_pulse_template(int target, const Axis& axis, double initial_angle = 0.0);

/// Local ZYZ layers on `qubits` interleaved with `entangling_delays` free
/// delays (in units of 1/J of the pair). Couplings outside the pair are
/// switched off for the duration and restored afterwards; spectator spins
/// receive free z corrections.
ProgramTemplate layered_template(const ChainSpec& spec, std::array<int, 2> qubits, int entangling_delays);

}  // namespace qhe
