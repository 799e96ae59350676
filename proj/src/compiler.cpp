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

#include "qhechain/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

namespace qhe {

namespace {

constexpr Axis kAxisY{0.0, 1.0, 0.0};
constexpr Axis kAxisZ{0.0, 0.0, 1.0};

std::uint64_t local_index(std::uint64_t basis, int n, std::span<const int> qubits) {
    std::uint64_t local = 0;
    for (int q : qubits) {
        local = (local << 1) | ((basis & qubit_bit(n, q)) ? 1 : 0);
    }
    return local;
}

// Turns off every coupled pair except `keep`; returns the pairs touched.
std::vector<std::array<int, 2>> isolate_pair(const ChainSpec& spec, std::array<int, 2> keep, Program& program) {
    std::vector<std::array<int, 2>> touched;
    const auto lo = std::min(keep[0], keep[1]);
    const auto hi = std::max(keep[0], keep[1]);
    for (int i = 0; i < spec.size(); ++i) {
        for (int j = i + 1; j < spec.size(); ++j) {
            if ((i == lo && j == hi) || spec.pair_coupling(i, j) == 0.0) {
                continue;
            }
            program.add(SetSwitch{{i, j}, 0.0});
            touched.push_back({i, j});
        }
    }
    return touched;
}

void restore_pairs(const std::vector<std::array<int, 2>>& touched, Program& program) {
    for (const auto& pair : touched) {
        program.add(SetSwitch{pair, 1.0});
    }
}

// Unitary of a measurement-free program computed by pushing every basis
// state through the interpreter. Independent of program_unitary(), which
// composes idle_unitary propagators.
Eigen::MatrixXcd interpreted_unitary(const Program& program, const ChainSpec& spec, SpectrumCache& cache) {
    const int n = spec.size();
    const auto dim = std::int64_t{1} << n;
    Eigen::MatrixXcd u(dim, dim);
    RunOptions options;
    options.cache = &cache;
    for (std::int64_t col = 0; col < dim; ++col) {
        options.initial_state = StateVector::basis_state(n, static_cast<std::uint64_t>(col));
        u.col(col) = run(program, spec, options).final_state.amplitudes();
    }
    return u;
}

struct Objective {
    std::function<double(std::span<const double>)> evaluate;
    int max_evaluations = 0;
    int evaluations = 0;
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<double> best_point;

    double operator()(std::span<const double> x) {
        if (evaluations >= max_evaluations) {
            return 2.0;  // above any infidelity
        }
        ++evaluations;
        const double value = evaluate(x);
        if (value < best_value) {
            best_value = value;
            best_point.assign(x.begin(), x.end());
        }
        return value;
    }

    bool exhausted() const { return evaluations >= max_evaluations; }
};

double gsl_trampoline(const gsl_vector* x, void* context) {
    auto& objective = *static_cast<Objective*>(context);
    return objective(std::span<const double>(x->data, x->size));
}

struct GslMinimizer {
    explicit GslMinimizer(std::size_t dim)
        : state(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim)),
          start(gsl_vector_alloc(dim)),
          steps(gsl_vector_alloc(dim)) {}
    ~GslMinimizer() {
        gsl_multimin_fminimizer_free(state);
        gsl_vector_free(start);
        gsl_vector_free(steps);
    }
    GslMinimizer(const GslMinimizer&) = delete;
    GslMinimizer& operator=(const GslMinimizer&) = delete;

    gsl_multimin_fminimizer* state;
    gsl_vector* start;
    gsl_vector* steps;
};

// One Nelder-Mead descent from x0; returns the iterations taken.
int descend(Objective& objective, const std::vector<double>& x0, double step) {
    const std::size_t dim = x0.size();
    if (objective.max_evaluations - objective.evaluations < static_cast<int>(dim) + 1) {
        return 0;
    }
    GslMinimizer minimizer(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        gsl_vector_set(minimizer.start, k, x0[k]);
        gsl_vector_set(minimizer.steps, k, step);
    }
    gsl_multimin_function function{&gsl_trampoline, dim, &objective};
    gsl_multimin_fminimizer_set(minimizer.state, &function, minimizer.start, minimizer.steps);
    int iterations = 0;
    while (!objective.exhausted()) {
        ++iterations;
        if (gsl_multimin_fminimizer_iterate(minimizer.state) != GSL_SUCCESS) {
            break;
        }
        if (minimizer.state->fval < 1e-15) {
            break;
        }
        const double size = gsl_multimin_fminimizer_size(minimizer.state);
        if (gsl_multimin_test_size(size, 1e-9) == GSL_SUCCESS) {
            break;
        }
    }
    return iterations;
}

Axis normalized_axis(const Axis& axis) {
    const double length = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (!(length > 0.0)) {
        throw std::invalid_argument("pulse axis must be non-zero");
    }
    return {axis[0] / length, axis[1] / length, axis[2] / length};
}

}  // namespace

double gate_fidelity(const Eigen::MatrixXcd& target, const Eigen::MatrixXcd& achieved) {
    if (target.rows() != achieved.rows() || target.cols() != achieved.cols() || target.rows() != target.cols()) {
        throw std::invalid_argument("fidelity needs square matrices of equal size");
    }
    const Complex overlap = (target.adjoint() * achieved).trace();
    return std::abs(overlap) / static_cast<double>(target.rows());
}

void TargetUnitary::validate(int chain_size) const {
    const auto k = static_cast<int>(qubits.size());
    if (k < 1 || k > 3) {
        throw std::invalid_argument("target unitaries act on 1 to 3 spins");
    }
    if (matrix.rows() != (1 << k) || matrix.cols() != (1 << k)) {
        throw std::invalid_argument("target matrix dimension does not match its qubit list");
    }
    std::set<int> seen;
    for (int q : qubits) {
        if (q < 0 || q >= chain_size) {
            throw std::out_of_range("target qubit " + std::to_string(q) + " outside chain");
        }
        if (!seen.insert(q).second) {
            throw std::invalid_argument("target qubits must be distinct");
        }
    }
    const auto defect = (matrix.adjoint() * matrix - Eigen::MatrixXcd::Identity(1 << k, 1 << k)).cwiseAbs().maxCoeff();
    if (defect >= 1e-12) {
        throw std::invalid_argument("target matrix is not unitary");
    }
}

Eigen::MatrixXcd embed_unitary(const TargetUnitary& target, int n) {
    target.validate(n);
    std::uint64_t target_bits = 0;
    for (int q : target.qubits) {
        target_bits |= qubit_bit(n, q);
    }
    const auto dim = std::int64_t{1} << n;
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::int64_t row = 0; row < dim; ++row) {
        for (std::int64_t col = 0; col < dim; ++col) {
            const auto r = static_cast<std::uint64_t>(row);
            const auto c = static_cast<std::uint64_t>(col);
            if ((r & ~target_bits) != (c & ~target_bits)) {
                continue;
            }
            full(row, col) = target.matrix(static_cast<std::int64_t>(local_index(r, n, target.qubits)),
                                           static_cast<std::int64_t>(local_index(c, n, target.qubits)));
        }
    }
    return full;
}

namespace gates {

Eigen::MatrixXcd identity(int qubits) {
    return Eigen::MatrixXcd::Identity(1 << qubits, 1 << qubits);
}

Eigen::MatrixXcd iswap() {
    const Complex i_unit{0.0, 1.0};
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 0) = 1.0;
    m(2, 1) = i_unit;
    m(1, 2) = i_unit;
    m(3, 3) = 1.0;
    return m;
}

Eigen::MatrixXcd cnot() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(3, 2) = 1.0;
    m(2, 3) = 1.0;
    return m;
}

Eigen::MatrixXcd swap() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 0) = 1.0;
    m(2, 1) = 1.0;
    m(1, 2) = 1.0;
    m(3, 3) = 1.0;
    return m;
}

Eigen::MatrixXcd rx(double angle) {
    return rotation_matrix({1.0, 0.0, 0.0}, angle);
}

}  // namespace gates

Program zeeman_corrections(const ChainSpec& spec, double elapsed) {
    Program program;
    for (int j = 0; j < spec.size(); ++j) {
        const double angle = 2.0 * spec.larmor(j) * elapsed;
        if (angle != 0.0) {
            program.add(Pulse{j, kAxisZ, angle});
        }
    }
    return program;
}

SynthesisResult calibrate_iswap(const ChainSpec& spec, std::array<int, 2> pair) {
    spec.validate();
    if (pair[0] == pair[1] || pair[0] < 0 || pair[1] < 0 || pair[0] >= spec.size() || pair[1] >= spec.size()) {
        throw std::out_of_range("iSWAP pair must name two spins of the chain");
    }
    const double coupling = spec.pair_coupling(pair[0], pair[1]);
    if (!(coupling > 0.0)) {
        throw std::invalid_argument("pair is not coupled; iSWAP is not synthesizable");
    }
    const double duration = M_PI / (2.0 * coupling);

    SynthesisResult result;
    result.program.name = "iswap";
    result.program.description = "calibrated iSWAP on spins " + std::to_string(pair[0]) + "," +
                                 std::to_string(pair[1]);
    const auto touched = isolate_pair(spec, pair, result.program);
    result.program.add(Delay{duration});
    restore_pairs(touched, result.program);
    result.program.append(zeeman_corrections(spec, duration));

    const TargetUnitary target{gates::iswap(), {pair[0], pair[1]}};
    result.fidelity = gate_fidelity(embed_unitary(target, spec.size()), program_unitary(result.program, spec));
    result.objective_fidelity = result.fidelity;
    result.converged = 1.0 - result.fidelity < kConvergedInfidelity;
    if (!result.converged) {
        result.warnings.push_back("Larmor detuning spoils the closed-form iSWAP; use synthesize()");
    }
    return result;
}

Program refocus_pair(const ChainSpec& spec, std::array<int, 2> pair, double tau, int pulsed_spin) {
    spec.validate();
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::domain_error("refocusing interval must be positive");
    }
    if (pulsed_spin < 0) {
        pulsed_spin = pair[0];
    }
    if (pulsed_spin != pair[0] && pulsed_spin != pair[1]) {
        throw std::invalid_argument("refocusing pulse must hit one spin of the pair");
    }
    Program program;
    program.name = "refocus";
    program.add(Delay{tau})
        .add(Pulse{pulsed_spin, kAxisZ, M_PI})
        .add(Delay{tau})
        .add(Pulse{pulsed_spin, kAxisZ, -M_PI});
    program.append(zeeman_corrections(spec, 2.0 * tau));
    return program;
}

SynthesisResult idle_identity(const ChainSpec& spec, double tau) {
    spec.validate();
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::domain_error("idle duration must be positive");
    }
    const int n = spec.size();
    SynthesisResult result;
    result.program.name = "idle";
    result.program.add(Delay{0.5 * tau});
    for (int j = 0; j < n; j += 2) {
        result.program.add(Pulse{j, kAxisZ, M_PI});
    }
    result.program.add(Delay{0.5 * tau});
    for (int j = 0; j < n; j += 2) {
        result.program.add(Pulse{j, kAxisZ, -M_PI});
    }
    result.program.append(zeeman_corrections(spec, tau));

    for (int i = 0; i < n; ++i) {
        for (int j = i + 2; j < n; j += 2) {
            if (spec.pair_coupling(i, j) > 0.0) {
                result.warnings.push_back("residual coupling: same-parity pair (" + std::to_string(i) + "," +
                                          std::to_string(j) + ") is not refocused");
            }
        }
    }
    result.fidelity = gate_fidelity(gates::identity(n), program_unitary(result.program, spec));
    result.objective_fidelity = result.fidelity;
    result.converged = 1.0 - result.fidelity < kConvergedInfidelity;
    return result;
}

void ProgramTemplate::validate() const {
    if (initial.size() != parameters.size()) {
        throw std::invalid_argument("template needs one initial value per parameter");
    }
    for (const auto& binding : parameters) {
        if (binding.event_index >= base.events.size()) {
            throw std::out_of_range("template parameter bound past the end of the program");
        }
        const auto& event = base.events[binding.event_index];
        const bool ok = binding.field == ParameterBinding::Field::Duration ? std::holds_alternative<Delay>(event)
                                                                            : std::holds_alternative<Pulse>(event);
        if (!ok) {
            throw std::invalid_argument("template parameter bound to an event of the wrong type");
        }
    }
}

Program ProgramTemplate::instantiate(std::span<const double> values) const {
    if (values.size() != parameters.size()) {
        throw std::invalid_argument("wrong number of template parameters");
    }
    Program program = base;
    for (std::size_t k = 0; k < parameters.size(); ++k) {
        const auto& binding = parameters[k];
        auto& event = program.events.at(binding.event_index);
        if (binding.field == ParameterBinding::Field::Duration) {
            std::get<Delay>(event).seconds = std::abs(values[k]) * binding.scale;
        } else {
            std::get<Pulse>(event).angle = values[k] * binding.scale;
        }
    }
    return program;
}

SynthesisResult synthesize(const ChainSpec& spec, const TargetUnitary& target, const ProgramTemplate& templ,
                           const SynthesisBudget& budget) {
    spec.validate();
    templ.validate();
    if (budget.max_evaluations < 1 || budget.max_restarts < 0) {
        throw std::invalid_argument("synthesis budget must allow at least one evaluation");
    }
    const Eigen::MatrixXcd wanted = embed_unitary(target, spec.size());
    SpectrumCache cache;

    Objective objective;
    objective.max_evaluations = budget.max_evaluations;
    objective.evaluate = [&](std::span<const double> x) {
        const Program program = templ.instantiate(x);
        return 1.0 - gate_fidelity(wanted, interpreted_unitary(program, spec, cache));
    };

    SynthesisResult result;
    objective(templ.initial);
    if (!templ.parameters.empty()) {
        Rng rng(budget.seed);
        std::uniform_real_distribution<double> jitter(-M_PI, M_PI);
        for (int restart = 0; restart <= budget.max_restarts && !objective.exhausted(); ++restart) {
            std::vector<double> x0 = templ.initial;
            if (restart % 2 == 1) {
                // Polish from the best point with a fresh simplex.
                x0 = objective.best_point;
            } else if (restart > 0) {
                for (auto& value : x0) {
                    value += jitter(rng);
                }
            }
            const double step = restart % 2 == 1 ? 0.05 : 0.5;
            result.iterations += descend(objective, x0, step);
            if (objective.best_value < kConvergedInfidelity && restart % 2 == 1) {
                break;
            }
        }
    }

    result.program = templ.instantiate(objective.best_point);
    if (result.program.name.empty()) {
        result.program.name = "synthesized";
    }
    result.evaluations = objective.evaluations;
    result.objective_fidelity = 1.0 - objective.best_value;
    result.fidelity = gate_fidelity(wanted, program_unitary(result.program, spec));
    result.converged = 1.0 - result.fidelity < kConvergedInfidelity;
    if (std::abs(result.fidelity - result.objective_fidelity) > 1e-9) {
        result.warnings.push_back("optimizer objective disagrees with recomputed fidelity");
    }
    if (!result.converged && objective.exhausted()) {
        result.warnings.push_back("evaluation budget exhausted");
    }
    return result;
}

ProgramTemplate single_pulse_template(int target, const Axis& axis, double initial_angle) {
    ProgramTemplate templ;
    templ.base.name = "single-pulse";
    templ.base.add(Pulse{target, normalized_axis(axis), initial_angle});
    templ.parameters.push_back({0, ParameterBinding::Field::Angle, 1.0});
    templ.initial.push_back(initial_angle);
    return templ;
}

ProgramTemplate layered_template(const ChainSpec& spec, std::array<int, 2> qubits, int entangling_delays) {
    spec.validate();
    if (entangling_delays < 0) {
        throw std::invalid_argument("entangling delay count must be non-negative");
    }
    const double coupling = spec.pair_coupling(qubits[0], qubits[1]);
    if (entangling_delays > 0 && !(coupling > 0.0)) {
        throw std::invalid_argument("pair is not coupled; entangling delays have no effect");
    }
    ProgramTemplate templ;
    auto& program = templ.base;
    program.name = "layered";
    const auto touched = isolate_pair(spec, qubits, program);

    auto add_angle = [&](int target, const Axis& axis) {
        templ.parameters.push_back({program.events.size(), ParameterBinding::Field::Angle, 1.0});
        templ.initial.push_back(0.0);
        program.add(Pulse{target, axis, 0.0});
    };
    auto add_local_layer = [&] {
        for (int q : qubits) {
            add_angle(q, kAxisZ);
            add_angle(q, kAxisY);
            add_angle(q, kAxisZ);
        }
    };
    add_local_layer();
    for (int d = 0; d < entangling_delays; ++d) {
        templ.parameters.push_back({program.events.size(), ParameterBinding::Field::Duration, 1.0 / coupling});
        templ.initial.push_back(M_PI / 2.0);
        program.add(Delay{M_PI / (2.0 * coupling)});
        add_local_layer();
    }
    restore_pairs(touched, program);
    for (int j = 0; j < spec.size(); ++j) {
        if (j != qubits[0] && j != qubits[1]) {
            add_angle(j, kAxisZ);
        }
    }
    return templ;
}

}  // namespace qhe
