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

#include "qhechain/control.hpp"

#include <cmath>
#include <mutex>
#include <set>
#include <sstream>

namespace qhe {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string describe(const std::vector<Diagnostic>& diagnostics) {
    std::ostringstream out;
    out << "program failed validation:";
    for (const auto& d : diagnostics) {
        out << "\n  event " << d.event_index << ": " << d.message;
    }
    return out.str();
}

// Row blocks of `m` are replaced by U_block * rows, i.e. m <- U m.
void left_multiply(const Propagator& u, Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd rows;
    for (const auto& block : u.blocks) {
        const auto size = static_cast<std::int64_t>(block.basis.size());
        rows.resize(size, m.cols());
        for (std::int64_t r = 0; r < size; ++r) {
            rows.row(r) = m.row(block.basis[r]);
        }
        rows = (block.unitary * rows).eval();
        for (std::int64_t r = 0; r < size; ++r) {
            m.row(block.basis[r]) = rows.row(r);
        }
    }
}

void left_multiply(int n, int target, const Eigen::Matrix2cd& gate, Eigen::MatrixXcd& m) {
    const auto bit = qubit_bit(n, target);
    for (std::int64_t k = 0; k < m.rows(); ++k) {
        if (static_cast<std::uint64_t>(k) & bit) {
            continue;
        }
        const auto partner = static_cast<std::int64_t>(static_cast<std::uint64_t>(k) | bit);
        const Eigen::RowVectorXcd zero = m.row(k);
        const Eigen::RowVectorXcd one = m.row(partner);
        m.row(k) = gate(0, 0) * zero + gate(0, 1) * one;
        m.row(partner) = gate(1, 0) * zero + gate(1, 1) * one;
    }
}

}  // namespace

Program& Program::append(const Program& other) {
    events.insert(events.end(), other.events.begin(), other.events.end());
    return *this;
}

double Program::total_delay() const {
    double total = 0.0;
    for (const auto& event : events) {
        if (const auto* delay = std::get_if<Delay>(&event)) {
            total += delay->seconds;
        }
    }
    return total;
}

bool Program::has_measurements() const {
    for (const auto& event : events) {
        if (std::holds_alternative<MeasureSingle>(event) || std::holds_alternative<MeasureMask>(event) ||
            std::holds_alternative<MeasureDifference>(event)) {
            return true;
        }
    }
    return false;
}

ProgramError::ProgramError(std::vector<Diagnostic> diagnostics)
    : std::invalid_argument(describe(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::vector<Diagnostic> validate(const Program& program, const ChainSpec& spec) {
    std::vector<Diagnostic> out;
    const int n = spec.size();
    for (std::size_t index = 0; index < program.events.size(); ++index) {
        auto report = [&](std::string message) { out.push_back({index, std::move(message)}); };
        auto check_qubit = [&](int q, const char* role) {
            if (q < 0 || q >= n) {
                report(std::string(role) + " " + std::to_string(q) + " out of range for " +
                       std::to_string(n) + " spins");
                return false;
            }
            return true;
        };
        std::visit(Overloaded{
                       [&](const Delay& e) {
                           if (!std::isfinite(e.seconds) || e.seconds < 0.0) {
                               report("delay duration must be finite and non-negative");
                           }
                       },
                       [&](const Pulse& e) {
                           check_qubit(e.target, "pulse target");
                           const double length = std::sqrt(e.axis[0] * e.axis[0] + e.axis[1] * e.axis[1] +
                                                           e.axis[2] * e.axis[2]);
                           if (!(std::abs(length - 1.0) <= 1e-9)) {
                               report("pulse axis is not a unit vector");
                           }
                           if (!std::isfinite(e.angle)) {
                               report("pulse angle is not finite");
                           }
                       },
                       [&](const SetSwitch& e) {
                           const bool a = check_qubit(e.pair[0], "switch qubit");
                           const bool b = check_qubit(e.pair[1], "switch qubit");
                           if (a && b && e.pair[0] == e.pair[1]) {
                               report("switch pair must name two distinct spins");
                           }
                           if (!(e.factor >= 0.0 && e.factor <= 1.0)) {
                               report("switch factor must lie in [0, 1]");
                           }
                       },
                       [&](const MeasureSingle& e) { check_qubit(e.target, "measurement target"); },
                       [&](const MeasureMask& e) {
                           if (e.targets.empty()) {
                               report("mask measurement has no targets");
                           }
                           std::set<int> seen;
                           for (int q : e.targets) {
                               if (check_qubit(q, "measurement target") && !seen.insert(q).second) {
                                   report("mask measurement repeats spin " + std::to_string(q));
                               }
                           }
                       },
                       [&](const MeasureDifference& e) {
                           const bool a = check_qubit(e.i, "difference spin");
                           const bool b = check_qubit(e.j, "difference spin");
                           if (a && b && e.i == e.j) {
                               report("difference measurement needs two distinct spins");
                           }
                       },
                       [&](const InitializePumped&) {
                           if (index != 0) {
                               report("initialize may only appear as the first event");
                           }
                       },
                   },
                   program.events[index]);
    }
    return out;
}

std::shared_ptr<const Spectrum> SpectrumCache::get(const ChainSpec& spec, const SwitchMask& mask) {
    const auto key = std::make_pair(spec.fingerprint(), mask.hash());
    {
        std::shared_lock lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) {
            return it->second;
        }
    }
    auto spectrum = std::make_shared<const Spectrum>(diagonalize(build_hamiltonian(spec, mask), mask.hash()));
    std::unique_lock lock(mutex_);
    return entries_.try_emplace(key, std::move(spectrum)).first->second;
}

std::size_t SpectrumCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

RunResult run(const Program& program, const ChainSpec& spec, const RunOptions& options) {
    spec.validate();
    options.noise.validate();
    if (!(options.readout_error >= 0.0 && options.readout_error < 0.5)) {
        throw std::domain_error("readout error must lie in [0, 0.5)");
    }
    if (auto diagnostics = validate(program, spec); !diagnostics.empty()) {
        throw ProgramError(std::move(diagnostics));
    }
    const int n = spec.size();
    SpectrumCache private_cache;
    SpectrumCache& cache = options.cache ? *options.cache : private_cache;

    RunResult result;
    result.final_state = options.initial_state.value_or(initialize_pumped(n));
    if (result.final_state.qubits() != n) {
        throw std::invalid_argument("initial state size does not match chain");
    }
    result.final_mask = options.initial_mask.value_or(SwitchMask::all_on(n));
    if (result.final_mask.size() != n) {
        throw std::invalid_argument("initial switch mask size does not match chain");
    }
    Rng rng(options.seed);
    auto& state = result.final_state;
    auto& mask = result.final_mask;

    auto record = [&](MeasurementOutcome outcome) {
        state = outcome.post_state;
        result.measurement_log.push_back(std::move(outcome));
    };
    for (const auto& event : program.events) {
        std::visit(Overloaded{
                       [&](const Delay& e) {
                           if (e.seconds > 0.0) {
                               cache.get(spec, mask)->evolve(state, e.seconds);
                               if (options.noise.enabled) {
                                   state = apply_t1_channel(std::move(state), e.seconds, options.noise, rng);
                               }
                           }
                           result.total_duration += e.seconds;
                           ++result.segment_count;
                       },
                       [&](const Pulse& e) { state = apply_pulse(std::move(state), e.target, e.axis, e.angle); },
                       [&](const SetSwitch& e) { mask.set(e.pair[0], e.pair[1], e.factor); },
                       [&](const MeasureSingle& e) {
                           record(measure_single(state, e.target, options.readout_error, rng));
                       },
                       [&](const MeasureMask& e) {
                           record(measure_mask(state, e.targets, options.readout_error, rng));
                       },
                       [&](const MeasureDifference& e) { record(measure_difference(state, e.i, e.j, rng)); },
                       [&](const InitializePumped&) { state = initialize_pumped(n); },
                   },
                   event);
    }
    return result;
}

Propagator idle_unitary(const ChainSpec& spec, const SwitchMask& mask, double duration) {
    if (!(duration >= 0.0) || !std::isfinite(duration)) {
        throw std::domain_error("idle duration must be finite and non-negative");
    }
    if (duration == 0.0) {
        spec.validate();
        auto u = Propagator::identity(spec.size());
        u.source_hash = mask.hash();
        return u;
    }
    return segment_propagator(build_hamiltonian(spec, mask), duration, mask.hash());
}

Eigen::MatrixXcd program_unitary(const Program& program, const ChainSpec& spec,
                                 std::optional<SwitchMask> initial_mask) {
    spec.validate();
    if (auto diagnostics = validate(program, spec); !diagnostics.empty()) {
        throw ProgramError(std::move(diagnostics));
    }
    if (program.has_measurements()) {
        throw std::invalid_argument("program with measurements has no unitary");
    }
    const int n = spec.size();
    SwitchMask mask = initial_mask.value_or(SwitchMask::all_on(n));
    const auto dim = std::int64_t{1} << n;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& event : program.events) {
        if (const auto* delay = std::get_if<Delay>(&event)) {
            if (delay->seconds > 0.0) {
                left_multiply(idle_unitary(spec, mask, delay->seconds), u);
            }
        } else if (const auto* pulse = std::get_if<Pulse>(&event)) {
            left_multiply(n, pulse->target, rotation_matrix(pulse->axis, pulse->angle), u);
        } else if (const auto* sw = std::get_if<SetSwitch>(&event)) {
            mask.set(sw->pair[0], sw->pair[1], sw->factor);
        } else if (std::holds_alternative<InitializePumped>(event)) {
            throw std::invalid_argument("program with initialize has no unitary");
        }
    }
    return u;
}

}  // namespace qhe
