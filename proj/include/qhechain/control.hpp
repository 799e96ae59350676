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

// The machine's instruction set and its deterministic interpreter.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qhechain/engine.hpp"
#include "qhechain/relaxation.hpp"

namespace qhe {

/// Free evolution under the always-on Hamiltonian of the current mask.
struct Delay {
    double seconds = 0.0;
    bool operator==(const Delay&) const = default;
};

/// Instantaneous rotation exp(-i angle (axis . sigma) / 2) of one spin.
struct Pulse {
    int target = 0;
    Axis axis{1.0, 0.0, 0.0};
    double angle = 0.0;
    bool operator==(const Pulse&) const = default;
};

/// Sets the switch factor of one pair for every later delay.
struct SetSwitch {
    std::array<int, 2> pair{0, 1};
    double factor = 1.0;
    bool operator==(const SetSwitch&) const = default;
};

struct MeasureSingle {
    int target = 0;
    bool operator==(const MeasureSingle&) const = default;
};

struct MeasureMask {
    std::vector<int> targets;
    bool operator==(const MeasureMask&) const = default;
};

struct MeasureDifference {
    int i = 0;
    int j = 1;
    bool operator==(const MeasureDifference&) const = default;
};

struct InitializePumped {
    bool operator==(const InitializePumped&) const = default;
};

using ControlEvent =
    std::variant<Delay, Pulse, SetSwitch, MeasureSingle, MeasureMask, MeasureDifference, InitializePumped>;

struct Program {
    std::string name;
    std::string description;
    std::vector<ControlEvent> events;

    Program& add(ControlEvent event) {
        events.push_back(std::move(event));
        return *this;
    }
    /// Appends all events of `other`.
    Program& append(const Program& other);

    double total_delay() const;
    bool has_measurements() const;

    bool operator==(const Program&) const = default;
};

struct Diagnostic {
    std::size_t event_index = 0;
    std::string message;
};

/// Empty iff every event is well formed for the chain.
std::vector<Diagnostic> validate(const Program& program, const ChainSpec& spec);

/// Thrown by run() when validation fails; carries the diagnostics.
class ProgramError : public std::invalid_argument {
  public:
    explicit ProgramError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

  private:
    std::vector<Diagnostic> diagnostics_;
};

/// Spectra of segment Hamiltonians keyed by (chain fingerprint, mask hash).
/// Lookups are shared, insertion is exclusive.
class SpectrumCache {
  public:
    std::shared_ptr<const Spectrum> get(const ChainSpec& spec, const SwitchMask& mask);
    std::size_t size() const;

  private:
    mutable std::shared_mutex mutex_;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::shared_ptr<const Spectrum>> entries_;
};

struct RunOptions {
    std::uint64_t seed = 0;
    double readout_error = 0.0;
    NoiseParams noise;
    /// Starting state; the pumped state when absent.
    std::optional<StateVector> initial_state;
    /// Switch factors at program start; all on when absent.
    std::optional<SwitchMask> initial_mask;
    /// Optional shared cache; a private one is used when null.
    SpectrumCache* cache = nullptr;
};

struct RunResult {
    StateVector final_state{1};
    std::vector<MeasurementOutcome> measurement_log;
    double total_duration = 0.0;
    int segment_count = 0;
    SwitchMask final_mask;
};

/// Executes the program event by event. Throws ProgramError before any
/// evolution when validation fails.
RunResult run(const Program& program, const ChainSpec& spec, const RunOptions& options = {});

/// The propagator a Delay of `duration` applies under `mask`.
Propagator idle_unitary(const ChainSpec& spec, const SwitchMask& mask, double duration);

/// Full 2^n unitary implemented by a measurement-free program, composed from
/// idle_unitary segments and pulse rotations.
Eigen::MatrixXcd program_unitary(const Program& program, const ChainSpec& spec,
                                 std::optional<SwitchMask> initial_mask = std::nullopt);

}  // namespace qhe
