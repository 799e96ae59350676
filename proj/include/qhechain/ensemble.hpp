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

// Replica ensembles: per-replica disorder, NMR-style expectation averaging
// and single-shot majority readout.

#include <cstdint>
#include <optional>
#include <vector>

#include "qhechain/control.hpp"
#include "qhechain/relaxation.hpp"

namespace qhe {

struct DisorderParams {
    /// Isotropic Gaussian displacement of every spin, per replica.
    double position_jitter_sigma_nm = 0.0;
    /// Relative sigma of the replica-wide coupling factor 1 + delta, with
    /// delta truncated to delta > -0.9.
    double coupling_scale_sigma = 0.0;
    double readout_error = 0.0;

    void validate() const;
};

/// Product of sigma_z over `qubits`.
struct ZObservable {
    std::vector<int> qubits;
};

struct ReplicaRecord {
    std::uint64_t seed = 0;
    double value = 0.0;
};

struct EnsembleReport {
    std::vector<ReplicaRecord> per_replica;
    double mean = 0.0;
    /// Sample standard deviation over sqrt(R); zero for a single replica.
    double std_error = 0.0;
    std::optional<int> majority_value;
};

/// Seed of replica `index` derived from the master seed (splitmix64).
std::uint64_t replica_seed(std::uint64_t master_seed, std::uint64_t index);

/// Perturbed copy of `spec`; deterministic in `seed`.
ChainSpec sample_replica(const ChainSpec& spec, const DisorderParams& disorder, std::uint64_t seed);

/// Mean and standard error of the recorded values.
EnsembleReport summarize(std::vector<ReplicaRecord> records);

/// Runs the program on R disordered replicas and averages the exact
/// expectation of the observable in each final state.
EnsembleReport run_ensemble(const Program& program, const ChainSpec& spec, const DisorderParams& disorder,
                            const ZObservable& observable, int replicas, std::uint64_t seed,
                            const NoiseParams& noise = {});

/// One noisy single-shot sigma_z readout of `target` per replica, combined
/// by majority vote. R must be odd.
EnsembleReport majority_readout(const Program& state_preparer, const ChainSpec& spec, int target, int replicas,
                                double readout_error, std::uint64_t seed);

}  // namespace qhe
