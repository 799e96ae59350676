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

#include "qhechain/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qhe {

namespace {

// Runs body(index) for every index, spread over hardware threads. Each index
// is written by exactly one thread.
template <typename Body>
void parallel_for(std::size_t count, Body body) {
    const std::size_t workers =
        std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) {
            body(k);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t k = w; k < count; k += workers) {
                        body(k);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& error : errors) {
        if (error) {
            std::rethrow_exception(error);
        }
    }
}

}  // namespace

void DisorderParams::validate() const {
    if (!(position_jitter_sigma_nm >= 0.0) || !(coupling_scale_sigma >= 0.0)) {
        throw std::domain_error("disorder sigmas must be non-negative");
    }
    if (!(readout_error >= 0.0 && readout_error < 0.5)) {
        throw std::domain_error("readout error must lie in [0, 0.5)");
    }
}

std::uint64_t replica_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t z = master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

ChainSpec sample_replica(const ChainSpec& spec, const DisorderParams& disorder, std::uint64_t seed) {
    spec.validate();
    disorder.validate();
    ChainSpec replica = spec;
    Rng rng(seed);
    if (disorder.position_jitter_sigma_nm > 0.0) {
        std::normal_distribution<double> jitter(0.0, disorder.position_jitter_sigma_nm);
        for (auto& p : replica.positions_nm) {
            p.x += jitter(rng);
            p.y += jitter(rng);
        }
    }
    if (disorder.coupling_scale_sigma > 0.0) {
        std::normal_distribution<double> scale(0.0, disorder.coupling_scale_sigma);
        double delta = scale(rng);
        while (!(delta > -0.9)) {
            delta = scale(rng);
        }
        replica.coupling_scale *= 1.0 + delta;
    }
    replica.validate();
    return replica;
}

EnsembleReport summarize(std::vector<ReplicaRecord> records) {
    EnsembleReport report;
    report.per_replica = std::move(records);
    const auto count = static_cast<double>(report.per_replica.size());
    if (report.per_replica.empty()) {
        return report;
    }
    double sum = 0.0;
    for (const auto& r : report.per_replica) {
        sum += r.value;
    }
    report.mean = sum / count;
    if (report.per_replica.size() > 1) {
        double squares = 0.0;
        for (const auto& r : report.per_replica) {
            squares += (r.value - report.mean) * (r.value - report.mean);
        }
        report.std_error = std::sqrt(squares / (count - 1.0)) / std::sqrt(count);
    }
    return report;
}

EnsembleReport run_ensemble(const Program& program, const ChainSpec& spec, const DisorderParams& disorder,
                            const ZObservable& observable, int replicas, std::uint64_t seed,
                            const NoiseParams& noise) {
    if (replicas < 1) {
        throw std::invalid_argument("ensemble needs at least one replica");
    }
    disorder.validate();
    noise.validate();
    for (int q : observable.qubits) {
        if (q < 0 || q >= spec.size()) {
            throw std::out_of_range("observable qubit outside chain");
        }
    }
    std::vector<ReplicaRecord> records(static_cast<std::size_t>(replicas));
    parallel_for(records.size(), [&](std::size_t r) {
        const auto rseed = replica_seed(seed, r);
        const ChainSpec replica = sample_replica(spec, disorder, rseed);
        RunOptions options;
        options.seed = rseed;
        options.readout_error = disorder.readout_error;
        options.noise = noise;
        const auto result = run(program, replica, options);
        records[r] = {rseed, result.final_state.expectation_z_product(observable.qubits)};
    });
    return summarize(std::move(records));
}

EnsembleReport majority_readout(const Program& state_preparer, const ChainSpec& spec, int target, int replicas,
                                double readout_error, std::uint64_t seed) {
    if (replicas < 1 || replicas % 2 == 0) {
        throw std::invalid_argument("majority readout needs an odd number of replicas");
    }
    if (target < 0 || target >= spec.size()) {
        throw std::out_of_range("readout target outside chain");
    }
    if (!(readout_error >= 0.0 && readout_error < 0.5)) {
        throw std::domain_error("readout error must lie in [0, 0.5)");
    }
    // Replicas share one deterministic preparation unless it measures.
    std::optional<StateVector> shared;
    if (!state_preparer.has_measurements()) {
        RunOptions options;
        options.seed = seed;
        shared = run(state_preparer, spec, options).final_state;
    }
    std::vector<ReplicaRecord> records(static_cast<std::size_t>(replicas));
    int votes = 0;
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto rseed = replica_seed(seed, r);
        Rng rng(rseed);
        StateVector state = shared ? *shared : [&] {
            RunOptions options;
            options.seed = rseed;
            return run(state_preparer, spec, options).final_state;
        }();
        const int value = measure_single(state, target, readout_error, rng).values.front();
        votes += value;
        records[r] = {rseed, static_cast<double>(value)};
    }
    auto report = summarize(std::move(records));
    report.majority_value = votes > 0 ? 1 : -1;
    return report;
}

}  // namespace qhe
