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

// Exact state-vector evolution: piecewise-constant Hamiltonian segments,
// instantaneous hard pulses and projective readout models.

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qhechain/model.hpp"

namespace qhe {

/// Every stochastic operation draws from an explicitly passed generator.
using Rng = std::mt19937_64;

using Axis = std::array<double, 3>;

class StateVector {
  public:
    /// The pumped state |0...0>.
    explicit StateVector(int qubits);

    /// Throws std::invalid_argument unless the amplitudes have dimension
    /// 2^qubits and unit norm to 1e-10.
    static StateVector from_amplitudes(int qubits, Eigen::VectorXcd amplitudes);
    static StateVector basis_state(int qubits, std::uint64_t index);

    int qubits() const { return qubits_; }
    std::int64_t dimension() const { return amplitudes_.size(); }
    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    Complex operator[](std::int64_t k) const { return amplitudes_[k]; }

    double norm() const { return amplitudes_.norm(); }
    /// Probability of finding qubit `target` in |1>.
    double probability_one(int target) const;
    double expectation_z(int target) const;
    /// <prod_{q in targets} Z_q>.
    double expectation_z_product(std::span<const int> targets) const;
    double expectation(const SparseOperator& op) const;
    Complex inner(const StateVector& other) const { return amplitudes_.dot(other.amplitudes_); }

    /// Raw access for in-place kernels; callers keep the norm invariant.
    Eigen::VectorXcd& mutable_amplitudes() { return amplitudes_; }

  private:
    StateVector(int qubits, Eigen::VectorXcd amplitudes);

    int qubits_ = 0;
    Eigen::VectorXcd amplitudes_;
};

/// Throws std::out_of_range unless 1 <= n <= kMaxQubits.
StateVector initialize_pumped(int n);

struct PropagatorBlock {
    std::vector<std::int64_t> basis;
    Eigen::MatrixXcd unitary;
};

/// exp(-i M dt) stored block-diagonally over the invariant subspaces of M.
struct Propagator {
    int qubits = 0;
    double duration = 0.0;
    std::uint64_t source_hash = 0;
    std::vector<PropagatorBlock> blocks;

    static Propagator identity(int qubits);

    Eigen::MatrixXcd dense() const;
    /// max |U^dagger U - I| over all blocks.
    double unitarity_error() const;
};

struct SpectralBlock {
    std::vector<std::int64_t> basis;
    Eigen::VectorXd energies;   // rad/s
    Eigen::MatrixXcd vectors;   // columns are eigenvectors
};

/// Hermitian eigendecomposition of a Hamiltonian, split into the connected
/// components of its sparsity graph. Exchange Hamiltonians conserve total
/// S_z, so the blocks are at most C(n, n/2) wide.
class Spectrum {
  public:
    Spectrum() = default;

    int qubits() const { return qubits_; }
    std::uint64_t source_hash() const { return source_hash_; }
    const std::vector<SpectralBlock>& blocks() const { return blocks_; }
    std::size_t largest_block() const;

    Propagator propagator(double dt) const;
    /// In-place exp(-i M dt) |psi> without forming the propagator.
    void evolve(StateVector& state, double dt) const;

  private:
    friend Spectrum diagonalize(const HamiltonianMatrix& h, std::uint64_t source_hash);

    int qubits_ = 0;
    std::uint64_t source_hash_ = 0;
    std::vector<SpectralBlock> blocks_;
};

/// Relative Hermiticity tolerance accepted by diagonalize().
inline constexpr double kHermiticityTolerance = 1e-12;

/// Throws std::logic_error when h is not Hermitian.
Spectrum diagonalize(const HamiltonianMatrix& h, std::uint64_t source_hash = 0);

/// U = exp(-i M dt); dt >= 0.
Propagator segment_propagator(const HamiltonianMatrix& h, double dt, std::uint64_t source_hash = 0);

StateVector apply_propagator(StateVector state, const Propagator& u);

/// exp(-i angle (axis . sigma) / 2). The axis must be a unit vector to 1e-9.
Eigen::Matrix2cd rotation_matrix(const Axis& axis, double angle);

StateVector apply_single_qubit(StateVector state, int target, const Eigen::Matrix2cd& gate);

/// Instantaneous rotation of one spin.
StateVector apply_pulse(StateVector state, int target, const Axis& axis, double angle);

enum class MeasurementKind { Single, Mask, Difference };

struct MeasurementOutcome {
    MeasurementKind kind = MeasurementKind::Single;
    std::vector<int> targets;
    /// Reported values, after readout error.
    std::vector<int> values;
    /// Eigenvalues of the projection actually applied to the state.
    std::vector<int> eigenvalues;
    StateVector post_state{1};
    /// Born probability of the applied projection.
    double probability = 1.0;
};

/// Projective sigma_z readout of one spin. The reported value is flipped
/// with probability readout_error; the post state follows the true result.
MeasurementOutcome measure_single(const StateVector& state, int target, double readout_error, Rng& rng);

/// Simultaneous sigma_z readout of a group of spins with independent
/// reporting errors.
MeasurementOutcome measure_mask(const StateVector& state, std::span<const int> targets,
                                double readout_error, Rng& rng);

/// Projective measurement of (Z_i - Z_j) / 2 with eigenvalues {-1, 0, +1}.
/// The degenerate 0 eigenspace is projected onto as a whole.
MeasurementOutcome measure_difference(const StateVector& state, int i, int j, Rng& rng);

}  // namespace qhe
