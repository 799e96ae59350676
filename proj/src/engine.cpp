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

#include "qhechain/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qhe {

namespace {

constexpr double kNormTolerance = 1e-10;

void check_qubit_count(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw std::out_of_range("qubit count " + std::to_string(n) + " outside [1, " +
                                std::to_string(kMaxQubits) + "]");
    }
}

void check_target(const StateVector& state, int target) {
    if (target < 0 || target >= state.qubits()) {
        throw std::out_of_range("qubit " + std::to_string(target) + " outside register of " +
                                std::to_string(state.qubits()));
    }
}

void check_readout_error(double eps) {
    if (!(eps >= 0.0 && eps < 0.5)) {
        throw std::domain_error("readout error must lie in [0, 0.5)");
    }
}

double uniform(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

class UnionFind {
  public:
    explicit UnionFind(std::int64_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::int64_t find(std::int64_t a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }

    void unite(std::int64_t a, std::int64_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

  private:
    std::vector<std::int64_t> parent_;
};

// Keeps only the amplitudes selected by `keep`, renormalizes, and returns the
// discarded-complement probability.
template <typename Predicate>
double project(Eigen::VectorXcd& amplitudes, Predicate keep) {
    double weight = 0.0;
    for (std::int64_t k = 0; k < amplitudes.size(); ++k) {
        if (keep(static_cast<std::uint64_t>(k))) {
            weight += std::norm(amplitudes[k]);
        } else {
            amplitudes[k] = 0.0;
        }
    }
    if (weight > 0.0) {
        amplitudes /= std::sqrt(weight);
    }
    return weight;
}

}  // namespace

StateVector::StateVector(int qubits) : qubits_(qubits) {
    check_qubit_count(qubits);
    amplitudes_ = Eigen::VectorXcd::Zero(std::int64_t{1} << qubits);
    amplitudes_[0] = 1.0;
}

StateVector::StateVector(int qubits, Eigen::VectorXcd amplitudes)
    : qubits_(qubits), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::from_amplitudes(int qubits, Eigen::VectorXcd amplitudes) {
    check_qubit_count(qubits);
    if (amplitudes.size() != (std::int64_t{1} << qubits)) {
        throw std::invalid_argument("amplitude vector has wrong dimension");
    }
    if (std::abs(amplitudes.norm() - 1.0) > kNormTolerance) {
        throw std::invalid_argument("amplitude vector is not normalized");
    }
    return StateVector(qubits, std::move(amplitudes));
}

StateVector StateVector::basis_state(int qubits, std::uint64_t index) {
    StateVector state(qubits);
    if (index >= static_cast<std::uint64_t>(state.dimension())) {
        throw std::out_of_range("basis index outside register");
    }
    state.amplitudes_[0] = 0.0;
    state.amplitudes_[static_cast<std::int64_t>(index)] = 1.0;
    return state;
}

double StateVector::probability_one(int target) const {
    check_target(*this, target);
    const auto bit = qubit_bit(qubits_, target);
    double p = 0.0;
    for (std::int64_t k = 0; k < amplitudes_.size(); ++k) {
        if (static_cast<std::uint64_t>(k) & bit) {
            p += std::norm(amplitudes_[k]);
        }
    }
    return p;
}

double StateVector::expectation_z(int target) const {
    return 1.0 - 2.0 * probability_one(target);
}

double StateVector::expectation_z_product(std::span<const int> targets) const {
    std::uint64_t bits = 0;
    for (int t : targets) {
        check_target(*this, t);
        bits ^= qubit_bit(qubits_, t);
    }
    double value = 0.0;
    for (std::int64_t k = 0; k < amplitudes_.size(); ++k) {
        const int parity = std::popcount(static_cast<std::uint64_t>(k) & bits) & 1;
        value += (parity ? -1.0 : 1.0) * std::norm(amplitudes_[k]);
    }
    return value;
}

double StateVector::expectation(const SparseOperator& op) const {
    if (op.rows() != dimension() || op.cols() != dimension()) {
        throw std::invalid_argument("operator dimension does not match state");
    }
    const Eigen::VectorXcd image = op * amplitudes_;
    return amplitudes_.dot(image).real();
}

StateVector initialize_pumped(int n) {
    check_qubit_count(n);
    return StateVector(n);
}

Propagator Propagator::identity(int qubits) {
    check_qubit_count(qubits);
    Propagator u;
    u.qubits = qubits;
    const auto dim = std::int64_t{1} << qubits;
    u.blocks.reserve(dim);
    for (std::int64_t k = 0; k < dim; ++k) {
        u.blocks.push_back({{k}, Eigen::MatrixXcd::Identity(1, 1)});
    }
    return u;
}

Eigen::MatrixXcd Propagator::dense() const {
    const auto dim = std::int64_t{1} << qubits;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& block : blocks) {
        const auto m = static_cast<std::int64_t>(block.basis.size());
        for (std::int64_t r = 0; r < m; ++r) {
            for (std::int64_t c = 0; c < m; ++c) {
                out(block.basis[r], block.basis[c]) = block.unitary(r, c);
            }
        }
    }
    return out;
}

double Propagator::unitarity_error() const {
    double worst = 0.0;
    for (const auto& block : blocks) {
        const auto m = block.unitary.rows();
        const Eigen::MatrixXcd defect = block.unitary.adjoint() * block.unitary - Eigen::MatrixXcd::Identity(m, m);
        worst = std::max(worst, defect.cwiseAbs().maxCoeff());
    }
    return worst;
}

std::size_t Spectrum::largest_block() const {
    std::size_t widest = 0;
    for (const auto& block : blocks_) {
        widest = std::max(widest, block.basis.size());
    }
    return widest;
}

Propagator Spectrum::propagator(double dt) const {
    if (!(dt >= 0.0) || !std::isfinite(dt)) {
        throw std::domain_error("segment duration must be finite and non-negative");
    }
    Propagator u;
    u.qubits = qubits_;
    u.duration = dt;
    u.source_hash = source_hash_;
    u.blocks.reserve(blocks_.size());
    for (const auto& block : blocks_) {
        const Eigen::VectorXcd phases =
            (block.energies * Complex(0.0, -dt)).array().exp().matrix();
        u.blocks.push_back({block.basis, block.vectors * phases.asDiagonal() * block.vectors.adjoint()});
    }
    return u;
}

void Spectrum::evolve(StateVector& state, double dt) const {
    if (state.qubits() != qubits_) {
        throw std::invalid_argument("state and Hamiltonian sizes differ");
    }
    if (!(dt >= 0.0) || !std::isfinite(dt)) {
        throw std::domain_error("segment duration must be finite and non-negative");
    }
    auto& amplitudes = state.mutable_amplitudes();
    Eigen::VectorXcd local;
    for (const auto& block : blocks_) {
        const auto m = static_cast<std::int64_t>(block.basis.size());
        if (m == 1) {
            amplitudes[block.basis[0]] *= std::exp(Complex(0.0, -dt * block.energies[0]));
            continue;
        }
        local.resize(m);
        for (std::int64_t r = 0; r < m; ++r) {
            local[r] = amplitudes[block.basis[r]];
        }
        Eigen::VectorXcd coefficients = block.vectors.adjoint() * local;
        for (std::int64_t r = 0; r < m; ++r) {
            coefficients[r] *= std::exp(Complex(0.0, -dt * block.energies[r]));
        }
        local.noalias() = block.vectors * coefficients;
        for (std::int64_t r = 0; r < m; ++r) {
            amplitudes[block.basis[r]] = local[r];
        }
    }
}

Spectrum diagonalize(const HamiltonianMatrix& h, std::uint64_t source_hash) {
    check_qubit_count(h.qubits);
    const auto dim = h.dimension();
    if (h.matrix.rows() != dim || h.matrix.cols() != dim) {
        throw std::invalid_argument("Hamiltonian dimension does not match qubit count");
    }
    const double scale = h.max_abs();
    if (h.hermiticity_error() > kHermiticityTolerance * std::max(scale, 1e-300)) {
        throw std::logic_error("segment Hamiltonian is not Hermitian");
    }

    UnionFind components(dim);
    for (int k = 0; k < h.matrix.outerSize(); ++k) {
        for (SparseOperator::InnerIterator it(h.matrix, k); it; ++it) {
            if (it.row() != it.col() && it.value() != Complex(0.0)) {
                components.unite(it.row(), it.col());
            }
        }
    }
    std::vector<std::int64_t> block_of(dim, -1);
    Spectrum spectrum;
    spectrum.qubits_ = h.qubits;
    spectrum.source_hash_ = source_hash;
    for (std::int64_t b = 0; b < dim; ++b) {
        const auto root = components.find(b);
        if (block_of[root] < 0) {
            block_of[root] = static_cast<std::int64_t>(spectrum.blocks_.size());
            spectrum.blocks_.emplace_back();
        }
        spectrum.blocks_[block_of[root]].basis.push_back(b);
    }

    std::vector<std::int64_t> position(dim);
    for (auto& block : spectrum.blocks_) {
        const auto m = static_cast<std::int64_t>(block.basis.size());
        for (std::int64_t r = 0; r < m; ++r) {
            position[block.basis[r]] = r;
        }
        Eigen::MatrixXcd local = Eigen::MatrixXcd::Zero(m, m);
        for (std::int64_t r = 0; r < m; ++r) {
            for (SparseOperator::InnerIterator it(h.matrix, block.basis[r]); it; ++it) {
                local(r, position[it.col()]) = it.value();
            }
        }
        if (m == 1) {
            block.energies = Eigen::VectorXd::Constant(1, local(0, 0).real());
            block.vectors = Eigen::MatrixXcd::Identity(1, 1);
            continue;
        }
        // Symmetrize so the solver sees an exactly Hermitian input.
        local = (0.5 * (local + local.adjoint())).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(local);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("Hermitian eigendecomposition did not converge");
        }
        block.energies = solver.eigenvalues();
        block.vectors = solver.eigenvectors();
    }
    return spectrum;
}

Propagator segment_propagator(const HamiltonianMatrix& h, double dt, std::uint64_t source_hash) {
    if (!(dt >= 0.0) || !std::isfinite(dt)) {
        throw std::domain_error("segment duration must be finite and non-negative");
    }
    return diagonalize(h, source_hash).propagator(dt);
}

StateVector apply_propagator(StateVector state, const Propagator& u) {
    if (state.qubits() != u.qubits) {
        throw std::invalid_argument("propagator and state sizes differ");
    }
    auto& amplitudes = state.mutable_amplitudes();
    Eigen::VectorXcd local;
    for (const auto& block : u.blocks) {
        const auto m = static_cast<std::int64_t>(block.basis.size());
        local.resize(m);
        for (std::int64_t r = 0; r < m; ++r) {
            local[r] = amplitudes[block.basis[r]];
        }
        local = (block.unitary * local).eval();
        for (std::int64_t r = 0; r < m; ++r) {
            amplitudes[block.basis[r]] = local[r];
        }
    }
    return state;
}

Eigen::Matrix2cd rotation_matrix(const Axis& axis, double angle) {
    const double length = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (!(std::abs(length - 1.0) <= 1e-9)) {
        throw std::invalid_argument("pulse axis must be a unit vector");
    }
    if (!std::isfinite(angle)) {
        throw std::domain_error("pulse angle must be finite");
    }
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    const Complex i_unit{0.0, 1.0};
    const auto [nx, ny, nz] = axis;
    Eigen::Matrix2cd r;
    r << Complex(c, -s * nz), (-i_unit * nx - ny) * s,
         (-i_unit * nx + ny) * s, Complex(c, s * nz);
    return r;
}

StateVector apply_single_qubit(StateVector state, int target, const Eigen::Matrix2cd& gate) {
    check_target(state, target);
    const auto bit = qubit_bit(state.qubits(), target);
    auto& a = state.mutable_amplitudes();
    for (std::int64_t k = 0; k < a.size(); ++k) {
        const auto basis = static_cast<std::uint64_t>(k);
        if (basis & bit) {
            continue;
        }
        const auto partner = static_cast<std::int64_t>(basis | bit);
        const Complex zero = a[k];
        const Complex one = a[partner];
        a[k] = gate(0, 0) * zero + gate(0, 1) * one;
        a[partner] = gate(1, 0) * zero + gate(1, 1) * one;
    }
    return state;
}

StateVector apply_pulse(StateVector state, int target, const Axis& axis, double angle) {
    check_target(state, target);
    return apply_single_qubit(std::move(state), target, rotation_matrix(axis, angle));
}

MeasurementOutcome measure_single(const StateVector& state, int target, double readout_error, Rng& rng) {
    const int targets[] = {target};
    auto outcome = measure_mask(state, targets, readout_error, rng);
    outcome.kind = MeasurementKind::Single;
    return outcome;
}

MeasurementOutcome measure_mask(const StateVector& state, std::span<const int> targets,
                                double readout_error, Rng& rng) {
    check_readout_error(readout_error);
    if (targets.empty()) {
        throw std::invalid_argument("mask measurement needs at least one target");
    }
    for (std::size_t a = 0; a < targets.size(); ++a) {
        check_target(state, targets[a]);
        for (std::size_t b = a + 1; b < targets.size(); ++b) {
            if (targets[a] == targets[b]) {
                throw std::invalid_argument("mask measurement targets must be distinct");
            }
        }
    }
    MeasurementOutcome outcome;
    outcome.kind = MeasurementKind::Mask;
    outcome.targets.assign(targets.begin(), targets.end());
    outcome.post_state = state;
    outcome.probability = 1.0;
    // The sigma_z operators commute, so sequential projections sample the
    // joint distribution.
    for (int target : targets) {
        const double p_one = outcome.post_state.probability_one(target);
        const bool one = uniform(rng) < p_one;
        const bool flip = uniform(rng) < readout_error;
        const auto bit = qubit_bit(state.qubits(), target);
        project(outcome.post_state.mutable_amplitudes(),
                [&](std::uint64_t k) { return static_cast<bool>(k & bit) == one; });
        outcome.probability *= one ? p_one : 1.0 - p_one;
        const int eigenvalue = one ? -1 : 1;
        outcome.eigenvalues.push_back(eigenvalue);
        outcome.values.push_back(flip ? -eigenvalue : eigenvalue);
    }
    return outcome;
}

MeasurementOutcome measure_difference(const StateVector& state, int i, int j, Rng& rng) {
    check_target(state, i);
    check_target(state, j);
    if (i == j) {
        throw std::invalid_argument("difference measurement needs two distinct spins");
    }
    const int n = state.qubits();
    const auto bit_i = qubit_bit(n, i);
    const auto bit_j = qubit_bit(n, j);
    auto eigenvalue_of = [&](std::uint64_t k) {
        const int zi = (k & bit_i) ? -1 : 1;
        const int zj = (k & bit_j) ? -1 : 1;
        return (zi - zj) / 2;
    };
    double weights[3] = {0.0, 0.0, 0.0};  // eigenvalues -1, 0, +1
    for (std::int64_t k = 0; k < state.dimension(); ++k) {
        weights[eigenvalue_of(static_cast<std::uint64_t>(k)) + 1] += std::norm(state[k]);
    }
    const double u = uniform(rng);
    int chosen = 1;
    double cumulative = 0.0;
    for (int slot = 0; slot < 3; ++slot) {
        cumulative += weights[slot];
        if (weights[slot] > 0.0 && u < cumulative) {
            chosen = slot;
            break;
        }
        if (weights[slot] > 0.0) {
            chosen = slot;  // guards against round-off when u ~ total weight
        }
    }
    MeasurementOutcome outcome;
    outcome.kind = MeasurementKind::Difference;
    outcome.targets = {i, j};
    outcome.post_state = state;
    outcome.probability = weights[chosen];
    project(outcome.post_state.mutable_amplitudes(),
            [&](std::uint64_t k) { return eigenvalue_of(k) == chosen - 1; });
    outcome.eigenvalues = {chosen - 1};
    outcome.values = {chosen - 1};
    return outcome;
}

}  // namespace qhe
