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

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qhechain/physics.hpp"

namespace qhe {

using Complex = std::complex<double>;
using SparseOperator = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

/// Dense 2^n state spaces are limited to this many spins.
inline constexpr int kMaxQubits = 14;

/// Basis index bit holding qubit `target` of an n-qubit register. Qubit 0 is
/// the most significant bit.
inline std::uint64_t qubit_bit(int n, int target) {
    return std::uint64_t{1} << (n - 1 - target);
}

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2&) const = default;
};

/// Which pairs of spins enter the exchange sum.
struct CouplingCutoff {
    enum class Kind { AllPairs, NearestNeighbor, Radius };

    Kind kind = Kind::AllPairs;
    double radius_nm = 0.0;

    static CouplingCutoff all_pairs() { return {}; }
    static CouplingCutoff nearest_neighbor() { return {Kind::NearestNeighbor, 0.0}; }
    static CouplingCutoff radius(double r_nm) { return {Kind::Radius, r_nm}; }

    bool operator==(const CouplingCutoff&) const = default;
};

/// A physical chain instance. `coupling_scale` multiplies every pair
/// coupling; it is 1 for a nominal chain and carries per-replica disorder.
struct ChainSpec {
    std::vector<NucleusSpec> nuclei;
    std::vector<Point2> positions_nm;
    double field_tesla = 1.0;
    CouplingParams coupling;
    CouplingCutoff cutoff;
    double coupling_scale = 1.0;

    int size() const { return static_cast<int>(nuclei.size()); }

    /// Throws std::invalid_argument (or std::domain_error for physical
    /// values) when the instance is not simulatable.
    void validate() const;

    double separation_nm(int i, int j) const;
    bool pair_included(int i, int j) const;
    /// Exchange magnitude of an included pair at full switch factor, zero
    /// for pairs removed by the cutoff.
    double pair_coupling(int i, int j) const;
    double larmor(int j) const;

    /// Stable content hash; used to key propagator caches.
    std::uint64_t fingerprint() const;

    bool operator==(const ChainSpec&) const = default;
};

/// Evenly spaced collinear chain along x.
ChainSpec uniform_chain(std::vector<NucleusSpec> nuclei, double spacing_nm, double field_tesla,
                        CouplingParams coupling, CouplingCutoff cutoff = {});

/// Per-pair attenuation of the exchange coupling, 1 = on, 0 = off.
class SwitchMask {
  public:
    SwitchMask() = default;
    explicit SwitchMask(int n, double fill = 1.0);

    static SwitchMask all_on(int n) { return SwitchMask(n, 1.0); }
    static SwitchMask all_off(int n) { return SwitchMask(n, 0.0); }

    int size() const { return n_; }
    double factor(int i, int j) const;
    void set(int i, int j, double factor);
    std::uint64_t hash() const;

    bool operator==(const SwitchMask&) const = default;

  private:
    std::size_t slot(int i, int j) const;

    int n_ = 0;
    std::vector<double> factors_;
};

/// Spin Hamiltonian in rad/s over the computational basis.
struct HamiltonianMatrix {
    int qubits = 0;
    SparseOperator matrix;

    std::int64_t dimension() const { return std::int64_t{1} << qubits; }
    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix); }
    /// Largest |M_ab - conj(M_ba)|.
    double hermiticity_error() const;
    double max_abs() const;

    static HamiltonianMatrix from_dense(int qubits, const Eigen::MatrixXcd& m);
};

enum class PauliKind { X, Y, Z, Plus, Minus };

/// Single-spin operator on `target` with identity elsewhere. sigma_z|0> =
/// +|0>, sigma_plus|1> = |0>.
SparseOperator pauli_operator(int n, int target, PauliKind kind);

/// Sum of sigma_z over all spins (diagonal).
SparseOperator total_sz(int n);

/// M = -sum_j w_j Z_j - sum_{i<j} mask(i,j) J_ij [s+_i s-_j + s-_i s+_j].
HamiltonianMatrix build_hamiltonian(const ChainSpec& spec, const SwitchMask& mask);

struct PairCoupling {
    int i = 0;
    int j = 0;
    double coupling = 0.0;  // rad/s
};

/// Couplings of every pair that passes the cutoff, strongest first.
std::vector<PairCoupling> coupling_table(const ChainSpec& spec);

}  // namespace qhe
