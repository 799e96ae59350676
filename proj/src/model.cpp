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

#include "qhechain/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qhe {

namespace {

class Fnv1a {
  public:
    void add_bytes(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t k = 0; k < len; ++k) {
            h_ ^= p[k];
            h_ *= 1099511628211ULL;
        }
    }
    void add(double v) { add_bytes(&v, sizeof v); }
    void add(std::int64_t v) { add_bytes(&v, sizeof v); }
    void add(const std::string& s) {
        add(static_cast<std::int64_t>(s.size()));
        add_bytes(s.data(), s.size());
    }
    std::uint64_t value() const { return h_; }

  private:
    std::uint64_t h_ = 1469598103934665603ULL;
};

void check_index(int n, int q) {
    if (q < 0 || q >= n) {
        throw std::out_of_range("qubit index " + std::to_string(q) + " outside chain of " +
                                std::to_string(n));
    }
}

}  // namespace

void ChainSpec::validate() const {
    const int n = size();
    if (n < 1 || n > kMaxQubits) {
        throw std::invalid_argument("chain must hold between 1 and " + std::to_string(kMaxQubits) +
                                    " spins, got " + std::to_string(n));
    }
    if (positions_nm.size() != nuclei.size()) {
        throw std::invalid_argument("chain has " + std::to_string(n) + " nuclei but " +
                                    std::to_string(positions_nm.size()) + " positions");
    }
    if (!std::isfinite(field_tesla) || field_tesla <= 0.0) {
        throw std::domain_error("field must be finite and positive");
    }
    coupling.validate();
    if (!std::isfinite(coupling_scale) || coupling_scale < 0.0) {
        throw std::domain_error("coupling scale must be finite and non-negative");
    }
    if (cutoff.kind == CouplingCutoff::Kind::Radius &&
        (!std::isfinite(cutoff.radius_nm) || cutoff.radius_nm <= 0.0)) {
        throw std::domain_error("cutoff radius must be positive");
    }
    for (const auto& nucleus : nuclei) {
        nucleus.validate();
    }
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(positions_nm[i].x) || !std::isfinite(positions_nm[i].y)) {
            throw std::domain_error("position of spin " + std::to_string(i) + " is not finite");
        }
        for (int j = i + 1; j < n; ++j) {
            if (!(separation_nm(i, j) > 0.0)) {
                throw std::invalid_argument("spins " + std::to_string(i) + " and " +
                                            std::to_string(j) + " coincide");
            }
        }
    }
}

double ChainSpec::separation_nm(int i, int j) const {
    const auto& a = positions_nm.at(i);
    const auto& b = positions_nm.at(j);
    return std::hypot(a.x - b.x, a.y - b.y);
}

bool ChainSpec::pair_included(int i, int j) const {
    if (i == j) {
        return false;
    }
    switch (cutoff.kind) {
        case CouplingCutoff::Kind::AllPairs:
            return true;
        case CouplingCutoff::Kind::NearestNeighbor:
            return std::abs(i - j) == 1;
        case CouplingCutoff::Kind::Radius:
            return separation_nm(i, j) <= cutoff.radius_nm;
    }
    return false;
}

double ChainSpec::pair_coupling(int i, int j) const {
    if (!pair_included(i, j)) {
        return 0.0;
    }
    return coupling_scale * coupling_strength(coupling, nuclei.at(i).atomic_number,
                                              nuclei.at(j).atomic_number, field_tesla,
                                              separation_nm(i, j));
}

double ChainSpec::larmor(int j) const {
    return larmor_frequency(nuclei.at(j), field_tesla);
}

std::uint64_t ChainSpec::fingerprint() const {
    Fnv1a h;
    h.add(static_cast<std::int64_t>(nuclei.size()));
    for (std::size_t k = 0; k < nuclei.size(); ++k) {
        h.add(static_cast<std::int64_t>(nuclei[k].atomic_number));
        h.add(nuclei[k].gyromagnetic_ratio);
        h.add(nuclei[k].label);
    }
    for (const auto& p : positions_nm) {
        h.add(p.x);
        h.add(p.y);
    }
    h.add(field_tesla);
    h.add(coupling.v_prefactor);
    h.add(coupling.c_dimensionless);
    h.add(static_cast<std::int64_t>(cutoff.kind));
    h.add(cutoff.radius_nm);
    h.add(coupling_scale);
    return h.value();
}

ChainSpec uniform_chain(std::vector<NucleusSpec> nuclei, double spacing_nm, double field_tesla,
                        CouplingParams coupling, CouplingCutoff cutoff) {
    ChainSpec spec;
    spec.positions_nm.reserve(nuclei.size());
    for (std::size_t k = 0; k < nuclei.size(); ++k) {
        spec.positions_nm.push_back({spacing_nm * static_cast<double>(k), 0.0});
    }
    spec.nuclei = std::move(nuclei);
    spec.field_tesla = field_tesla;
    spec.coupling = coupling;
    spec.cutoff = cutoff;
    spec.validate();
    return spec;
}

SwitchMask::SwitchMask(int n, double fill) : n_(n) {
    if (n < 0) {
        throw std::invalid_argument("switch mask size must be non-negative");
    }
    if (!(fill >= 0.0 && fill <= 1.0)) {
        throw std::domain_error("switch factor must lie in [0, 1]");
    }
    factors_.assign(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2, fill);
}

std::size_t SwitchMask::slot(int i, int j) const {
    check_index(n_, i);
    check_index(n_, j);
    if (i == j) {
        throw std::invalid_argument("switch mask has no diagonal entries");
    }
    if (i > j) {
        std::swap(i, j);
    }
    // Row-major upper triangle without the diagonal.
    return static_cast<std::size_t>(i) * (2 * n_ - i - 1) / 2 + (j - i - 1);
}

double SwitchMask::factor(int i, int j) const {
    return factors_[slot(i, j)];
}

void SwitchMask::set(int i, int j, double factor) {
    if (!(factor >= 0.0 && factor <= 1.0)) {
        throw std::domain_error("switch factor must lie in [0, 1]");
    }
    factors_[slot(i, j)] = factor;
}

std::uint64_t SwitchMask::hash() const {
    Fnv1a h;
    h.add(static_cast<std::int64_t>(n_));
    for (double f : factors_) {
        h.add(f);
    }
    return h.value();
}

double HamiltonianMatrix::hermiticity_error() const {
    const SparseOperator diff = matrix - SparseOperator(matrix.adjoint());
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k) {
        for (SparseOperator::InnerIterator it(diff, k); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    return worst;
}

double HamiltonianMatrix::max_abs() const {
    double worst = 0.0;
    for (int k = 0; k < matrix.outerSize(); ++k) {
        for (SparseOperator::InnerIterator it(matrix, k); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    return worst;
}

HamiltonianMatrix HamiltonianMatrix::from_dense(int qubits, const Eigen::MatrixXcd& m) {
    const auto dim = std::int64_t{1} << qubits;
    if (m.rows() != dim || m.cols() != dim) {
        throw std::invalid_argument("matrix dimension does not match qubit count");
    }
    return {qubits, m.sparseView(0.0, 0.0)};
}

SparseOperator pauli_operator(int n, int target, PauliKind kind) {
    if (n < 1 || n > kMaxQubits) {
        throw std::invalid_argument("qubit count out of range");
    }
    check_index(n, target);
    const Complex i_unit{0.0, 1.0};
    Eigen::Matrix2cd single;
    switch (kind) {
        case PauliKind::X:
            single << 0.0, 1.0, 1.0, 0.0;
            break;
        case PauliKind::Y:
            single << 0.0, -i_unit, i_unit, 0.0;
            break;
        case PauliKind::Z:
            single << 1.0, 0.0, 0.0, -1.0;
            break;
        case PauliKind::Plus:
            single << 0.0, 1.0, 0.0, 0.0;
            break;
        case PauliKind::Minus:
            single << 0.0, 0.0, 1.0, 0.0;
            break;
    }
    // Kronecker product I (x) ... (x) single (x) ... (x) I, built factor by
    // factor from the most significant qubit.
    SparseOperator result(1, 1);
    result.insert(0, 0) = 1.0;
    for (int q = 0; q < n; ++q) {
        const auto rows = result.rows();
        SparseOperator next(rows * 2, rows * 2);
        std::vector<Eigen::Triplet<Complex>> triplets;
        for (int k = 0; k < result.outerSize(); ++k) {
            for (SparseOperator::InnerIterator it(result, k); it; ++it) {
                for (int a = 0; a < 2; ++a) {
                    for (int b = 0; b < 2; ++b) {
                        const Complex f = q == target ? single(a, b) : Complex(a == b ? 1.0 : 0.0);
                        if (f != Complex(0.0)) {
                            triplets.emplace_back(it.row() * 2 + a, it.col() * 2 + b, it.value() * f);
                        }
                    }
                }
            }
        }
        next.setFromTriplets(triplets.begin(), triplets.end());
        result = std::move(next);
    }
    return result;
}

SparseOperator total_sz(int n) {
    const auto dim = std::int64_t{1} << n;
    SparseOperator result(dim, dim);
    result.reserve(Eigen::VectorXi::Constant(dim, 1));
    for (std::int64_t b = 0; b < dim; ++b) {
        const int ones = std::popcount(static_cast<std::uint64_t>(b));
        result.insert(b, b) = static_cast<double>(n - 2 * ones);
    }
    result.makeCompressed();
    return result;
}

HamiltonianMatrix build_hamiltonian(const ChainSpec& spec, const SwitchMask& mask) {
    spec.validate();
    const int n = spec.size();
    if (mask.size() != n) {
        throw std::invalid_argument("switch mask size does not match chain");
    }
    std::vector<double> omega(n);
    for (int j = 0; j < n; ++j) {
        omega[j] = spec.larmor(j);
    }
    struct Pair {
        std::uint64_t bits;
        double amplitude;
    };
    std::vector<Pair> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double amplitude = mask.factor(i, j) * spec.pair_coupling(i, j);
            if (amplitude != 0.0) {
                pairs.push_back({qubit_bit(n, i) | qubit_bit(n, j), amplitude});
            }
        }
    }

    const auto dim = std::int64_t{1} << n;
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(static_cast<std::size_t>(dim) * (1 + pairs.size() / 2 + 1));
    for (std::int64_t b = 0; b < dim; ++b) {
        const auto basis = static_cast<std::uint64_t>(b);
        double diagonal = 0.0;
        for (int j = 0; j < n; ++j) {
            diagonal -= (basis & qubit_bit(n, j)) ? -omega[j] : omega[j];
        }
        if (diagonal != 0.0) {
            triplets.emplace_back(b, b, diagonal);
        }
        // Flip-flop connects basis states whose bits on the pair differ.
        for (const auto& pair : pairs) {
            const auto masked = basis & pair.bits;
            if (masked != 0 && masked != pair.bits) {
                triplets.emplace_back(b, static_cast<std::int64_t>(basis ^ pair.bits), -pair.amplitude);
            }
        }
    }
    HamiltonianMatrix h{n, SparseOperator(dim, dim)};
    h.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return h;
}

std::vector<PairCoupling> coupling_table(const ChainSpec& spec) {
    spec.validate();
    std::vector<PairCoupling> table;
    for (int i = 0; i < spec.size(); ++i) {
        for (int j = i + 1; j < spec.size(); ++j) {
            if (spec.pair_included(i, j)) {
                table.push_back({i, j, spec.pair_coupling(i, j)});
            }
        }
    }
    std::stable_sort(table.begin(), table.end(),
                     [](const PairCoupling& a, const PairCoupling& b) { return a.coupling > b.coupling; });
    return table;
}

}  // namespace qhe
