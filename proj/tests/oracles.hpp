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

// Test-only reference computations. Nothing here calls into the library's
// evolution code, so the checks built on them stay independent.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace qhe::testing {

/// exp(A) by scaling and squaring of a truncated Taylor series.
inline Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXcd& a) {
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    while (norm / std::ldexp(1.0, squarings) > 0.25) {
        ++squarings;
    }
    const Eigen::MatrixXcd scaled = a / std::ldexp(1.0, squarings);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = (term * scaled / static_cast<double>(k)).eval();
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) {
        sum = (sum * sum).eval();
    }
    return sum;
}

inline Eigen::MatrixXcd random_hermitian(std::int64_t dim, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    Eigen::MatrixXcd m(dim, dim);
    for (std::int64_t r = 0; r < dim; ++r) {
        for (std::int64_t c = 0; c < dim; ++c) {
            m(r, c) = std::complex<double>(gauss(rng), gauss(rng));
        }
    }
    return 0.5 * (m + m.adjoint());
}

/// P[more than half of R independent eps-flips], by direct summation.
inline double majority_error_tail(int replicas, double eps) {
    double total = 0.0;
    for (int k = replicas / 2 + 1; k <= replicas; ++k) {
        double choose = 1.0;
        for (int i = 1; i <= k; ++i) {
            choose = choose * static_cast<double>(replicas - k + i) / static_cast<double>(i);
        }
        total += choose * std::pow(eps, k) * std::pow(1.0 - eps, replicas - k);
    }
    return total;
}

/// |observed/trials - p| within `sigmas` binomial standard errors.
inline bool within_binomial(std::int64_t observed, std::int64_t trials, double p, double sigmas = 5.0) {
    const double n = static_cast<double>(trials);
    const double sd = std::sqrt(n * p * (1.0 - p));
    return std::abs(static_cast<double>(observed) - n * p) <= sigmas * sd + 1e-9;
}

/// Max |U - e^{i phi} V| after removing the best global phase.
inline double phase_aligned_distance(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
    const std::complex<double> overlap = (v.adjoint() * u).trace();
    const std::complex<double> phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : 1.0;
    return (u - phase * v).cwiseAbs().maxCoeff();
}

}  // namespace qhe::testing
