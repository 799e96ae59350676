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

#include "qhechain/physics.hpp"

#include <cmath>
#include <stdexcept>

namespace qhe {

namespace {

void require_positive(double value, const char* what) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw std::domain_error(std::string(what) + " must be finite and positive");
    }
}

}  // namespace

void CouplingParams::validate() const {
    require_positive(v_prefactor, "coupling prefactor");
    require_positive(c_dimensionless, "coupling constant c");
}

void NucleusSpec::validate() const {
    if (atomic_number < 1) {
        throw std::domain_error("nucleus '" + label + "': atomic number must be >= 1");
    }
    if (!std::isfinite(gyromagnetic_ratio)) {
        throw std::domain_error("nucleus '" + label + "': gyromagnetic ratio must be finite");
    }
}

double magnetic_length_nm(double field_tesla) {
    require_positive(field_tesla, "field");
    return std::sqrt(kConstants.hbar / (kConstants.electron_charge * field_tesla)) * 1e9;
}

double coupling_strength(const CouplingParams& params, double z1, double z2, double field_tesla,
                         double separation_nm) {
    params.validate();
    require_positive(separation_nm, "separation");
    const double l_h = magnetic_length_nm(field_tesla);
    const double c = params.c_dimensionless;
    return params.v_prefactor * z1 * z2 / field_tesla * std::sqrt(c * l_h / separation_nm) *
           std::exp(-c * separation_nm / l_h);
}

CouplingParams calibrate_prefactor(double anchor_energy_joules, double z_ref, double field_ref_tesla,
                                   double c_dimensionless) {
    require_positive(anchor_energy_joules, "anchor energy");
    require_positive(z_ref, "reference atomic number");
    require_positive(field_ref_tesla, "reference field");
    require_positive(c_dimensionless, "coupling constant c");
    // At r = l_H the profile is sqrt(c) exp(-c).
    const double profile = std::sqrt(c_dimensionless) * std::exp(-c_dimensionless);
    const double target = anchor_energy_joules / kConstants.hbar;
    return CouplingParams{target * field_ref_tesla / (z_ref * z_ref * profile), c_dimensionless};
}

double larmor_frequency(const NucleusSpec& nucleus, double field_tesla) {
    require_positive(field_tesla, "field");
    return nucleus.gyromagnetic_ratio * field_tesla;
}

}  // namespace qhe
