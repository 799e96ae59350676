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

// Physical constants and the electron-mediated coupling law between nuclear
// spins in a quantum-Hall two-dimensional electron system.
//
// Units used throughout the library: energies are angular frequencies
// (E / hbar, rad/s), lengths are nanometers, fields are tesla and times are
// seconds.

#include <string>

namespace qhe {

/// CODATA 2018 values in SI units.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;           // J s
    double electron_charge = 1.602176634e-19;  // C
    double speed_of_light = 299792458.0;       // m / s
};

inline constexpr PhysicalConstants kConstants{};

/// Default strength anchor for calibration: 1e-16 erg expressed in joules.
inline constexpr double kDefaultAnchorEnergyJoules = 1e-23;

/// Prefactor V (rad s^-1 T) and the dimensionless decay constant c of the
/// exchange law.
struct CouplingParams {
    double v_prefactor = 0.0;
    double c_dimensionless = 1.0;

    /// Throws std::domain_error unless both values are finite and positive.
    void validate() const;

    bool operator==(const CouplingParams&) const = default;
};

struct NucleusSpec {
    int atomic_number = 1;
    double gyromagnetic_ratio = 0.0;  // rad s^-1 T^-1, signed
    std::string label;

    void validate() const;

    bool operator==(const NucleusSpec&) const = default;
};

/// Magnetic length sqrt(hbar / (e H)) in nanometers. This is the SI value of
/// the Gaussian expression sqrt(hbar c / (e H)).
double magnetic_length_nm(double field_tesla);

/// Exchange magnitude J (rad/s) between two nuclei:
///
///     J = V z1 z2 / H * sqrt(c l_H / r) * exp(-c r / l_H)
///
/// The Hamiltonian carries it with an overall minus sign in front of the
/// flip-flop operator. Throws std::domain_error for non-positive field or
/// separation.
double coupling_strength(const CouplingParams& params, double z1, double z2, double field_tesla,
                         double separation_nm);

/// Chooses V so that two nuclei of atomic number z_ref, separated by one
/// magnetic length at field_ref, couple with strength anchor_energy / hbar.
CouplingParams calibrate_prefactor(double anchor_energy_joules, double z_ref, double field_ref_tesla,
                                   double c_dimensionless = 1.0);

/// Signed Larmor angular frequency gamma * H.
double larmor_frequency(const NucleusSpec& nucleus, double field_tesla);

}  // namespace qhe
