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

#include <doctest.h>

#include <cmath>
#include <random>

#include "qhechain/control.hpp"

using namespace qhe;

namespace {

const Complex kI{0.0, 1.0};
constexpr double kProtonGamma = 2.6752218744e8;

ChainSpec pair_chain(double gamma0, double gamma1, double field = 6.58) {
    return uniform_chain({{1, gamma0, "a"}, {1, gamma1, "b"}}, magnetic_length_nm(field), field,
                         calibrate_prefactor(kDefaultAnchorEnergyJoules, 1.0, field));
}

ChainSpec chain(int n, CouplingCutoff cutoff = {}) {
    std::vector<NucleusSpec> nuclei;
    for (int k = 0; k < n; ++k) {
        nuclei.push_back({1 + k % 2, kProtonGamma * (1.0 - 0.13 * k), "s" + std::to_string(k)});
    }
    return uniform_chain(nuclei, magnetic_length_nm(6.58), 6.58,
                         calibrate_prefactor(kDefaultAnchorEnergyJoules, 1.0, 6.58), cutoff);
}

StateVector random_state(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd a(1 << n);
    for (auto& x : a) {
        x = Complex(gauss(rng), gauss(rng));
    }
    a.normalize();
    return StateVector::from_amplitudes(n, a);
}

Program random_program(int n, int events, std::mt19937_64& rng, double j_scale) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> qubit(0, n - 1);
    Program program;
    for (int k = 0; k < events; ++k) {
        const double kind = unit(rng);
        if (kind < 0.4) {
            program.add(Delay{unit(rng) * 3.0 / j_scale});
        } else if (kind < 0.8) {
            Axis axis{unit(rng) - 0.5, unit(rng) - 0.5, unit(rng) - 0.5};
            const double len = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
            for (auto& c : axis) {
                c /= len;
            }
            program.add(Pulse{qubit(rng), axis, 6.0 * unit(rng)});
        } else if (n > 1) {
            int a = qubit(rng);
            int b = qubit(rng);
            while (b == a) {
                b = qubit(rng);
            }
            program.add(SetSwitch{{a, b}, unit(rng)});
        }
    }
    return program;
}

}  // namespace

TEST_CASE("validation diagnostics") {
    const auto spec = chain(3);
    CHECK(validate(Program{}, spec).empty());

    Program bad_pulse;
    bad_pulse.add(Pulse{5, {1, 0, 0}, 1.0});
    const auto d1 = validate(bad_pulse, spec);
    REQUIRE(d1.size() == 1);
    CHECK(d1[0].event_index == 0);

    Program bad_switch;
    bad_switch.add(Delay{1e-12}).add(SetSwitch{{0, 1}, 1.5});
    const auto d2 = validate(bad_switch, spec);
    REQUIRE(d2.size() == 1);
    CHECK(d2[0].event_index == 1);

    Program late_init;
    late_init.add(Delay{0.0}).add(InitializePumped{});
    CHECK(validate(late_init, spec).size() == 1);

    Program assorted;
    assorted.add(Delay{-1.0})
        .add(Pulse{0, {1, 1, 0}, 1.0})
        .add(SetSwitch{{2, 2}, 0.5})
        .add(MeasureMask{{}})
        .add(MeasureMask{{0, 0}})
        .add(MeasureDifference{1, 1})
        .add(MeasureSingle{-1});
    CHECK(validate(assorted, spec).size() == 7);
    CHECK_THROWS_AS(run(assorted, spec), ProgramError);
}

TEST_CASE("initialize only") {
    Program program;
    program.add(InitializePumped{});
    const auto result = run(program, chain(3));
    CHECK(result.final_state[0] == Complex(1.0));
    CHECK(result.total_duration == 0.0);
    CHECK(result.segment_count == 0);
}

TEST_CASE("flip-flop transfers an excitation") {
    // No Zeeman term: w = 0 on both spins.
    const auto spec = pair_chain(0.0, 0.0);
    const double j = spec.pair_coupling(0, 1);
    Program program;
    program.add(InitializePumped{}).add(Pulse{0, {1, 0, 0}, M_PI}).add(Delay{M_PI / (2.0 * j)});
    const auto result = run(program, spec);
    CHECK(std::abs(std::abs(result.final_state[0b01]) - 1.0) < 1e-12);
    CHECK(result.total_duration == doctest::Approx(M_PI / (2.0 * j)));
    CHECK(result.segment_count == 1);

    Program switched_off;
    switched_off.add(InitializePumped{})
        .add(SetSwitch{{0, 1}, 0.0})
        .add(Pulse{0, {1, 0, 0}, M_PI})
        .add(Delay{1.234e-10});
    const auto frozen = run(switched_off, pair_chain(kProtonGamma, 1.3 * kProtonGamma));
    CHECK(std::abs(std::abs(frozen.final_state[0b10]) - 1.0) < 1e-12);
}

TEST_CASE("idle unitary") {
    const auto spec = chain(3);
    const double t = 2.7e-11;
    CHECK((idle_unitary(spec, SwitchMask::all_on(3), 0.0).dense() - Eigen::MatrixXcd::Identity(8, 8))
              .cwiseAbs()
              .maxCoeff() == 0.0);

    const Eigen::MatrixXcd diag = idle_unitary(spec, SwitchMask::all_off(3), t).dense();
    for (int b = 0; b < 8; ++b) {
        Complex expected = 1.0;
        for (int q = 0; q < 3; ++q) {
            const double z = (b & qubit_bit(3, q)) ? -1.0 : 1.0;
            expected *= std::exp(kI * spec.larmor(q) * z * t);
        }
        CHECK(std::abs(diag(b, b) - expected) < 1e-12);
        CHECK(std::abs(diag.row(b).norm() - 1.0) < 1e-12);
    }

    SwitchMask mask = SwitchMask::all_on(3);
    mask.set(0, 2, 0.4);
    const Eigen::MatrixXcd u = idle_unitary(spec, mask, t).dense();
    Program segment;
    segment.add(SetSwitch{{0, 2}, 0.4}).add(Delay{t});
    for (int b = 0; b < 8; ++b) {
        RunOptions options;
        options.initial_state = StateVector::basis_state(3, b);
        const auto result = run(segment, spec, options);
        CHECK((result.final_state.amplitudes() - u.col(b)).cwiseAbs().maxCoeff() < 1e-11);
    }
}

TEST_CASE("interpreter invariants on random programs") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 4;
        const auto spec = chain(n);
        const double j_scale = n > 1 ? spec.pair_coupling(0, 1) : 1e11;
        const Program program = random_program(n, 12, rng, j_scale);

        SUBCASE("determinism") {
            RunOptions options;
            options.seed = 5;
            Program measured = program;
            measured.add(MeasureMask{{0}});
            const auto a = run(measured, spec, options);
            const auto b = run(measured, spec, options);
            CHECK(a.final_state.amplitudes() == b.final_state.amplitudes());
            CHECK(a.measurement_log.back().values == b.measurement_log.back().values);
        }
        SUBCASE("unitary map preserves inner products") {
            const auto psi = random_state(n, rng);
            const auto phi = random_state(n, rng);
            RunOptions a;
            a.initial_state = psi;
            RunOptions b;
            b.initial_state = phi;
            const auto out_psi = run(program, spec, a).final_state;
            const auto out_phi = run(program, spec, b).final_state;
            CHECK(std::abs(out_psi.inner(out_phi) - psi.inner(phi)) < 1e-10);
            CHECK(std::abs(out_psi.norm() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("splitting a delay leaves the result unchanged") {
    const auto spec = chain(3);
    const double j = spec.pair_coupling(0, 1);
    Program whole;
    whole.add(Pulse{1, {1, 0, 0}, 1.1}).add(Delay{2.3 / j});
    Program split;
    split.add(Pulse{1, {1, 0, 0}, 1.1}).add(Delay{0.8 / j}).add(Delay{1.5 / j});
    const auto a = run(whole, spec).final_state;
    const auto b = run(split, spec).final_state;
    CHECK((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("switch set and immediately restored has no effect") {
    const auto spec = chain(3);
    const double j = spec.pair_coupling(0, 1);
    Program plain;
    plain.add(Pulse{0, {0, 1, 0}, 0.9}).add(Delay{1.0 / j});
    Program toggled;
    toggled.add(Pulse{0, {0, 1, 0}, 0.9}).add(SetSwitch{{0, 1}, 0.0}).add(SetSwitch{{0, 1}, 1.0}).add(Delay{1.0 / j});
    CHECK((run(plain, spec).final_state.amplitudes() - run(toggled, spec).final_state.amplitudes())
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("program unitary agrees with the interpreter") {
    std::mt19937_64 rng(21);
    const auto spec = chain(3);
    const Program program = random_program(3, 15, rng, spec.pair_coupling(0, 1));
    const Eigen::MatrixXcd u = program_unitary(program, spec);
    for (int b = 0; b < 8; ++b) {
        RunOptions options;
        options.initial_state = StateVector::basis_state(3, b);
        CHECK((run(program, spec, options).final_state.amplitudes() - u.col(b)).cwiseAbs().maxCoeff() < 1e-10);
    }
    Program measured = program;
    measured.add(MeasureSingle{0});
    CHECK_THROWS_AS(program_unitary(measured, spec), std::invalid_argument);
}

TEST_CASE("spectrum cache is shared across runs") {
    const auto spec = chain(2);
    SpectrumCache cache;
    RunOptions options;
    options.cache = &cache;
    Program program;
    program.add(Delay{1e-12}).add(SetSwitch{{0, 1}, 0.0}).add(Delay{1e-12}).add(Delay{2e-12});
    run(program, spec, options);
    run(program, spec, options);
    CHECK(cache.size() == 2);
}

TEST_CASE("relaxation during delays") {
    const auto spec = pair_chain(kProtonGamma, kProtonGamma);
    Program program;
    program.add(Pulse{0, {1, 0, 0}, M_PI}).add(Pulse{1, {1, 0, 0}, M_PI}).add(Delay{1.0});
    RunOptions options;
    options.noise = NoiseParams::with_t1(1e-6);  // dt / T1 = 1e6: certain reset
    const auto result = run(program, spec, options);
    CHECK(std::abs(std::abs(result.final_state[0]) - 1.0) < 1e-12);
}

TEST_CASE("mid-program measurement is logged") {
    const auto spec = pair_chain(kProtonGamma, kProtonGamma);
    Program program;
    program.add(InitializePumped{})
        .add(Pulse{1, {1, 0, 0}, M_PI})
        .add(MeasureSingle{1})
        .add(MeasureDifference{0, 1})
        .add(MeasureMask{{0, 1}});
    const auto result = run(program, spec);
    REQUIRE(result.measurement_log.size() == 3);
    CHECK(result.measurement_log[0].values == std::vector<int>{-1});
    CHECK(result.measurement_log[1].values == std::vector<int>{1});
    CHECK(result.measurement_log[2].values == std::vector<int>{1, -1});
}
