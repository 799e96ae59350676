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

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_harness.hpp"
#include "qhechain/io.hpp"

using namespace qhe;
using namespace qhe::testing;

namespace {

std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::stringstream in(text);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "param,mean,std_error,replicas");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            row.push_back(std::stod(cell));
        }
        rows.push_back(row);
    }
    return rows;
}

std::string exact(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

}  // namespace

TEST_CASE("simulate") {
    const auto out = scratch_path("simulate.json");
    SUBCASE("single spin initialization") {
        REQUIRE(cli("simulate " + demo("one_spin_chain.json") + " " + demo("init_program.json") + " --emit-state -o " +
                    out) == 0);
        const auto doc = load_json_file(out);
        CHECK(doc["final_state"]["re"] == Json::array({1.0, 0.0}));
        CHECK(doc["final_state"]["im"] == Json::array({0.0, 0.0}));
    }
    SUBCASE("iSWAP transfer demo") {
        REQUIRE(cli("simulate " + demo("two_spin_chain.json") + " " + demo("iswap_transfer.json") + " --seed 9 -o " +
                    out) == 0);
        const auto doc = load_json_file(out);
        CHECK(doc["measurements"][0]["values"][0] == -1);
        CHECK(doc["measurements"][0]["probability"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(doc["total_duration_seconds"].get<double>() ==
              doctest::Approx(M_PI / 2.0 / (1e-23 / kConstants.hbar)).epsilon(1e-12));
    }
    SUBCASE("invalid inputs exit 2 without output") {
        std::filesystem::remove(out);
        const auto corrupt = scratch_path("corrupt.json");
        std::ofstream(corrupt) << "{\"field_tesla\": 1,";
        CHECK(cli("simulate " + corrupt + " " + demo("init_program.json") + " -o " + out) == 2);
        CHECK(cli("simulate " + scratch_path("absent.json") + " " + demo("init_program.json") + " -o " + out) == 2);

        auto big = load_json_file(demo("one_spin_chain.json"));
        for (int k = 1; k < kMaxQubits + 1; ++k) {
            auto nucleus = big["nuclei"][0];
            nucleus["position_nm"] = {10.0 * k, 0.0};
            big["nuclei"].push_back(nucleus);
        }
        const auto big_path = scratch_path("fifteen.json");
        write_json_file(big_path, big);
        CHECK(cli("simulate " + big_path + " " + demo("init_program.json") + " -o " + out) == 2);

        auto typo = load_json_file(demo("one_spin_chain.json"));
        typo["coupling"]["cutof"] = "all";
        const auto typo_path = scratch_path("typo.json");
        write_json_file(typo_path, typo);
        CHECK(cli("simulate " + typo_path + " " + demo("init_program.json") + " -o " + out) == 2);

        const auto bad_program = scratch_path("bad_program.json");
        std::ofstream(bad_program) << R"({"events": [{"type": "pulse", "target": 3, "axis": [1, 0, 0], "angle": 1}]})";
        CHECK(cli("simulate " + demo("one_spin_chain.json") + " " + bad_program + " -o " + out) == 2);
        CHECK(cli("simulate " + demo("one_spin_chain.json") + " " + demo("init_program.json") +
                  " --readout-error 0.9 -o " + out) == 2);
        CHECK_FALSE(std::filesystem::exists(out));
    }
    SUBCASE("reruns differ only in the timestamp") {
        const auto again = scratch_path("simulate_again.json");
        const std::string args = "simulate " + demo("two_spin_chain.json") + " " + demo("iswap_transfer.json") +
                                 " --seed 5 --readout-error 0.3 --emit-state -o ";
        REQUIRE(cli(args + out) == 0);
        REQUIRE(cli(args + again) == 0);
        CHECK(without_timestamp(read_text(out)) == without_timestamp(read_text(again)));
        CHECK(read_text(out).find("\"timestamp\"") != std::string::npos);
    }
}

TEST_CASE("compile") {
    const auto program = scratch_path("compiled.json");
    const auto report = scratch_path("report.json");
    SUBCASE("iSWAP on an equal pair") {
        REQUIRE(cli("compile " + demo("two_spin_chain.json") + " --target iswap --qubits 0 1 -o " + program +
                    " --report " + report) == 0);
        CHECK(load_json_file(report)["fidelity"].get<double>() >= 1.0 - 1e-10);
        CHECK(load_json_file(report)["converged"] == true);
        CHECK(cli("simulate " + demo("two_spin_chain.json") + " " + program + " -o " + scratch_path("run.json")) == 0);
    }
    SUBCASE("idle on a nearest-neighbour chain") {
        REQUIRE(cli("compile " + demo("three_spin_chain.json") + " --target idle -o " + program + " --report " +
                    report) == 0);
        CHECK(load_json_file(report)["fidelity"].get<double>() >= 1.0 - 1e-9);
        CHECK(program_from_json(load_json_file(program)) ==
              program_from_json(program_to_json(program_from_json(load_json_file(program)))));
    }
    SUBCASE("impossible budget does not converge") {
        CHECK(cli("compile " + demo("two_spin_chain.json") + " --target swap --qubits 0 1 --budget 1 -o " + program +
                  " --report " + report) == 3);
        CHECK(load_json_file(report)["converged"] == false);
    }
    SUBCASE("bad requests") {
        CHECK(cli("compile " + demo("two_spin_chain.json") + " --target toffoli --qubits 0 1 -o " + program) == 2);
        CHECK(cli("compile " + demo("two_spin_chain.json") + " --target cnot --qubits 0 4 -o " + program) == 2);
        CHECK(cli("compile " + demo("two_spin_chain.json") + " --qubits 0 1 -o " + program) == 2);
    }
}

TEST_CASE("sweep") {
    const auto out = scratch_path("sweep.csv");
    const double r0 = 10.001610482381212;
    SUBCASE("single noiseless replica has zero spread") {
        REQUIRE(cli("sweep " + demo("two_spin_chain.json") + " " + demo("iswap_transfer.json") +
                    " --param field --range 2:8:4 --observable z:1 --replicas 1 -o " + out) == 0);
        const auto rows = csv_rows(read_text(out));
        CHECK(rows.size() == 4);
        for (const auto& row : rows) {
            CHECK(row[2] == 0.0);
            CHECK(row[3] == 1.0);
        }
    }
    SUBCASE("coupling falls off over one to three magnetic lengths") {
        REQUIRE(cli("sweep " + demo("two_spin_chain.json") + " --param spacing --range " + exact(r0) + ":" +
                    exact(3 * r0) + ":21 --observable J:0,1 -o " + out) == 0);
        const auto rows = csv_rows(read_text(out));
        REQUIRE(rows.size() == 21);
        for (std::size_t k = 1; k < rows.size(); ++k) {
            CHECK(rows[k][1] < rows[k - 1][1]);
        }
    }
    SUBCASE("field and spacing sweeps collapse on r sqrt(H)") {
        auto chain = load_json_file(demo("two_spin_chain.json"));
        chain["field_tesla"] = 1.0;
        chain["coupling"].erase("anchor_energy_joules");
        chain["coupling"]["v_prefactor"] = 3.0e12;
        const auto path = scratch_path("unit_field.json");
        write_json_file(path, chain);
        const auto by_spacing = scratch_path("by_spacing.csv");
        for (double field : {1.0, 4.0, 9.0}) {
            REQUIRE(cli("sweep " + path + " --param field --range " + exact(field) + ":" + exact(field) +
                        ":1 --observable J:0,1 -o " + out) == 0);
            const double spacing = r0 * std::sqrt(field);
            REQUIRE(cli("sweep " + path + " --param spacing --range " + exact(spacing) + ":" + exact(spacing) +
                        ":1 --observable J:0,1 -o " + by_spacing) == 0);
            // Spin 1 sits at r0 in the file; at field H it is matched by spacing r0 sqrt(H) at 1 T.
            const double j_field = csv_rows(read_text(out))[0][1];
            const double j_spacing = csv_rows(read_text(by_spacing))[0][1];
            CHECK(j_field * field == doctest::Approx(j_spacing).epsilon(1e-12));
        }
    }
    SUBCASE("deterministic per seed") {
        const auto again = scratch_path("sweep_again.csv");
        const std::string args = "sweep " + demo("two_spin_chain.json") + " " + demo("iswap_transfer.json") +
                                 " --param coupling-sigma --range 0:0.2:3 --observable z:1 --replicas 50 --seed 8 -o ";
        REQUIRE(cli(args + out) == 0);
        REQUIRE(cli(args + again) == 0);
        CHECK(read_text(out) == read_text(again));
    }
    SUBCASE("bad arguments") {
        CHECK(cli("sweep " + demo("two_spin_chain.json") + " --param field --range 1:2 --observable J:0,1") == 2);
        CHECK(cli("sweep " + demo("two_spin_chain.json") + " --param mass --range 1:2:2 --observable J:0,1") == 2);
        CHECK(cli("sweep " + demo("two_spin_chain.json") + " --param field --range 1:2:2 --observable q:0") == 2);
        CHECK(cli("sweep " + demo("two_spin_chain.json") + " --param field --range -1:2:2 --observable J:0,1") == 2);
    }
}

TEST_CASE("ensemble") {
    const auto out = scratch_path("ensemble.json");
    REQUIRE(cli("ensemble " + demo("two_spin_chain.json") + " " + demo("iswap_transfer.json") +
                " --majority 1 --replicas 15 --readout-error 0.0 --seed 3 -o " + out) == 0);
    CHECK(load_json_file(out)["majority_value"] == -1);
    REQUIRE(cli("ensemble " + demo("two_spin_chain.json") + " " + demo("init_program.json") +
                " --observable z:0,1 --replicas 8 --position-sigma 0.2 --seed 3 -o " + out) == 0);
    CHECK(load_json_file(out)["mean"].get<double>() == doctest::Approx(1.0));
    CHECK(cli("ensemble " + demo("two_spin_chain.json") + " " + demo("init_program.json") +
              " --majority 1 --replicas 4 -o " + out) == 2);
}
