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

#include "qhechain/io.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

namespace qhe {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& message) {
    throw SchemaError(where + ": " + message);
}

void expect_keys(const Json& object, const std::string& where, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional = {}) {
    if (!object.is_object()) {
        fail(where, "expected an object");
    }
    std::set<std::string> allowed;
    for (const char* key : required) {
        allowed.insert(key);
        if (!object.contains(key)) {
            fail(where, std::string("missing key '") + key + "'");
        }
    }
    for (const char* key : optional) {
        allowed.insert(key);
    }
    for (const auto& item : object.items()) {
        if (!allowed.count(item.key())) {
            fail(where, "unknown key '" + item.key() + "'");
        }
    }
}

double number(const Json& value, const std::string& where) {
    if (!value.is_number()) {
        fail(where, "expected a number");
    }
    return value.get<double>();
}

int integer(const Json& value, const std::string& where) {
    if (!value.is_number_integer()) {
        fail(where, "expected an integer");
    }
    return value.get<int>();
}

std::string text(const Json& value, const std::string& where) {
    if (!value.is_string()) {
        fail(where, "expected a string");
    }
    return value.get<std::string>();
}

std::vector<double> numbers(const Json& value, const std::string& where, std::size_t count) {
    if (!value.is_array() || value.size() != count) {
        fail(where, "expected an array of " + std::to_string(count) + " numbers");
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(number(value[k], where + "[" + std::to_string(k) + "]"));
    }
    return out;
}

std::vector<int> integers(const Json& value, const std::string& where) {
    if (!value.is_array()) {
        fail(where, "expected an array of integers");
    }
    std::vector<int> out;
    for (std::size_t k = 0; k < value.size(); ++k) {
        out.push_back(integer(value[k], where + "[" + std::to_string(k) + "]"));
    }
    return out;
}

const char* kind_name(MeasurementKind kind) {
    switch (kind) {
        case MeasurementKind::Single:
            return "single";
        case MeasurementKind::Mask:
            return "mask";
        case MeasurementKind::Difference:
            return "difference";
    }
    return "single";
}

ControlEvent event_from_json(const Json& doc, const std::string& where) {
    if (!doc.is_object() || !doc.contains("type")) {
        fail(where, "event needs a 'type'");
    }
    const std::string type = text(doc["type"], where + ".type");
    if (type == "init") {
        expect_keys(doc, where, {"type"});
        return InitializePumped{};
    }
    if (type == "delay") {
        expect_keys(doc, where, {"type", "seconds"});
        return Delay{number(doc["seconds"], where + ".seconds")};
    }
    if (type == "pulse") {
        expect_keys(doc, where, {"type", "target", "axis", "angle"});
        const auto axis = numbers(doc["axis"], where + ".axis", 3);
        return Pulse{integer(doc["target"], where + ".target"), {axis[0], axis[1], axis[2]},
                     number(doc["angle"], where + ".angle")};
    }
    if (type == "switch") {
        expect_keys(doc, where, {"type", "pair", "factor"});
        const auto pair = integers(doc["pair"], where + ".pair");
        if (pair.size() != 2) {
            fail(where + ".pair", "expected two spin indices");
        }
        return SetSwitch{{pair[0], pair[1]}, number(doc["factor"], where + ".factor")};
    }
    if (type == "measure") {
        expect_keys(doc, where, {"type", "kind", "targets"});
        const std::string kind = text(doc["kind"], where + ".kind");
        const auto targets = integers(doc["targets"], where + ".targets");
        if (kind == "single") {
            if (targets.size() != 1) {
                fail(where + ".targets", "single measurement takes one target");
            }
            return MeasureSingle{targets[0]};
        }
        if (kind == "mask") {
            return MeasureMask{targets};
        }
        if (kind == "difference") {
            if (targets.size() != 2) {
                fail(where + ".targets", "difference measurement takes two targets");
            }
            return MeasureDifference{targets[0], targets[1]};
        }
        fail(where + ".kind", "unknown measurement kind '" + kind + "'");
    }
    fail(where + ".type", "unknown event type '" + type + "'");
}

Json event_to_json(const ControlEvent& event) {
    if (std::holds_alternative<InitializePumped>(event)) {
        return {{"type", "init"}};
    }
    if (const auto* e = std::get_if<Delay>(&event)) {
        return {{"type", "delay"}, {"seconds", e->seconds}};
    }
    if (const auto* e = std::get_if<Pulse>(&event)) {
        return {{"type", "pulse"}, {"target", e->target}, {"axis", e->axis}, {"angle", e->angle}};
    }
    if (const auto* e = std::get_if<SetSwitch>(&event)) {
        return {{"type", "switch"}, {"pair", e->pair}, {"factor", e->factor}};
    }
    if (const auto* e = std::get_if<MeasureSingle>(&event)) {
        return {{"type", "measure"}, {"kind", "single"}, {"targets", {e->target}}};
    }
    if (const auto* e = std::get_if<MeasureMask>(&event)) {
        return {{"type", "measure"}, {"kind", "mask"}, {"targets", e->targets}};
    }
    const auto& d = std::get<MeasureDifference>(event);
    return {{"type", "measure"}, {"kind", "difference"}, {"targets", {d.i, d.j}}};
}

}  // namespace

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError(path.string() + ": cannot open file");
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(path.string() + ": cannot write file");
    }
    out << doc.dump(2) << '\n';
}

ChainSpec chain_from_json(const Json& doc) {
    expect_keys(doc, "chain", {"field_tesla", "coupling", "nuclei"});
    ChainSpec spec;
    spec.field_tesla = number(doc["field_tesla"], "chain.field_tesla");

    const Json& coupling = doc["coupling"];
    expect_keys(coupling, "chain.coupling", {}, {"anchor_energy_joules", "v_prefactor", "c", "cutoff", "z_ref"});
    const bool anchored = coupling.contains("anchor_energy_joules");
    if (anchored == coupling.contains("v_prefactor")) {
        fail("chain.coupling", "exactly one of 'anchor_energy_joules' and 'v_prefactor' is required");
    }
    const double c = coupling.contains("c") ? number(coupling["c"], "chain.coupling.c") : 1.0;
    if (coupling.contains("z_ref") && !anchored) {
        fail("chain.coupling", "'z_ref' only applies to an anchor energy");
    }
    try {
        if (anchored) {
            const double z_ref = coupling.contains("z_ref") ? number(coupling["z_ref"], "chain.coupling.z_ref") : 1.0;
            spec.coupling = calibrate_prefactor(number(coupling["anchor_energy_joules"], "chain.coupling.anchor_energy_joules"),
                                                z_ref, spec.field_tesla, c);
        } else {
            spec.coupling = {number(coupling["v_prefactor"], "chain.coupling.v_prefactor"), c};
        }
    } catch (const std::domain_error& e) {
        fail("chain.coupling", e.what());
    }
    if (coupling.contains("cutoff")) {
        const Json& cutoff = coupling["cutoff"];
        if (cutoff.is_string()) {
            const auto name = cutoff.get<std::string>();
            if (name == "all") {
                spec.cutoff = CouplingCutoff::all_pairs();
            } else if (name == "nn") {
                spec.cutoff = CouplingCutoff::nearest_neighbor();
            } else {
                fail("chain.coupling.cutoff", "expected \"all\", \"nn\" or a radius in nm");
            }
        } else {
            spec.cutoff = CouplingCutoff::radius(number(cutoff, "chain.coupling.cutoff"));
        }
    }

    const Json& nuclei = doc["nuclei"];
    if (!nuclei.is_array()) {
        fail("chain.nuclei", "expected an array");
    }
    for (std::size_t k = 0; k < nuclei.size(); ++k) {
        const std::string where = "chain.nuclei[" + std::to_string(k) + "]";
        const Json& entry = nuclei[k];
        expect_keys(entry, where, {"z", "gamma_rad_per_s_per_t", "position_nm"}, {"label"});
        NucleusSpec nucleus;
        nucleus.atomic_number = integer(entry["z"], where + ".z");
        nucleus.gyromagnetic_ratio = number(entry["gamma_rad_per_s_per_t"], where + ".gamma_rad_per_s_per_t");
        nucleus.label = entry.contains("label") ? text(entry["label"], where + ".label") : "";
        const auto position = numbers(entry["position_nm"], where + ".position_nm", 2);
        spec.nuclei.push_back(std::move(nucleus));
        spec.positions_nm.push_back({position[0], position[1]});
    }
    try {
        spec.validate();
    } catch (const std::logic_error& e) {
        fail("chain", e.what());
    }
    return spec;
}

Json chain_to_json(const ChainSpec& spec) {
    Json coupling = {{"v_prefactor", spec.coupling.v_prefactor * spec.coupling_scale},
                     {"c", spec.coupling.c_dimensionless}};
    switch (spec.cutoff.kind) {
        case CouplingCutoff::Kind::AllPairs:
            coupling["cutoff"] = "all";
            break;
        case CouplingCutoff::Kind::NearestNeighbor:
            coupling["cutoff"] = "nn";
            break;
        case CouplingCutoff::Kind::Radius:
            coupling["cutoff"] = spec.cutoff.radius_nm;
            break;
    }
    Json nuclei = Json::array();
    for (int k = 0; k < spec.size(); ++k) {
        nuclei.push_back({{"label", spec.nuclei[k].label},
                          {"z", spec.nuclei[k].atomic_number},
                          {"gamma_rad_per_s_per_t", spec.nuclei[k].gyromagnetic_ratio},
                          {"position_nm", {spec.positions_nm[k].x, spec.positions_nm[k].y}}});
    }
    return {{"field_tesla", spec.field_tesla}, {"coupling", coupling}, {"nuclei", nuclei}};
}

Program program_from_json(const Json& doc) {
    expect_keys(doc, "program", {"events"}, {"name", "description"});
    Program program;
    if (doc.contains("name")) {
        program.name = text(doc["name"], "program.name");
    }
    if (doc.contains("description")) {
        program.description = text(doc["description"], "program.description");
    }
    const Json& events = doc["events"];
    if (!events.is_array()) {
        fail("program.events", "expected an array");
    }
    for (std::size_t k = 0; k < events.size(); ++k) {
        program.events.push_back(event_from_json(events[k], "program.events[" + std::to_string(k) + "]"));
    }
    return program;
}

Json program_to_json(const Program& program) {
    Json events = Json::array();
    for (const auto& event : program.events) {
        events.push_back(event_to_json(event));
    }
    Json doc = {{"name", program.name}, {"events", events}};
    if (!program.description.empty()) {
        doc["description"] = program.description;
    }
    return doc;
}

Json measurement_to_json(const MeasurementOutcome& outcome) {
    return {{"kind", kind_name(outcome.kind)},
            {"targets", outcome.targets},
            {"values", outcome.values},
            {"eigenvalues", outcome.eigenvalues},
            {"probability", outcome.probability}};
}

Json run_result_to_json(const RunResult& result, const Program& program, const RunMetadata& metadata,
                        bool emit_state) {
    Json measurements = Json::array();
    for (const auto& outcome : result.measurement_log) {
        measurements.push_back(measurement_to_json(outcome));
    }
    Json z_expectations = Json::array();
    for (int q = 0; q < result.final_state.qubits(); ++q) {
        z_expectations.push_back(result.final_state.expectation_z(q));
    }
    Json doc = {
        {"metadata",
         {{"tool", "qhechain"},
          {"version", kVersion},
          {"program", program.name},
          {"seed", metadata.seed},
          {"readout_error", metadata.readout_error},
          {"t1_seconds", metadata.noise.enabled ? Json(metadata.noise.t1_seconds) : Json(nullptr)},
          {"timestamp", metadata.timestamp}}},
        {"total_duration_seconds", result.total_duration},
        {"segment_count", result.segment_count},
        {"measurements", measurements},
        {"z_expectations", z_expectations},
    };
    if (emit_state) {
        Json re = Json::array();
        Json im = Json::array();
        for (std::int64_t k = 0; k < result.final_state.dimension(); ++k) {
            re.push_back(result.final_state[k].real());
            im.push_back(result.final_state[k].imag());
        }
        doc["final_state"] = {{"qubits", result.final_state.qubits()}, {"re", re}, {"im", im}};
    }
    return doc;
}

Json ensemble_report_to_json(const EnsembleReport& report) {
    Json replicas = Json::array();
    for (const auto& r : report.per_replica) {
        replicas.push_back({{"seed", r.seed}, {"value", r.value}});
    }
    Json doc = {{"replicas", report.per_replica.size()},
                {"mean", report.mean},
                {"std_error", report.std_error},
                {"per_replica", replicas}};
    doc["majority_value"] = report.majority_value ? Json(*report.majority_value) : Json(nullptr);
    return doc;
}

Json synthesis_report_to_json(const SynthesisResult& result, const std::string& target,
                              const std::vector<int>& qubits) {
    return {{"target", target},
            {"qubits", qubits},
            {"fidelity", result.fidelity},
            {"infidelity", 1.0 - result.fidelity},
            {"objective_fidelity", result.objective_fidelity},
            {"converged", result.converged},
            {"iterations", result.iterations},
            {"evaluations", result.evaluations},
            {"duration_seconds", result.program.total_delay()},
            {"warnings", result.warnings}};
}

}  // namespace qhe
