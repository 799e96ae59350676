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

// JSON file formats: chain specs, programs and result documents. Parsing is
// strict; unknown keys anywhere are rejected.

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qhechain/compiler.hpp"
#include "qhechain/control.hpp"
#include "qhechain/ensemble.hpp"

namespace qhe {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;

/// Malformed or schema-violating input.
class SchemaError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Reads and parses a JSON file; throws SchemaError on missing files and
/// syntax errors.
Json load_json_file(const std::filesystem::path& path);

/// Writes `doc` pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& doc);

/// {"field_tesla", "coupling": {"anchor_energy_joules" | "v_prefactor", "c",
/// "cutoff", "z_ref"}, "nuclei": [{"label", "z", "gamma_rad_per_s_per_t",
/// "position_nm"}]}. An anchor energy is calibrated at the file's field for
/// atomic number z_ref (default 1).
ChainSpec chain_from_json(const Json& doc);
/// Always emits the explicit v_prefactor form.
Json chain_to_json(const ChainSpec& spec);

Program program_from_json(const Json& doc);
Json program_to_json(const Program& program);

Json measurement_to_json(const MeasurementOutcome& outcome);

struct RunMetadata {
    std::uint64_t seed = 0;
    double readout_error = 0.0;
    NoiseParams noise;
    std::string timestamp;
};

Json run_result_to_json(const RunResult& result, const Program& program, const RunMetadata& metadata,
                        bool emit_state);

Json ensemble_report_to_json(const EnsembleReport& report);

Json synthesis_report_to_json(const SynthesisResult& result, const std::string& target,
                              const std::vector<int>& qubits);

}  // namespace qhe
