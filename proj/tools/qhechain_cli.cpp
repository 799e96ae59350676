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

// qhechain: simulate, compile, sweep and ensemble commands over JSON chain
// and program files.
//
// Exit codes: 0 success, 2 invalid input, 3 synthesis did not converge,
// 1 internal error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ctime>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qhechain/io.hpp"

namespace {

using namespace qhe;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNotConverged = 3;

class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buffer;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(path + ": cannot write file");
    }
    out << text;
}

std::string json_text(const Json& doc) { return doc.dump(2) + "\n"; }

NoiseParams noise_from(double t1) { return t1 > 0.0 ? NoiseParams::with_t1(t1) : NoiseParams::disabled(); }

Json metadata(const std::string& command, std::uint64_t seed) {
    return {{"tool", "qhechain"}, {"version", kVersion}, {"command", command}, {"seed", seed},
            {"timestamp", utc_timestamp()}};
}

/// "z:0,2" -> product of sigma_z on spins 0 and 2; "J:0,1" -> pair coupling.
struct Observable {
    char kind = 'z';
    std::vector<int> qubits;
};

Observable parse_observable(const std::string& text) {
    if (text.size() < 3 || text[1] != ':' || (text[0] != 'z' && text[0] != 'J')) {
        throw UsageError("observable must look like z:i[,j...] or J:i,j, got '" + text + "'");
    }
    Observable obs{text[0], {}};
    std::stringstream list(text.substr(2));
    std::string item;
    while (std::getline(list, item, ',')) {
        try {
            std::size_t used = 0;
            obs.qubits.push_back(std::stoi(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error&) {
            throw UsageError("bad spin index '" + item + "' in observable");
        }
    }
    if (obs.qubits.empty() || (obs.kind == 'J' && obs.qubits.size() != 2)) {
        throw UsageError("observable '" + text + "' has the wrong number of spins");
    }
    return obs;
}

std::vector<double> parse_range(const std::string& text) {
    std::stringstream in(text);
    std::string a, b, n;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, n) || in.rdbuf()->in_avail()) {
        throw UsageError("range must be a:b:steps, got '" + text + "'");
    }
    double start = 0.0, stop = 0.0;
    int steps = 0;
    try {
        start = std::stod(a);
        stop = std::stod(b);
        steps = std::stoi(n);
    } catch (const std::logic_error&) {
        throw UsageError("range must be a:b:steps, got '" + text + "'");
    }
    if (steps < 1 || !std::isfinite(start) || !std::isfinite(stop)) {
        throw UsageError("range needs finite bounds and at least one step");
    }
    std::vector<double> values;
    for (int k = 0; k < steps; ++k) {
        values.push_back(steps == 1 ? start : start + (stop - start) * k / (steps - 1));
    }
    return values;
}

ChainSpec load_chain(const std::string& path) { return chain_from_json(load_json_file(path)); }

Program load_program(const std::string& path, const ChainSpec& spec) {
    Program program = program_from_json(load_json_file(path));
    const auto diagnostics = validate(program, spec);
    if (!diagnostics.empty()) {
        throw ProgramError(diagnostics);
    }
    return program;
}

// simulate

struct SimulateArgs {
    std::string chain, program, output;
    std::uint64_t seed = 0;
    double readout_error = 0.0;
    double t1 = 0.0;
    bool emit_state = false;
};

int cmd_simulate(const SimulateArgs& args) {
    const auto spec = load_chain(args.chain);
    const auto program = load_program(args.program, spec);
    RunOptions options;
    options.seed = args.seed;
    options.readout_error = args.readout_error;
    options.noise = noise_from(args.t1);
    const auto result = run(program, spec, options);
    const auto doc = run_result_to_json(result, program,
                                        {args.seed, args.readout_error, options.noise, utc_timestamp()},
                                        args.emit_state);
    emit(args.output, json_text(doc));
    return kExitOk;
}

// compile

struct CompileArgs {
    std::string chain, target, output, report;
    std::vector<int> qubits;
    int budget = SynthesisBudget{}.max_evaluations;
    std::uint64_t seed = 1;
    double tau = 0.0;
};

SynthesisResult compile_target(const ChainSpec& spec, const CompileArgs& args) {
    SynthesisBudget budget;
    budget.max_evaluations = args.budget;
    budget.seed = args.seed;
    if (args.target == "idle") {
        double tau = args.tau;
        if (tau <= 0.0) {
            const auto table = coupling_table(spec);
            tau = table.empty() || table.front().coupling <= 0.0 ? 1e-9 : 1.0 / table.front().coupling;
        }
        return idle_identity(spec, tau);
    }
    if (args.qubits.size() != 2) {
        throw UsageError("--qubits needs two spin indices for target " + args.target);
    }
    const std::array<int, 2> pair{args.qubits[0], args.qubits[1]};
    TargetUnitary target{gates::iswap(), args.qubits};
    int delays = 1;
    if (args.target == "iswap") {
        target.validate(spec.size());
        if (spec.pair_coupling(pair[0], pair[1]) > 0.0) {
            auto closed = calibrate_iswap(spec, pair);
            if (closed.converged) {
                return closed;
            }
        }
    } else if (args.target == "cnot") {
        target.matrix = gates::cnot();
        delays = 2;
    } else if (args.target == "swap") {
        target.matrix = gates::swap();
        delays = 3;
    } else {
        throw UsageError("unknown target '" + args.target + "'");
    }
    target.validate(spec.size());
    return synthesize(spec, target, layered_template(spec, pair, delays), budget);
}

int cmd_compile(const CompileArgs& args) {
    const auto spec = load_chain(args.chain);
    if (args.budget < 1) {
        throw UsageError("--budget must be positive");
    }
    const auto result = compile_target(spec, args);
    Program program = result.program;
    program.name = args.target;
    Json report = synthesis_report_to_json(result, args.target, args.qubits);
    report["metadata"] = metadata("compile", args.seed);
    report["metadata"]["budget"] = args.budget;
    emit(args.output, json_text(program_to_json(program)));
    if (!args.report.empty()) {
        emit(args.report, json_text(report));
    } else {
        std::cerr << "fidelity " << result.fidelity << (result.converged ? " converged" : " not converged") << '\n';
    }
    for (const auto& warning : result.warnings) {
        std::cerr << "warning: " << warning << '\n';
    }
    return result.converged ? kExitOk : kExitNotConverged;
}

// sweep and ensemble

struct EnsembleArgs {
    std::string chain, program, output, observable = "z:0";
    int replicas = 1;
    std::uint64_t seed = 0;
    double position_sigma = 0.0;
    double coupling_sigma = 0.0;
    double readout_error = 0.0;
    double t1 = 0.0;
    int majority = -1;
    std::string param, range;
};

void check_spins(const Observable& obs, const ChainSpec& spec) {
    for (int q : obs.qubits) {
        if (q < 0 || q >= spec.size()) {
            throw UsageError("observable spin " + std::to_string(q) + " is outside the chain");
        }
    }
}

EnsembleReport evaluate(const ChainSpec& spec, const std::optional<Program>& program, const Observable& obs,
                        const DisorderParams& disorder, const EnsembleArgs& args) {
    check_spins(obs, spec);
    if (obs.kind == 'J') {
        std::vector<ReplicaRecord> records;
        for (int r = 0; r < args.replicas; ++r) {
            const auto seed = replica_seed(args.seed, r);
            records.push_back({seed, sample_replica(spec, disorder, seed).pair_coupling(obs.qubits[0], obs.qubits[1])});
        }
        return summarize(std::move(records));
    }
    if (!program) {
        throw UsageError("a program file is required for z observables");
    }
    return run_ensemble(*program, spec, disorder, {obs.qubits}, args.replicas, args.seed, noise_from(args.t1));
}

ChainSpec with_spacing(ChainSpec spec, double spacing_nm) {
    if (spec.size() < 2) {
        throw UsageError("a spacing sweep needs at least two spins");
    }
    const double factor = spacing_nm / spec.separation_nm(0, 1);
    const Point2 origin = spec.positions_nm[0];
    for (auto& p : spec.positions_nm) {
        p = {origin.x + (p.x - origin.x) * factor, origin.y + (p.y - origin.y) * factor};
    }
    return spec;
}

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

int cmd_sweep(const EnsembleArgs& args) {
    const auto base = load_chain(args.chain);
    const auto obs = parse_observable(args.observable);
    const auto values = parse_range(args.range);
    std::optional<Program> program;
    if (!args.program.empty()) {
        program = load_program(args.program, base);
    }
    if (args.replicas < 1) {
        throw UsageError("--replicas must be positive");
    }
    std::string csv = "param,mean,std_error,replicas\n";
    for (double value : values) {
        ChainSpec spec = base;
        DisorderParams disorder{args.position_sigma, args.coupling_sigma, 0.0};
        if (args.param == "field") {
            spec.field_tesla = value;
        } else if (args.param == "spacing") {
            spec = with_spacing(spec, value);
        } else if (args.param == "coupling-sigma") {
            disorder.coupling_scale_sigma = value;
        } else {
            throw UsageError("unknown sweep parameter '" + args.param + "'");
        }
        try {
            spec.validate();
            disorder.validate();
        } catch (const std::logic_error& e) {
            throw UsageError("sweep value " + format_double(value) + ": " + e.what());
        }
        const auto report = evaluate(spec, program, obs, disorder, args);
        csv += format_double(value) + "," + format_double(report.mean) + "," + format_double(report.std_error) +
               "," + std::to_string(args.replicas) + "\n";
    }
    emit(args.output, csv);
    return kExitOk;
}

int cmd_ensemble(const EnsembleArgs& args) {
    const auto spec = load_chain(args.chain);
    const auto program = load_program(args.program, spec);
    const DisorderParams disorder{args.position_sigma, args.coupling_sigma, args.readout_error};
    disorder.validate();
    EnsembleReport report;
    if (args.majority >= 0) {
        report = majority_readout(program, spec, args.majority, args.replicas, args.readout_error, args.seed);
    } else {
        report = evaluate(spec, program, parse_observable(args.observable), disorder, args);
    }
    Json doc = ensemble_report_to_json(report);
    doc["metadata"] = metadata("ensemble", args.seed);
    doc["metadata"]["program"] = program.name;
    doc["metadata"]["observable"] = args.majority >= 0 ? "majority:" + std::to_string(args.majority) : args.observable;
    doc["metadata"]["position_sigma_nm"] = args.position_sigma;
    doc["metadata"]["coupling_sigma"] = args.coupling_sigma;
    doc["metadata"]["readout_error"] = args.readout_error;
    emit(args.output, json_text(doc));
    return kExitOk;
}

void print_program_error(const ProgramError& e) {
    std::cerr << "error: invalid program\n";
    for (const auto& d : e.diagnostics()) {
        std::cerr << "  event " << d.event_index << ": " << d.message << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and control of hyperfine-coupled nuclear spin chains"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run a control program on a chain");
    simulate->add_option("chain", sim.chain, "Chain spec JSON")->required();
    simulate->add_option("program", sim.program, "Program JSON")->required();
    simulate->add_option("--seed", sim.seed, "Measurement RNG seed");
    simulate->add_option("--readout-error", sim.readout_error, "Readout flip probability")->check(CLI::Range(0.0, 0.5));
    simulate->add_option("--t1", sim.t1, "T1 relaxation time in seconds (off when absent)")
        ->check(CLI::PositiveNumber);
    simulate->add_flag("--emit-state", sim.emit_state, "Include final amplitudes");
    simulate->add_option("-o,--output", sim.output, "Result file (stdout when absent)");

    CompileArgs comp;
    auto* compile = app.add_subcommand("compile", "Compile a gate to a control program");
    compile->add_option("chain", comp.chain, "Chain spec JSON")->required();
    compile->add_option("--target", comp.target, "iswap, cnot, swap or idle")->required();
    compile->add_option("--qubits", comp.qubits, "Target spin pair")->expected(2);
    compile->add_option("--budget", comp.budget, "Maximum objective evaluations");
    compile->add_option("--seed", comp.seed, "Optimizer seed");
    compile->add_option("--tau", comp.tau, "Idle duration in seconds");
    compile->add_option("-o,--output", comp.output, "Program file (stdout when absent)");
    compile->add_option("--report", comp.report, "Fidelity report file");

    EnsembleArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Sweep a parameter and average an observable");
    sweep->add_option("chain", sw.chain, "Chain spec JSON")->required();
    sweep->add_option("program", sw.program, "Program JSON (needed for z observables)");
    sweep->add_option("--param", sw.param, "field, spacing or coupling-sigma")->required();
    sweep->add_option("--range", sw.range, "start:stop:steps")->required();
    sweep->add_option("--observable", sw.observable, "z:i[,j...] or J:i,j");
    sweep->add_option("--replicas", sw.replicas, "Replicas per step");
    sweep->add_option("--seed", sw.seed, "Master seed");
    sweep->add_option("--position-sigma", sw.position_sigma, "Position jitter in nm");
    sweep->add_option("--coupling-sigma", sw.coupling_sigma, "Relative coupling spread");
    sweep->add_option("--t1", sw.t1, "T1 relaxation time in seconds")->check(CLI::PositiveNumber);
    sweep->add_option("-o,--output", sw.output, "CSV file (stdout when absent)");

    EnsembleArgs ens;
    auto* ensemble = app.add_subcommand("ensemble", "Run a disordered replica ensemble");
    ensemble->add_option("chain", ens.chain, "Chain spec JSON")->required();
    ensemble->add_option("program", ens.program, "Program JSON")->required();
    ensemble->add_option("--observable", ens.observable, "z:i[,j...] or J:i,j");
    ensemble->add_option("--replicas", ens.replicas, "Number of replicas");
    ensemble->add_option("--seed", ens.seed, "Master seed");
    ensemble->add_option("--position-sigma", ens.position_sigma, "Position jitter in nm");
    ensemble->add_option("--coupling-sigma", ens.coupling_sigma, "Relative coupling spread");
    ensemble->add_option("--readout-error", ens.readout_error, "Readout flip probability");
    ensemble->add_option("--t1", ens.t1, "T1 relaxation time in seconds")->check(CLI::PositiveNumber);
    ensemble->add_option("--majority", ens.majority, "Majority-vote single-shot readout of this spin");
    ensemble->add_option("-o,--output", ens.output, "Report file (stdout when absent)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*simulate) {
            return cmd_simulate(sim);
        }
        if (*compile) {
            return cmd_compile(comp);
        }
        if (*sweep) {
            return cmd_sweep(sw);
        }
        return cmd_ensemble(ens);
    } catch (const ProgramError& e) {
        print_program_error(e);
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
