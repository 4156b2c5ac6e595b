// SPDX-License-Identifier: Apache-2.0
//
// anelab: analysis and simulation of multi-channel multi-tone active
// noise equalizers.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "anelab/cli.hpp"

#include <complex>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "anelab/equalizer.hpp"
#include "anelab/pole_search.hpp"
#include "anelab/scenario_io.hpp"
#include "anelab/tf_analysis.hpp"
#include "anelab/validation.hpp"

namespace ane {

namespace {

Strategy pick_strategy(const Scenario& s, const std::string& override_name) {
    if (override_name.empty()) return s.eq.strategy;
    if (override_name == "common") return Strategy::common;
    if (override_name == "multiple") return Strategy::multiple;
    throw Error("unknown strategy \"" + override_name + "\" (use common or multiple)");
}

void add_strategy_flag(CLI::App* cmd, std::string& target) {
    cmd->add_option("--strategy", target, "Override the scenario's pseudo-error strategy")
        ->check(CLI::IsMember({"common", "multiple"}));
}

int run_sim(const std::string& scenario_path, std::uint64_t steps, const std::string& out,
            const std::string& strategy_name, std::size_t decimation) {
    Scenario s = parse_scenario(scenario_path);
    s.eq.strategy = pick_strategy(s, strategy_name);
    const SimulationTrace trace = run_simulation(s, steps);
    write_trace_csv(out, trace, decimation);
    if (trace.diverged) {
        std::cerr << "simulation diverged: " << trace.divergence_message << "\n";
        std::cerr << "partial trace (" << trace.steps << " samples) written to " << out << "\n";
        return 1;
    }
    std::cout << "wrote " << trace.steps << " samples to " << out << "\n";
    return 0;
}

int run_tf(const std::string& scenario_path, std::size_t sensor, std::size_t grid, double radius,
           const std::string& out, const std::string& strategy_name) {
    const Scenario s = parse_scenario(scenario_path);
    if (sensor == 0 || sensor > s.sensors) throw Error("--sensor must be in 1.." + std::to_string(s.sensors));
    const Strategy strategy = pick_strategy(s, strategy_name);
    const SweepTable table = sweep(s, strategy, sensor - 1, grid, radius);
    write_sweep_csv(out, table);
    std::cout << "wrote " << table.freq.size() << " sweep points (sensor " << sensor << ") to "
              << out << "\n";
    return 0;
}

int run_poles(const std::string& scenario_path, const std::string& out,
              const std::string& strategy_name) {
    const Scenario s = parse_scenario(scenario_path);
    const Strategy strategy = pick_strategy(s, strategy_name);
    const auto poles = estimate_all_poles(s, strategy);
    write_pole_csv(out, poles);
    std::size_t boundary = 0;
    for (const auto& p : poles)
        if (p.unstable_or_boundary) ++boundary;
    std::cout << "wrote " << poles.size() << " pole estimates to " << out;
    if (boundary > 0) std::cout << " (" << boundary << " boundary-flagged)";
    std::cout << "\n";
    return 0;
}

int run_gfunc(const std::string& scenario_path, std::size_t j, std::size_t m, std::size_t tone,
              std::size_t grid, const std::string& out) {
    const Scenario s = parse_scenario(scenario_path);
    if (j == 0 || j > s.actuators) throw Error("--j must be in 1.." + std::to_string(s.actuators));
    if (m == 0 || m > s.sensors) throw Error("--m must be in 1.." + std::to_string(s.sensors));
    if (tone == 0 || tone > s.tone_count())
        throw Error("--tone must be in 1.." + std::to_string(s.tone_count()));
    if (grid < 16) throw Error("--grid must be at least 16");

    SweepTable table;
    table.sensor = m - 1;
    table.radius = 1.0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < grid; ++i) {
        const double f = 0.5 * static_cast<double>(i) / static_cast<double>(grid);
        table.freq.push_back(f);
        try {
            const Complex g = aux_gain_multi(
                s, std::polar(1.0, 2.0 * std::numbers::pi * f), tone - 1, j - 1, m - 1);
            table.value.push_back(g);
            table.magnitude.push_back(std::abs(g));
            table.phase.push_back(std::arg(g));
            table.flag.push_back(SweepFlag::ok);
        } catch (const PoleProximityError&) {
            table.value.push_back(Complex{nan, nan});
            table.magnitude.push_back(nan);
            table.phase.push_back(nan);
            table.flag.push_back(SweepFlag::failed);
        }
    }
    write_sweep_csv(out, table);
    std::cout << "wrote " << grid << " loop-gain points to " << out << "\n";
    return 0;
}

int run_verify(const std::string& scenario_path, const std::string& suite, const std::string& out,
               const std::string& strategy_name, std::uint64_t steps, double probe_freq,
               double probe_amplitude) {
    const Scenario s = parse_scenario(scenario_path);
    const Strategy strategy = pick_strategy(s, strategy_name);

    ValidationReport report;
    if (suite == "gains" || suite == "all") report.merge(verify_control_gains(s, strategy));
    if (suite == "sim" || suite == "all")
        report.merge(verify_simulation_matches_targets(s, strategy, steps));
    if (suite == "probe" || suite == "all") {
        const double f = probe_freq > 0.0 ? probe_freq : default_probe_frequency(s);
        report.merge(verify_probe_response(s, strategy, f, probe_amplitude));
    }
    if (suite == "equivalence" || suite == "all")
        report.merge(verify_strategy_equivalence_l1(s));

    std::cout << report_to_text(report);
    if (!out.empty()) {
        write_report_text(out + ".txt", report);
        write_report_csv(out + ".csv", report);
        std::cout << "report written to " << out << ".txt and " << out << ".csv\n";
    }
    return report.all_passed() ? 0 : 1;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"anelab: multi-channel multi-tone active noise equalizer analysis"};
    app.require_subcommand(1);

    std::string scenario_path, out, strategy_name;
    std::uint64_t steps = 1;
    std::size_t decimation = 1;

    auto* sim = app.add_subcommand("sim", "Run the adaptive simulation and write a trace CSV");
    sim->add_option("--scenario", scenario_path, "Scenario file")->required();
    sim->add_option("--steps", steps, "Number of samples to simulate")
        ->required()
        ->check(CLI::PositiveNumber);
    sim->add_option("--out", out, "Output trace CSV")->required();
    sim->add_option("--trace-decimation", decimation, "Write every D-th sample")
        ->check(CLI::PositiveNumber);
    add_strategy_flag(sim, strategy_name);

    std::size_t sensor = 1, grid = 4096;
    double radius = 1.0;
    auto* tf = app.add_subcommand("tf", "Evaluate a frequency-response sweep and write a CSV");
    tf->add_option("--scenario", scenario_path, "Scenario file")->required();
    tf->add_option("--sensor", sensor, "Sensor index (1-based)")->check(CLI::PositiveNumber);
    tf->add_option("--grid", grid, "Sweep grid size");
    tf->add_option("--radius", radius, "Evaluation radius in the z-plane");
    tf->add_option("--out", out, "Output sweep CSV")->required();
    add_strategy_flag(tf, strategy_name);

    auto* poles = app.add_subcommand("poles", "Estimate pole radii along the control angles");
    poles->add_option("--scenario", scenario_path, "Scenario file")->required();
    poles->add_option("--out", out, "Output pole CSV")->required();
    add_strategy_flag(poles, strategy_name);

    std::size_t gfunc_j = 1, gfunc_m = 1, gfunc_tone = 1;
    auto* gfunc = app.add_subcommand("gfunc", "Emit |G_jm(e^{i w})| samples for one loop gain");
    gfunc->add_option("--scenario", scenario_path, "Scenario file")->required();
    gfunc->add_option("--j", gfunc_j, "Actuator index (1-based)")->check(CLI::PositiveNumber);
    gfunc->add_option("--m", gfunc_m, "Sensor index (1-based)")->check(CLI::PositiveNumber);
    gfunc->add_option("--tone", gfunc_tone, "Tone index (1-based)")->check(CLI::PositiveNumber);
    gfunc->add_option("--grid", grid, "Grid size");
    gfunc->add_option("--out", out, "Output CSV")->required();

    std::string suite = "all";
    double probe_freq = 0.0, probe_amplitude = 1.0;
    std::uint64_t verify_steps = 200000;
    auto* verify = app.add_subcommand("verify", "Run cross-validation suites");
    verify->add_option("--scenario", scenario_path, "Scenario file")->required();
    verify->add_option("--suite", suite, "Which checks to run")
        ->check(CLI::IsMember({"gains", "sim", "probe", "equivalence", "all"}));
    verify->add_option("--out", out, "Report base path (writes .txt and .csv)");
    verify->add_option("--steps", verify_steps, "Simulation length for the sim suite")
        ->check(CLI::PositiveNumber);
    verify->add_option("--probe-freq", probe_freq, "Probe frequency (default: widest gap midpoint)");
    verify->add_option("--probe-amplitude", probe_amplitude, "Probe amplitude");
    add_strategy_flag(verify, strategy_name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) return run_sim(scenario_path, steps, out, strategy_name, decimation);
        if (tf->parsed()) return run_tf(scenario_path, sensor, grid, radius, out, strategy_name);
        if (poles->parsed()) return run_poles(scenario_path, out, strategy_name);
        if (gfunc->parsed())
            return run_gfunc(scenario_path, gfunc_j, gfunc_m, gfunc_tone, grid, out);
        if (verify->parsed())
            return run_verify(scenario_path, suite, out, strategy_name, verify_steps, probe_freq,
                              probe_amplitude);
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace ane
