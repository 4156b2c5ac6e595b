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

#ifndef ANELAB_SCENARIO_IO_HPP
#define ANELAB_SCENARIO_IO_HPP

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "anelab/pole_search.hpp"
#include "anelab/scenario.hpp"
#include "anelab/tf_analysis.hpp"
#include "anelab/validation.hpp"

namespace ane {

/// Loads, normalises and validates a scenario file (JSON, // comments
/// allowed).  The scenario name is the file stem.  Syntax errors carry
/// line/column, semantic violations are itemised all at once.
Scenario parse_scenario(const std::filesystem::path& path);

/// Same as parse_scenario but from an in-memory document.
Scenario parse_scenario_text(std::string_view text, std::string name = "");

/// Canonical normalised form: defaults materialised, phases reduced, keys
/// sorted.  Re-parsing it yields an identical scenario.
std::string canonical_text(const Scenario& scenario);

/// CSV columns: f, re, im, mag, phase, flag.
void write_sweep_csv(const std::filesystem::path& path, const SweepTable& table);

/// CSV columns: n, d_1..d_K, e_1..e_K; rows decimated by `decimation`.
void write_trace_csv(const std::filesystem::path& path, const SimulationTrace& trace,
                     std::size_t decimation = 1);

/// CSV columns: sensor, tone_f, radius, angle, peak, flag.
void write_pole_csv(const std::filesystem::path& path, std::span<const PoleEstimate> poles);

/// Human-readable report, one line per check plus a summary.
void write_report_text(const std::filesystem::path& path, const ValidationReport& report);

/// Machine-readable report CSV.
void write_report_csv(const std::filesystem::path& path, const ValidationReport& report);

/// Renders the report as the text written by write_report_text.
std::string report_to_text(const ValidationReport& report);

} // namespace ane

#endif // ANELAB_SCENARIO_IO_HPP
