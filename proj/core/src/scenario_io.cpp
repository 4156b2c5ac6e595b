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

#include "anelab/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace ane {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

// Reads either a scalar (broadcast) or a list of exactly `count` numbers.
std::vector<double> number_list(const json& j, std::size_t count, const std::string& where,
                                std::vector<std::string>& issues) {
    std::vector<double> out;
    if (j.is_number()) {
        out.assign(count, j.get<double>());
        return out;
    }
    if (!j.is_array()) {
        issues.push_back(where + " must be a number or an array of numbers");
        return std::vector<double>(count, 0.0);
    }
    if (j.size() != count)
        issues.push_back(where + " must have exactly " + std::to_string(count) + " entries, found " +
                         std::to_string(j.size()));
    for (const auto& v : j) {
        if (!v.is_number()) {
            issues.push_back(where + " entries must be numbers");
            out.push_back(0.0);
        } else {
            out.push_back(v.get<double>());
        }
    }
    out.resize(count, 0.0);
    return out;
}

// Reads a rows x cols table of numbers into a flat row-major vector.
std::vector<double> number_table(const json& j, std::size_t rows, std::size_t cols,
                                 const std::string& where, std::vector<std::string>& issues) {
    std::vector<double> out(rows * cols, 0.0);
    if (!j.is_array() || j.size() != rows) {
        issues.push_back(where + " must be an array of " + std::to_string(rows) + " rows, found " +
                         (j.is_array() ? std::to_string(j.size()) + " rows" : std::string("a non-array")));
        return out;
    }
    for (std::size_t r = 0; r < rows; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || row.size() != cols) {
            issues.push_back(where + "[" + std::to_string(r) + "] must have exactly " +
                             std::to_string(cols) + " entries");
            continue;
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (!row[c].is_number()) {
                issues.push_back(where + "[" + std::to_string(r) + "][" + std::to_string(c) +
                                 "] must be a number");
            } else {
                out[r * cols + c] = row[c].get<double>();
            }
        }
    }
    return out;
}

PathResponse parse_path(const json& j, const std::string& where,
                        std::vector<std::string>& issues) {
    try {
        if (j.is_object() && j.contains("fir")) {
            std::vector<double> coeffs;
            for (const auto& v : j["fir"]) coeffs.push_back(v.get<double>());
            return PathResponse::fir(std::move(coeffs));
        }
        if (j.is_object() && j.contains("gains")) {
            std::vector<ToneGain> entries;
            for (const auto& e : j["gains"])
                entries.push_back(ToneGain{e.at("freq").get<double>(),
                                           e.at("amplitude").get<double>(),
                                           e.value("phase", 0.0)});
            return PathResponse::gain_table(std::move(entries));
        }
        issues.push_back(where + " must be an object with a \"fir\" or \"gains\" key");
    } catch (const std::exception& err) {
        issues.push_back(where + ": " + err.what());
    }
    return PathResponse::unity();
}

std::vector<PathResponse> parse_path_grid(const json& j, std::size_t actuators,
                                          std::size_t sensors, const std::string& where,
                                          std::vector<std::string>& issues) {
    std::vector<PathResponse> grid(actuators * sensors, PathResponse::unity());
    if (!j.is_array() || j.size() != actuators) {
        issues.push_back(where + " must be an array of " + std::to_string(actuators) +
                         " actuator rows");
        return grid;
    }
    for (std::size_t a = 0; a < actuators; ++a) {
        if (!j[a].is_array() || j[a].size() != sensors) {
            issues.push_back(where + "[" + std::to_string(a) + "] must have exactly " +
                             std::to_string(sensors) + " entries");
            continue;
        }
        for (std::size_t k = 0; k < sensors; ++k)
            grid[a * sensors + k] =
                parse_path(j[a][k], where + "[" + std::to_string(a) + "][" + std::to_string(k) + "]",
                           issues);
    }
    return grid;
}

json path_to_json(const PathResponse& p) {
    json j;
    if (p.is_fir()) {
        j["fir"] = p.coefficients();
    } else {
        json gains = json::array();
        for (const auto& e : p.table())
            gains.push_back({{"freq", e.freq}, {"amplitude", e.amplitude}, {"phase", e.phase}});
        j["gains"] = gains;
    }
    return j;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << std::setprecision(12);
    return out;
}

void finish_out(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

const char* flag_name(SweepFlag f) {
    switch (f) {
    case SweepFlag::ok: return "ok";
    case SweepFlag::control: return "control";
    case SweepFlag::failed: return "failed";
    }
    return "failed";
}

} // namespace

Scenario parse_scenario_text(std::string_view text, std::string name) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& err) {
        const auto [line, col] = line_column(text, err.byte);
        throw IoError("scenario syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + err.what());
    }

    std::vector<std::string> issues;
    Scenario s;
    s.name = std::move(name);
    s.description = doc.value("description", std::string{});

    if (!doc.contains("dimensions") || !doc["dimensions"].is_object()) {
        issues.push_back("dimensions section (actuators, sensors, tones) is required");
        throw ValidationError(issues);
    }
    const auto& dims = doc["dimensions"];
    const std::size_t J = dims.value("actuators", std::size_t{0});
    const std::size_t K = dims.value("sensors", std::size_t{0});
    const std::size_t L = dims.value("tones", std::size_t{0});
    if (J == 0) issues.push_back("dimensions.actuators must be a positive integer");
    if (K == 0) issues.push_back("dimensions.sensors must be a positive integer");
    if (L == 0) issues.push_back("dimensions.tones must be a positive integer");
    if (!issues.empty()) throw ValidationError(issues);
    s.actuators = J;
    s.sensors = K;

    if (!doc.contains("tones")) {
        issues.push_back("tones section is required");
    } else {
        const auto freqs = number_list(doc["tones"], L, "tones", issues);
        for (double f : freqs) s.tones.push_back(ToneSpec{f});
    }

    if (doc.contains("reference")) {
        const auto& ref = doc["reference"];
        s.reference.amplitude =
            ref.contains("amplitude") ? number_list(ref["amplitude"], L, "reference.amplitude", issues)
                                      : std::vector<double>(L, 1.0);
        s.reference.phase = ref.contains("phase")
                                ? number_list(ref["phase"], L, "reference.phase", issues)
                                : std::vector<double>(L, 0.0);
    } else {
        s.reference = ReferenceSpec::unit(L);
    }

    if (!doc.contains("noise") || !doc["noise"].is_object()) {
        issues.push_back("noise section with a K x L amplitude table is required");
    } else {
        s.noise.sensors = K;
        s.noise.tones = L;
        s.noise.amplitude = number_table(doc["noise"].value("amplitude", json::array()), K, L,
                                         "noise.amplitude", issues);
        s.noise.phase = doc["noise"].contains("phase")
                            ? number_table(doc["noise"]["phase"], K, L, "noise.phase", issues)
                            : std::vector<double>(K * L, 0.0);
    }

    if (!doc.contains("paths") || !doc["paths"].is_object()) {
        issues.push_back("paths section with a J x K \"true\" grid is required");
    } else {
        const auto& paths = doc["paths"];
        s.paths.actuators = J;
        s.paths.sensors = K;
        s.paths.true_paths =
            parse_path_grid(paths.value("true", json::array()), J, K, "paths.true", issues);
        const bool has_estimates = paths.contains("estimated");
        if (has_estimates)
            s.paths.estimated_paths =
                parse_path_grid(paths["estimated"], J, K, "paths.estimated", issues);
        s.paths.perfect_estimates = paths.value("perfect_estimates", !has_estimates);
        if (s.paths.perfect_estimates && !has_estimates)
            s.paths.estimated_paths = s.paths.true_paths;
        if (!s.paths.perfect_estimates && !has_estimates)
            issues.push_back("paths.perfect_estimates is false but no estimated grid is given");
    }

    if (!doc.contains("equalizer") || !doc["equalizer"].is_object()) {
        issues.push_back("equalizer section (beta, mu) is required");
    } else {
        const auto& eq = doc["equalizer"];
        s.eq.tones = L;
        s.eq.sensors = K;
        s.eq.actuators = J;
        s.eq.beta =
            number_table(eq.value("beta", json::array()), L, K, "equalizer.beta", issues);
        s.eq.gamma = eq.contains("gamma")
                         ? number_table(eq["gamma"], L, J, "equalizer.gamma", issues)
                         : std::vector<double>(L * J, 0.0);
        s.eq.mu = eq.contains("mu") ? number_list(eq["mu"], L, "equalizer.mu", issues)
                                    : (issues.push_back("equalizer.mu is required"),
                                       std::vector<double>(L, 0.0));
        const std::string strategy = eq.value("strategy", "common");
        if (strategy == "common") {
            s.eq.strategy = Strategy::common;
        } else if (strategy == "multiple") {
            s.eq.strategy = Strategy::multiple;
        } else {
            issues.push_back("equalizer.strategy must be \"common\" or \"multiple\", found \"" +
                             strategy + "\"");
        }
    }

    if (doc.contains("primary_paths")) {
        const auto& prim = doc["primary_paths"];
        if (!prim.is_array() || prim.size() != K) {
            issues.push_back("primary_paths must list exactly K = " + std::to_string(K) + " paths");
        } else {
            for (std::size_t k = 0; k < K; ++k)
                s.primary.push_back(
                    parse_path(prim[k], "primary_paths[" + std::to_string(k) + "]", issues));
        }
    }

    s.normalize();
    const auto semantic = s.violations();
    issues.insert(issues.end(), semantic.begin(), semantic.end());
    if (!issues.empty()) throw ValidationError(issues);
    return s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path.stem().string());
}

std::string canonical_text(const Scenario& scenario) {
    json doc;
    if (!scenario.description.empty()) doc["description"] = scenario.description;
    doc["dimensions"] = {{"actuators", scenario.actuators},
                         {"sensors", scenario.sensors},
                         {"tones", scenario.tone_count()}};

    json tones = json::array();
    for (const auto& t : scenario.tones) tones.push_back(t.freq);
    doc["tones"] = tones;

    doc["reference"] = {{"amplitude", scenario.reference.amplitude},
                        {"phase", scenario.reference.phase}};

    json namp = json::array(), nphi = json::array();
    for (std::size_t k = 0; k < scenario.sensors; ++k) {
        json ra = json::array(), rp = json::array();
        for (std::size_t l = 0; l < scenario.tone_count(); ++l) {
            ra.push_back(scenario.noise.amp(k, l));
            rp.push_back(scenario.noise.phi(k, l));
        }
        namp.push_back(ra);
        nphi.push_back(rp);
    }
    doc["noise"] = {{"amplitude", namp}, {"phase", nphi}};

    json true_grid = json::array();
    json est_grid = json::array();
    for (std::size_t j = 0; j < scenario.actuators; ++j) {
        json tr = json::array(), er = json::array();
        for (std::size_t k = 0; k < scenario.sensors; ++k) {
            tr.push_back(path_to_json(scenario.paths.true_path(j, k)));
            er.push_back(path_to_json(scenario.paths.estimated_path(j, k)));
        }
        true_grid.push_back(tr);
        est_grid.push_back(er);
    }
    doc["paths"]["true"] = true_grid;
    doc["paths"]["perfect_estimates"] = scenario.paths.perfect_estimates;
    if (!scenario.paths.perfect_estimates) doc["paths"]["estimated"] = est_grid;

    json beta = json::array(), gamma = json::array();
    for (std::size_t l = 0; l < scenario.tone_count(); ++l) {
        json br = json::array(), gr = json::array();
        for (std::size_t k = 0; k < scenario.sensors; ++k) br.push_back(scenario.eq.beta_at(l, k));
        for (std::size_t j = 0; j < scenario.actuators; ++j)
            gr.push_back(scenario.eq.gamma_at(l, j));
        beta.push_back(br);
        gamma.push_back(gr);
    }
    doc["equalizer"] = {{"beta", beta},
                        {"gamma", gamma},
                        {"mu", scenario.eq.mu},
                        {"strategy", scenario.eq.strategy == Strategy::common ? "common" : "multiple"}};

    json primary = json::array();
    for (const auto& p : scenario.primary) primary.push_back(path_to_json(p));
    doc["primary_paths"] = primary;

    return doc.dump(2) + "\n";
}

void write_sweep_csv(const std::filesystem::path& path, const SweepTable& table) {
    auto out = open_out(path);
    out << "f,re,im,mag,phase,flag\n";
    for (std::size_t i = 0; i < table.freq.size(); ++i)
        out << table.freq[i] << ',' << table.value[i].real() << ',' << table.value[i].imag() << ','
            << table.magnitude[i] << ',' << table.phase[i] << ',' << flag_name(table.flag[i])
            << '\n';
    finish_out(out, path);
}

void write_trace_csv(const std::filesystem::path& path, const SimulationTrace& trace,
                     std::size_t decimation) {
    if (decimation == 0) throw Error("trace decimation must be at least 1");
    auto out = open_out(path);
    out << "n";
    for (std::size_t k = 0; k < trace.sensors; ++k) out << ",d_" << (k + 1);
    for (std::size_t k = 0; k < trace.sensors; ++k) out << ",e_" << (k + 1);
    out << '\n';
    for (std::uint64_t n = 0; n < trace.steps; n += decimation) {
        out << n;
        for (std::size_t k = 0; k < trace.sensors; ++k) out << ',' << trace.noise[k][n];
        for (std::size_t k = 0; k < trace.sensors; ++k) out << ',' << trace.error[k][n];
        out << '\n';
    }
    finish_out(out, path);
}

void write_pole_csv(const std::filesystem::path& path, std::span<const PoleEstimate> poles) {
    auto out = open_out(path);
    out << "sensor,tone_f,radius,angle,peak,flag\n";
    for (const auto& p : poles)
        out << (p.sensor + 1) << ',' << (p.angle / (2.0 * std::numbers::pi)) << ',' << p.radius
            << ',' << p.angle << ',' << p.peak << ','
            << (p.unstable_or_boundary ? "unstable_or_boundary" : "ok") << '\n';
    finish_out(out, path);
}

std::string report_to_text(const ValidationReport& report) {
    std::ostringstream out;
    out << std::setprecision(12);
    std::size_t passed = 0, asserted = 0;
    for (const auto& c : report.checks) {
        if (c.asserted) {
            ++asserted;
            if (c.passed) ++passed;
        }
        out << (c.asserted ? (c.passed ? "[PASS] " : "[FAIL] ") : "[INFO] ") << c.check_id
            << " scenario=" << c.scenario_id << " measured=" << c.measured
            << " expected=" << c.expected << " tol=" << c.tolerance;
        if (!c.note.empty()) out << " (" << c.note << ")";
        out << '\n';
    }
    out << "summary: " << passed << "/" << asserted << " asserted checks passed";
    const std::size_t info = report.checks.size() - asserted;
    if (info > 0) out << " (" << info << " informational)";
    out << '\n';
    return out.str();
}

void write_report_text(const std::filesystem::path& path, const ValidationReport& report) {
    auto out = open_out(path);
    out << report_to_text(report);
    finish_out(out, path);
}

void write_report_csv(const std::filesystem::path& path, const ValidationReport& report) {
    auto out = open_out(path);
    out << "check_id,scenario,measured,expected,tolerance,passed,asserted,note\n";
    for (const auto& c : report.checks) {
        std::string note = c.note;
        for (auto& ch : note)
            if (ch == ',') ch = ';';
        out << '"' << c.check_id << "\"," << c.scenario_id << ',' << c.measured << ','
            << c.expected << ',' << c.tolerance << ',' << (c.passed ? 1 : 0) << ','
            << (c.asserted ? 1 : 0) << ',' << '"' << note << '"' << '\n';
    }
    finish_out(out, path);
}

} // namespace ane
