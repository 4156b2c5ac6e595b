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

#include "anelab/validation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "anelab/pole_search.hpp"
#include "anelab/tf_analysis.hpp"

namespace ane {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string one_based(std::size_t i) { return std::to_string(i + 1); }

} // namespace

ValidationReport verify_control_gains(const Scenario& scenario, Strategy strategy) {
    ValidationReport rep;
    const bool asserted = scenario.paths.perfect_estimates;
    for (std::size_t k = 0; k < scenario.sensors; ++k)
        for (std::size_t l = 0; l < scenario.tone_count(); ++l) {
            CheckResult r;
            r.check_id = "control_gain k=" + one_based(k) + " l=" + one_based(l);
            r.scenario_id = scenario.name;
            r.expected = std::abs(scenario.eq.beta_at(l, k));
            r.tolerance = 1e-3;
            r.asserted = asserted;
            try {
                const ControlGain g = control_frequency_gain(scenario, strategy, k, l);
                r.measured = std::abs(g.value);
                r.passed = std::abs(r.measured - r.expected) <= r.tolerance;
                if (g.flagged) r.note = "two-sided disagreement flagged";
            } catch (const Error& err) {
                r.passed = false;
                r.note = err.what();
            }
            if (!asserted) {
                if (!r.note.empty()) r.note += "; ";
                r.note += "informational (imperfect estimates)";
                r.passed = true;
            }
            rep.add(r);
        }
    return rep;
}

ValidationReport verify_simulation_matches_targets(const Scenario& scenario, Strategy strategy,
                                                   std::uint64_t steps) {
    ValidationReport rep;
    Scenario s = scenario;
    s.eq.strategy = strategy;

    const SimulationTrace trace = run_simulation(s, steps);
    if (trace.diverged) {
        CheckResult r;
        r.check_id = "simulation";
        r.scenario_id = s.name;
        r.passed = false;
        r.note = "diverged: " + trace.divergence_message;
        rep.add(r);
        return rep;
    }

    const std::size_t window =
        std::min<std::size_t>(kSteadyStateWindow, static_cast<std::size_t>(trace.steps));
    double table_max = 0.0;
    for (double a : s.noise.amplitude) table_max = std::max(table_max, a);

    for (std::size_t k = 0; k < s.sensors; ++k)
        for (std::size_t l = 0; l < s.tone_count(); ++l) {
            CheckResult r;
            r.check_id = "residual_amplitude k=" + one_based(k) + " l=" + one_based(l);
            r.scenario_id = s.name;
            const double a_kl = s.noise.amp(k, l);
            r.expected = std::abs(s.eq.beta_at(l, k)) * a_kl;
            const double base = a_kl > 0.0 ? a_kl : table_max;
            r.tolerance = 0.02 * (r.expected > 0.0 ? r.expected : base);
            r.measured = tone_amplitude(trace.error[k], s.tones[l].freq, window);
            r.passed = std::abs(r.measured - r.expected) <= r.tolerance;
            if (!amplitude_converged(trace.error[k], s.tones[l].freq,
                                     std::min<std::size_t>(window, trace.error[k].size())))
                r.note = "amplitude not settled within the run";
            rep.add(r);
        }
    return rep;
}

ValidationReport verify_probe_response(const Scenario& scenario, Strategy strategy,
                                       double probe_freq, double probe_amplitude) {
    ValidationReport rep;
    if (!(probe_freq > 0.0 && probe_freq < 0.5))
        throw Error("probe frequency must lie in (0, 0.5)");
    if (!(probe_amplitude > 0.0)) throw Error("probe amplitude must be positive");

    Scenario s = scenario;
    s.eq.strategy = strategy;

    // Separation precondition: the probe must sit at least five pole
    // half-widths away from every control frequency (no constraint from
    // boundary-flagged estimates, where the loop shows no pole).
    const double probe_omega = kTwoPi * probe_freq;
    for (std::size_t l = 0; l < s.tone_count(); ++l) {
        if (std::abs(probe_freq - s.tones[l].freq) < 1e-9)
            throw Error("probe frequency coincides with control tone " + one_based(l));
        for (std::size_t k = 0; k < s.sensors; ++k) {
            const PoleEstimate est = estimate_pole(s, strategy, k, l);
            if (est.unstable_or_boundary) continue;
            const double half_width = 1.0 - est.radius;
            if (std::abs(probe_omega - s.omega(l)) < 5.0 * half_width)
                throw Error("probe too close to control tone " + one_based(l) +
                            " (needs >= 5 pole half-widths)");
        }
    }

    const ProbeTone probe{probe_freq, probe_amplitude, 0.0};
    SimulationTrace trace;
    bool converged = false;
    for (std::uint64_t steps : {std::uint64_t{32768}, std::uint64_t{131072}, std::uint64_t{262144}}) {
        trace = run_simulation(s, steps, {}, probe);
        if (trace.diverged) break;
        converged = true;
        for (std::size_t k = 0; k < s.sensors; ++k)
            converged = converged && amplitude_converged(trace.error[k], probe_freq);
        if (converged) break;
    }

    if (trace.diverged) {
        CheckResult r;
        r.check_id = "probe_response";
        r.scenario_id = s.name;
        r.passed = false;
        r.note = "diverged: " + trace.divergence_message;
        rep.add(r);
        return rep;
    }

    const Complex z_probe = std::polar(1.0, probe_omega);
    for (std::size_t k = 0; k < s.sensors; ++k) {
        CheckResult r;
        r.check_id = "probe_response k=" + one_based(k) + " f=" + std::to_string(probe_freq);
        r.scenario_id = s.name;
        r.expected = std::abs(transfer_function(s, s.eq.strategy, z_probe, k).h);
        r.tolerance = 0.05 * r.expected;
        r.measured =
            tone_amplitude(trace.error[k], probe_freq, kSteadyStateWindow) / probe_amplitude;
        r.passed = std::abs(r.measured - r.expected) <= r.tolerance;
        if (!converged) {
            r.note = "not converged within the step budget";
            r.passed = false;
        }
        rep.add(r);
    }
    return rep;
}

ValidationReport verify_strategy_equivalence_l1(const Scenario& scenario) {
    ValidationReport rep;
    if (scenario.tone_count() != 1) {
        CheckResult r;
        r.check_id = "strategy_equivalence";
        r.scenario_id = scenario.name;
        r.passed = true;
        r.asserted = false;
        r.note = "skipped: scenario has L = " + std::to_string(scenario.tone_count()) +
                 " tones, the check applies to L = 1 only";
        rep.add(r);
        return rep;
    }

    Scenario sc = scenario;
    Scenario sm = scenario;
    sc.eq.strategy = Strategy::common;
    sm.eq.strategy = Strategy::multiple;

    constexpr std::uint64_t kSteps = 2000;
    const SimulationTrace tc = run_simulation(sc, kSteps);
    const SimulationTrace tm = run_simulation(sm, kSteps);

    std::size_t trace_mismatches = 0;
    if (tc.steps != tm.steps || tc.diverged != tm.diverged) ++trace_mismatches;
    for (std::size_t k = 0; k < scenario.sensors && trace_mismatches == 0; ++k)
        for (std::size_t n = 0; n < tc.error[k].size(); ++n)
            if (tc.error[k][n] != tm.error[k][n] || tc.noise[k][n] != tm.noise[k][n]) {
                ++trace_mismatches;
                break;
            }

    CheckResult rt;
    rt.check_id = "strategy_equivalence traces";
    rt.scenario_id = scenario.name;
    rt.measured = static_cast<double>(trace_mismatches);
    rt.expected = 0.0;
    rt.tolerance = 0.0;
    rt.passed = trace_mismatches == 0;
    rep.add(rt);

    // Entry-wise identical systems at a handful of on- and off-circle points.
    std::size_t entry_mismatches = 0;
    if (scenario.paths.true_path(0, 0).is_fir()) {
        const double test_angles[] = {0.7, 1.9, 2.6};
        const double test_radii[] = {0.9, 1.0};
        for (double r : test_radii)
            for (double a : test_angles) {
                const Complex z = std::polar(r, a);
                for (std::size_t k = 0; k < scenario.sensors; ++k) {
                    const TfSystem c = assemble_common(sc, z, k);
                    const TfSystem m = assemble_multiple(sm, z, k);
                    for (std::size_t i = 0; i < c.matrix.data().size(); ++i)
                        if (c.matrix.data()[i] != m.matrix.data()[i]) ++entry_mismatches;
                    for (std::size_t i = 0; i < c.rhs.size(); ++i)
                        if (c.rhs[i] != m.rhs[i]) ++entry_mismatches;
                }
            }
    }

    CheckResult rs;
    rs.check_id = "strategy_equivalence systems";
    rs.scenario_id = scenario.name;
    rs.measured = static_cast<double>(entry_mismatches);
    rs.expected = 0.0;
    rs.tolerance = 0.0;
    rs.passed = entry_mismatches == 0;
    if (!scenario.paths.true_path(0, 0).is_fir())
        rs.note = "system comparison limited to FIR-path scenarios";
    rep.add(rs);

    return rep;
}

double default_probe_frequency(const Scenario& scenario) {
    std::vector<double> f;
    for (const auto& t : scenario.tones) f.push_back(t.freq);
    std::sort(f.begin(), f.end());
    if (f.size() == 1) {
        const double up = f[0] + 0.1;
        return up < 0.5 ? up : f[0] - 0.1;
    }
    // First-of-the-widest wins; the tolerance absorbs last-ulp differences
    // between nominally equal gaps.
    double best_gap = 0.0;
    double best_mid = 0.25;
    for (std::size_t i = 1; i < f.size(); ++i) {
        const double gap = f[i] - f[i - 1];
        if (gap > best_gap + 1e-12) {
            best_gap = gap;
            best_mid = 0.5 * (f[i] + f[i - 1]);
        }
    }
    return best_mid;
}

} // namespace ane
