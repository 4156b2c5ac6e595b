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

#include "anelab/equalizer.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "anelab/scenario.hpp"

namespace ane {

namespace {

// Per-scenario constants of the adaptive loop: polar gains of the true and
// estimated paths at every control frequency, plus the equalizer factors in
// the shapes the per-sample kernels consume.  Both the one-shot operations
// and the simulation engine run through these tables so that their samples
// agree bit for bit.
struct Tables {
    std::size_t J = 0, K = 0, L = 0;
    std::vector<double> omega;           // L
    std::vector<double> ref_amp;         // L
    std::vector<double> ref_phase;       // L
    std::vector<double> mu;              // L
    std::vector<double> one_minus_gamma; // L x J
    std::vector<double> q;               // L x J x K: (1 - gamma_lj) / (1 - beta_lk)
    std::vector<double> q_beta;          // L x J x K: q * beta_lk
    std::vector<double> true_amp, true_phase; // L x J x K
    std::vector<double> est_amp, est_phase;   // L x J x K

    std::size_t idx(std::size_t l, std::size_t j, std::size_t k) const {
        return (l * J + j) * K + k;
    }
};

Tables build_tables(const Scenario& s) {
    Tables t;
    t.J = s.actuators;
    t.K = s.sensors;
    t.L = s.tone_count();
    t.omega.resize(t.L);
    t.ref_amp = s.reference.amplitude;
    t.ref_phase = s.reference.phase;
    t.mu = s.eq.mu;
    t.one_minus_gamma.resize(t.L * t.J);
    t.q.resize(t.L * t.J * t.K);
    t.q_beta.resize(t.L * t.J * t.K);
    t.true_amp.resize(t.L * t.J * t.K);
    t.true_phase.resize(t.L * t.J * t.K);
    t.est_amp.resize(t.L * t.J * t.K);
    t.est_phase.resize(t.L * t.J * t.K);

    for (std::size_t l = 0; l < t.L; ++l) {
        t.omega[l] = s.tones[l].omega();
        for (std::size_t j = 0; j < t.J; ++j) {
            const double omg = 1.0 - s.eq.gamma_at(l, j);
            t.one_minus_gamma[l * t.J + j] = omg;
            for (std::size_t k = 0; k < t.K; ++k) {
                const std::size_t i = t.idx(l, j, k);
                t.q[i] = omg / (1.0 - s.eq.beta_at(l, k));
                t.q_beta[i] = t.q[i] * s.eq.beta_at(l, k);
                const Complex g = s.paths.true_path(j, k).gain_at_frequency(s.tones[l].freq);
                t.true_amp[i] = std::abs(g);
                t.true_phase[i] = std::arg(g);
                const Complex ge = s.paths.estimated_path(j, k).gain_at_frequency(s.tones[l].freq);
                t.est_amp[i] = std::abs(ge);
                t.est_phase[i] = std::arg(ge);
            }
        }
    }
    return t;
}

// Reference pair for tone l filtered through the tabulated gains.
inline SamplePair pair_at(const Tables& t, const std::vector<double>& amp,
                          const std::vector<double>& phase, std::size_t l, std::size_t j,
                          std::size_t k, std::uint64_t n) {
    const std::size_t i = t.idx(l, j, k);
    const double a = amp[i] * t.ref_amp[l];
    const double arg = t.omega[l] * static_cast<double>(n) + t.ref_phase[l] + phase[i];
    return {a * std::cos(arg), a * std::sin(arg)};
}

inline double dot(const SamplePair& x, const Coefficient& w) {
    return x.in_phase * w.in_phase + x.quadrature * w.quadrature;
}

// e_k(n) given the noise sample, true paths.
double error_sample(const Tables& t, const AdaptiveState& state, std::size_t k, std::uint64_t n,
                    double d_k) {
    double acc = d_k;
    for (std::size_t l = 0; l < t.L; ++l)
        for (std::size_t j = 0; j < t.J; ++j)
            acc += t.one_minus_gamma[l * t.J + j] *
                   dot(pair_at(t, t.true_amp, t.true_phase, l, j, k, n), state.at(l, j));
    return acc;
}

// Correction term of tone l, actuator j in the pseudo-error of sensor k,
// estimated paths.
inline double pseudo_correction(const Tables& t, const AdaptiveState& state, std::size_t l,
                                std::size_t j, std::size_t k, std::uint64_t n) {
    return t.q_beta[t.idx(l, j, k)] *
           dot(pair_at(t, t.est_amp, t.est_phase, l, j, k, n), state.at(l, j));
}

double pseudo_common_sample(const Tables& t, const AdaptiveState& state, std::size_t k,
                            std::uint64_t n, double e_k) {
    double acc = e_k;
    for (std::size_t l = 0; l < t.L; ++l)
        for (std::size_t j = 0; j < t.J; ++j) acc += pseudo_correction(t, state, l, j, k, n);
    return acc;
}

double pseudo_multiple_sample(const Tables& t, const AdaptiveState& state, std::size_t l,
                              std::size_t k, std::uint64_t n, double e_k) {
    double acc = e_k;
    for (std::size_t j = 0; j < t.J; ++j) acc += pseudo_correction(t, state, l, j, k, n);
    return acc;
}

// One gradient update from sample n.  `pe` holds K pseudo-errors for the
// common strategy or L x K (l-major) for the multiple one.
void update_state(const Tables& t, AdaptiveState& state, const std::vector<double>& pe,
                  bool per_tone, std::uint64_t n) {
    for (std::size_t l = 0; l < t.L; ++l) {
        const double two_mu = 2.0 * t.mu[l];
        for (std::size_t j = 0; j < t.J; ++j) {
            double acc_in = 0.0;
            double acc_quad = 0.0;
            for (std::size_t k = 0; k < t.K; ++k) {
                const SamplePair x = pair_at(t, t.est_amp, t.est_phase, l, j, k, n);
                const double factor = t.q[t.idx(l, j, k)] * (per_tone ? pe[l * t.K + k] : pe[k]);
                acc_in += factor * x.in_phase;
                acc_quad += factor * x.quadrature;
            }
            Coefficient& w = state.at(l, j);
            w.in_phase -= two_mu * acc_in;
            w.quadrature -= two_mu * acc_quad;
            if (!std::isfinite(w.in_phase) || !std::isfinite(w.quadrature) ||
                std::abs(w.in_phase) > kCoefficientLimit ||
                std::abs(w.quadrature) > kCoefficientLimit)
                throw DivergenceError("coefficient diverged at tone l=" + std::to_string(l) +
                                          ", actuator j=" + std::to_string(j) + ", sample n=" +
                                          std::to_string(n),
                                      l, j, n);
        }
    }
    state.sample = n + 1;
}

double probe_sample(const ProbeTone& probe, std::uint64_t n) {
    return probe.amplitude *
           std::cos(2.0 * std::numbers::pi * probe.freq * static_cast<double>(n) + probe.phase);
}

void check_state_shape(const Scenario& s, const AdaptiveState& state) {
    if (state.tones != s.tone_count() || state.actuators != s.actuators ||
        state.w.size() != s.tone_count() * s.actuators)
        throw Error("adaptive state shape does not match the scenario");
}

} // namespace

double filter_output(const Scenario& scenario, const AdaptiveState& state, std::size_t l,
                     std::size_t j) {
    check_state_shape(scenario, state);
    if (l >= state.tones || j >= state.actuators) throw Error("coefficient index out of range");
    const SamplePair x = tone_pair(scenario.tones, scenario.reference, l, state.sample);
    return dot(x, state.at(l, j));
}

double sensor_error(const Scenario& scenario, const AdaptiveState& state, std::size_t k) {
    check_state_shape(scenario, state);
    if (k >= scenario.sensors) throw Error("sensor index out of range");
    const Tables t = build_tables(scenario);
    const double d = primary_noise(scenario.tones, scenario.noise, k, state.sample);
    return error_sample(t, state, k, state.sample, d);
}

double pseudo_error_common(const Scenario& scenario, const AdaptiveState& state, std::size_t k) {
    check_state_shape(scenario, state);
    if (k >= scenario.sensors) throw Error("sensor index out of range");
    const Tables t = build_tables(scenario);
    const double d = primary_noise(scenario.tones, scenario.noise, k, state.sample);
    const double e = error_sample(t, state, k, state.sample, d);
    return pseudo_common_sample(t, state, k, state.sample, e);
}

double pseudo_error_multiple(const Scenario& scenario, const AdaptiveState& state, std::size_t l,
                             std::size_t k) {
    check_state_shape(scenario, state);
    if (l >= state.tones || k >= scenario.sensors) throw Error("index out of range");
    const Tables t = build_tables(scenario);
    const double d = primary_noise(scenario.tones, scenario.noise, k, state.sample);
    const double e = error_sample(t, state, k, state.sample, d);
    return pseudo_multiple_sample(t, state, l, k, state.sample, e);
}

AdaptiveState lms_step(const Scenario& scenario, const AdaptiveState& state) {
    check_state_shape(scenario, state);
    const Tables t = build_tables(scenario);
    const std::uint64_t n = state.sample;
    const std::size_t K = t.K;

    std::vector<double> e(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double d = primary_noise(scenario.tones, scenario.noise, k, n);
        e[k] = error_sample(t, state, k, n, d);
    }

    std::vector<double> pe;
    const bool per_tone = scenario.eq.strategy == Strategy::multiple;
    if (per_tone) {
        pe.resize(t.L * K);
        for (std::size_t l = 0; l < t.L; ++l)
            for (std::size_t k = 0; k < K; ++k)
                pe[l * K + k] = pseudo_multiple_sample(t, state, l, k, n, e[k]);
    } else {
        pe.resize(K);
        for (std::size_t k = 0; k < K; ++k) pe[k] = pseudo_common_sample(t, state, k, n, e[k]);
    }

    AdaptiveState next = state;
    update_state(t, next, pe, per_tone, n);
    return next;
}

SimulationTrace run_simulation(const Scenario& scenario, std::uint64_t steps,
                               const TraceOptions& options, const std::optional<ProbeTone>& probe) {
    if (steps == 0) throw Error("simulation needs at least one step");
    scenario.validate();
    if (probe && !(probe->freq > 0.0 && probe->freq < 0.5))
        throw Error("probe frequency must lie in (0, 0.5)");

    const Tables t = build_tables(scenario);
    const std::size_t K = t.K;
    const bool per_tone = scenario.eq.strategy == Strategy::multiple;

    SimulationTrace trace;
    trace.sensors = K;
    trace.noise.assign(K, {});
    trace.error.assign(K, {});
    for (auto& v : trace.noise) v.reserve(steps);
    for (auto& v : trace.error) v.reserve(steps);
    if (options.record_pseudo_errors) trace.pseudo.assign(per_tone ? t.L * K : K, {});

    AdaptiveState state = AdaptiveState::zeros(t.L, t.J);
    std::vector<double> e(K);
    std::vector<double> pe(per_tone ? t.L * K : K);

    for (std::uint64_t n = 0; n < steps; ++n) {
        for (std::size_t k = 0; k < K; ++k) {
            double d = primary_noise(scenario.tones, scenario.noise, k, n);
            if (probe) d += probe_sample(*probe, n);
            e[k] = error_sample(t, state, k, n, d);
            trace.noise[k].push_back(d);
            trace.error[k].push_back(e[k]);
        }

        if (per_tone) {
            for (std::size_t l = 0; l < t.L; ++l)
                for (std::size_t k = 0; k < K; ++k)
                    pe[l * K + k] = pseudo_multiple_sample(t, state, l, k, n, e[k]);
        } else {
            for (std::size_t k = 0; k < K; ++k) pe[k] = pseudo_common_sample(t, state, k, n, e[k]);
        }
        if (options.record_pseudo_errors)
            for (std::size_t i = 0; i < pe.size(); ++i) trace.pseudo[i].push_back(pe[i]);

        if (options.snapshot_decimation > 0 && n % options.snapshot_decimation == 0)
            trace.snapshots.push_back({n, state.w});

        try {
            update_state(t, state, pe, per_tone, n);
        } catch (const DivergenceError& err) {
            trace.diverged = true;
            trace.divergence_message = err.what();
            trace.diverged_tone = err.tone();
            trace.diverged_actuator = err.actuator();
            trace.diverged_sample = err.sample();
            trace.steps = n + 1;
            trace.final_state = state;
            return trace;
        }
    }

    trace.steps = steps;
    trace.final_state = state;
    return trace;
}

double tone_amplitude(std::span<const double> signal, double freq, std::size_t window) {
    if (!(freq > 0.0 && freq < 0.5)) throw Error("frequency must lie in (0, 0.5)");
    if (window == 0 || window > signal.size()) throw Error("window must fit inside the signal");
    if (static_cast<double>(window) < 2.0 / freq)
        throw Error("window must cover at least two periods of the queried frequency");

    const std::size_t start = signal.size() - window;
    const double omega = 2.0 * std::numbers::pi * freq;
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < window; ++i) {
        const double n = static_cast<double>(start + i);
        acc += signal[start + i] * Complex{std::cos(omega * n), -std::sin(omega * n)};
    }
    return 2.0 * std::abs(acc) / static_cast<double>(window);
}

bool amplitude_converged(std::span<const double> signal, double freq, std::size_t window) {
    const std::size_t half = window / 2;
    if (signal.size() < window || half == 0) return false;
    const double recent = tone_amplitude(signal, freq, half);
    const double earlier = tone_amplitude(signal.first(signal.size() - half), freq, half);
    const double scale = std::max(std::max(recent, earlier), 1e-12);
    return std::abs(recent - earlier) < 0.005 * scale;
}

} // namespace ane
