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

#include "anelab/scenario.hpp"

#include <cmath>
#include <sstream>

namespace ane {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

} // namespace

std::vector<std::string> Scenario::violations() const {
    std::vector<std::string> out;
    const std::size_t J = actuators;
    const std::size_t K = sensors;
    const std::size_t L = tones.size();

    if (J == 0) out.push_back("dimensions.actuators must be at least 1");
    if (K == 0) out.push_back("dimensions.sensors must be at least 1");
    if (L == 0) out.push_back("tones must list at least one frequency");

    for (std::size_t l = 0; l < L; ++l) {
        const double f = tones[l].freq;
        if (!(f > 0.0 && f < 0.5))
            out.push_back("tones[" + std::to_string(l) + "] = " + fmt(f) +
                          " violates 0 < f < 0.5");
        for (std::size_t m = l + 1; m < L; ++m)
            if (tones[l].freq == tones[m].freq)
                out.push_back("tones[" + std::to_string(l) + "] and tones[" + std::to_string(m) +
                              "] are identical; frequencies must be pairwise distinct");
    }

    if (reference.amplitude.size() != L || reference.phase.size() != L) {
        out.push_back("reference tables must have exactly L = " + std::to_string(L) + " entries");
    } else {
        for (std::size_t l = 0; l < L; ++l)
            if (!(reference.amplitude[l] > 0.0))
                out.push_back("reference.amplitude[" + std::to_string(l) + "] = " +
                              fmt(reference.amplitude[l]) + " violates A > 0");
    }

    if (noise.sensors != K || noise.tones != L ||
        noise.amplitude.size() != K * L || noise.phase.size() != K * L) {
        out.push_back("noise table must be exactly K x L = " + std::to_string(K) + " x " +
                      std::to_string(L));
    } else {
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t l = 0; l < L; ++l)
                if (!(noise.amp(k, l) >= 0.0))
                    out.push_back("noise.amplitude[" + std::to_string(k) + "][" + std::to_string(l) +
                                  "] = " + fmt(noise.amp(k, l)) + " violates A >= 0");
    }

    if (paths.actuators != J || paths.sensors != K || paths.true_paths.size() != J * K)
        out.push_back("paths.true grid must be exactly J x K = " + std::to_string(J) + " x " +
                      std::to_string(K));
    if (paths.estimated_paths.size() != paths.true_paths.size())
        out.push_back("paths.estimated grid must match the true grid's shape");
    if (paths.perfect_estimates && paths.estimated_paths.size() == paths.true_paths.size()) {
        for (std::size_t i = 0; i < paths.true_paths.size(); ++i)
            if (!(paths.estimated_paths[i] == paths.true_paths[i])) {
                out.push_back("paths.perfect_estimates is set but the estimated grid differs "
                              "from the true grid");
                break;
            }
    }

    if (eq.tones != L || eq.sensors != K || eq.actuators != J ||
        eq.beta.size() != L * K || eq.gamma.size() != L * J || eq.mu.size() != L) {
        out.push_back("equalizer tables must be beta: L x K, gamma: L x J, mu: L");
    } else {
        for (std::size_t l = 0; l < L; ++l) {
            for (std::size_t k = 0; k < K; ++k) {
                const double b = eq.beta_at(l, k);
                if (!std::isfinite(b) || std::abs(b - 1.0) <= 1e-9)
                    out.push_back("equalizer.beta[" + std::to_string(l) + "][" + std::to_string(k) +
                                  "] = " + fmt(b) + " violates beta != 1");
            }
            for (std::size_t j = 0; j < J; ++j) {
                const double g = eq.gamma_at(l, j);
                if (!(g >= 0.0 && g <= 1.0))
                    out.push_back("equalizer.gamma[" + std::to_string(l) + "][" + std::to_string(j) +
                                  "] = " + fmt(g) + " violates 0 <= gamma <= 1");
            }
            if (!(eq.mu[l] >= 0.0))
                out.push_back("equalizer.mu[" + std::to_string(l) + "] = " + fmt(eq.mu[l]) +
                              " violates mu >= 0");
        }
    }

    if (primary.size() != K)
        out.push_back("primary_paths must list exactly K = " + std::to_string(K) + " entries");

    return out;
}

void Scenario::validate() const {
    auto items = violations();
    if (!items.empty()) throw ValidationError(items);
}

void Scenario::normalize() {
    const std::size_t L = tones.size();
    if (reference.amplitude.empty() && reference.phase.empty())
        reference = ReferenceSpec::unit(L);
    for (auto& p : reference.phase) p = reduce_phase(p);
    for (auto& p : noise.phase) p = reduce_phase(p);

    if (eq.gamma.empty()) eq.gamma.assign(L * actuators, 0.0);
    eq.tones = L;
    eq.sensors = sensors;
    eq.actuators = actuators;

    if (primary.empty()) primary.assign(sensors, PathResponse::unity());

    if (paths.perfect_estimates && paths.estimated_paths.empty())
        paths.estimated_paths = paths.true_paths;
}

Scenario single_channel_scenario(double freq, double beta, double gamma, double mu,
                                 PathResponse true_path, PathResponse estimated_path,
                                 bool perfect_estimates, double noise_amplitude,
                                 double noise_phase) {
    Scenario s;
    s.name = "single_channel";
    s.actuators = 1;
    s.sensors = 1;
    s.tones = {ToneSpec{freq}};
    s.reference = ReferenceSpec::unit(1);
    s.noise.sensors = 1;
    s.noise.tones = 1;
    s.noise.amplitude = {noise_amplitude};
    s.noise.phase = {reduce_phase(noise_phase)};
    s.paths.actuators = 1;
    s.paths.sensors = 1;
    s.paths.true_paths = {true_path};
    s.paths.estimated_paths = {perfect_estimates ? true_path : estimated_path};
    s.paths.perfect_estimates = perfect_estimates;
    s.eq.tones = 1;
    s.eq.sensors = 1;
    s.eq.actuators = 1;
    s.eq.beta = {beta};
    s.eq.gamma = {gamma};
    s.eq.mu = {mu};
    s.eq.strategy = Strategy::common;
    s.primary = {PathResponse::unity()};
    s.validate();
    return s;
}

} // namespace ane
