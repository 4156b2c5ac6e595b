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

#ifndef ANELAB_SCENARIO_HPP
#define ANELAB_SCENARIO_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "anelab/equalizer.hpp"
#include "anelab/signal_model.hpp"

namespace ane {

/// Full problem description: dimensions, tones, noise field, acoustic paths
/// and equalizer settings.  Immutable once validated; every operation in the
/// library takes it by const reference.
struct Scenario {
    std::string name;        ///< identifier used in reports (file stem)
    std::string description; ///< free text carried through serialisation

    std::size_t actuators = 0; ///< J
    std::size_t sensors = 0;   ///< K

    std::vector<ToneSpec> tones; ///< L control frequencies
    ReferenceSpec reference;     ///< per-tone reference amplitude/phase
    NoiseField noise;            ///< K x L primary noise table
    PathMatrix paths;            ///< true and estimated secondary paths, J x K
    EqualizerConfig eq;          ///< beta/gamma/mu/strategy
    std::vector<PathResponse> primary; ///< per-sensor primary paths, default identity

    std::size_t tone_count() const { return tones.size(); }
    double omega(std::size_t l) const { return tones[l].omega(); }

    /// Collects every invariant violation (empty means valid).  Messages name
    /// the offending section and 0-based indices.
    std::vector<std::string> violations() const;

    /// Throws ValidationError with the full itemised list when invalid.
    void validate() const;

    /// Normalises phases to (-pi, pi] and materialises defaults (unit
    /// reference, zero gamma, identity primary paths, estimated paths copied
    /// from the true grid under perfect estimation).
    void normalize();
};

/// Convenience builder for single-channel (J = K = L = 1) scenarios.
Scenario single_channel_scenario(double freq, double beta, double gamma, double mu,
                                 PathResponse true_path = PathResponse::unity(),
                                 PathResponse estimated_path = PathResponse::unity(),
                                 bool perfect_estimates = true,
                                 double noise_amplitude = 1.0, double noise_phase = 0.0);

} // namespace ane

#endif // ANELAB_SCENARIO_HPP
