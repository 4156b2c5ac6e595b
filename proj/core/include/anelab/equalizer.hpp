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

#ifndef ANELAB_EQUALIZER_HPP
#define ANELAB_EQUALIZER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anelab/errors.hpp"

namespace ane {

struct Scenario;

/// Coefficient magnitudes beyond this limit count as divergence.
inline constexpr double kCoefficientLimit = 1e12;

/// Default trailing window for steady-state amplitude measurements.
inline constexpr std::size_t kSteadyStateWindow = 8192;

/// Pseudo-error strategy: one pseudo-error per sensor, or one per
/// (tone, sensor) pair.
enum class Strategy { common, multiple };

/// Equalization targets and adaptation parameters.
struct EqualizerConfig {
    std::size_t tones = 0;     ///< L
    std::size_t sensors = 0;   ///< K
    std::size_t actuators = 0; ///< J
    std::vector<double> beta;  ///< L x K targets, beta != 1
    std::vector<double> gamma; ///< L x J output weights in [0, 1]
    std::vector<double> mu;    ///< L step sizes, >= 0
    Strategy strategy = Strategy::common;

    double beta_at(std::size_t l, std::size_t k) const { return beta[l * sensors + k]; }
    double gamma_at(std::size_t l, std::size_t j) const { return gamma[l * actuators + j]; }
    double mu_at(std::size_t l) const { return mu[l]; }
};

/// In-phase/quadrature pair of one adaptive filter coefficient.
struct Coefficient {
    double in_phase = 0.0;
    double quadrature = 0.0;
};

/// The 2JL adaptive coefficients plus the current sample index.
struct AdaptiveState {
    std::size_t tones = 0;     ///< L
    std::size_t actuators = 0; ///< J
    std::vector<Coefficient> w; ///< row-major L x J
    std::uint64_t sample = 0;   ///< n

    Coefficient& at(std::size_t l, std::size_t j) { return w[l * actuators + j]; }
    const Coefficient& at(std::size_t l, std::size_t j) const { return w[l * actuators + j]; }

    static AdaptiveState zeros(std::size_t tones, std::size_t actuators) {
        AdaptiveState s;
        s.tones = tones;
        s.actuators = actuators;
        s.w.assign(tones * actuators, Coefficient{});
        return s;
    }
};

struct CoefficientSnapshot {
    std::uint64_t sample = 0;
    std::vector<Coefficient> w;
};

struct TraceOptions {
    bool record_pseudo_errors = false;
    std::size_t snapshot_decimation = 0; ///< 0 disables coefficient snapshots
};

/// Extra tone injected into every sensor's noise, untouched by the filter
/// outputs; used for empirical off-frequency response measurements.
struct ProbeTone {
    double freq = 0.0;
    double amplitude = 1.0;
    double phase = 0.0;
};

/// Per-sample record of a simulation run.
struct SimulationTrace {
    std::size_t sensors = 0;
    std::uint64_t steps = 0; ///< recorded samples
    std::vector<std::vector<double>> noise; ///< [k][n]
    std::vector<std::vector<double>> error; ///< [k][n]
    /// Pseudo-error series when requested: [k][n] for the common strategy,
    /// [l * K + k][n] for the multiple strategy.
    std::vector<std::vector<double>> pseudo;
    std::vector<CoefficientSnapshot> snapshots;
    AdaptiveState final_state;

    bool diverged = false;
    std::string divergence_message;
    std::size_t diverged_tone = 0;
    std::size_t diverged_actuator = 0;
    std::uint64_t diverged_sample = 0;
};

/// Unweighted filter output y_lj(n) at the state's sample index.
double filter_output(const Scenario& scenario, const AdaptiveState& state,
                     std::size_t l, std::size_t j);

/// Sensor error e_k(n): primary noise plus the weighted filter outputs
/// propagated through the true paths.
double sensor_error(const Scenario& scenario, const AdaptiveState& state, std::size_t k);

/// Common pseudo-error e'_k(n): e_k plus the beta-scaled corrections of all
/// tones and actuators, built on the estimated paths.
double pseudo_error_common(const Scenario& scenario, const AdaptiveState& state, std::size_t k);

/// Multiple pseudo-error e'_lk(n): like the common one but keeping only the
/// l-th tone's correction.
double pseudo_error_multiple(const Scenario& scenario, const AdaptiveState& state,
                             std::size_t l, std::size_t k);

/// One gradient update of every coefficient pair; the sample index advances
/// by one.  Throws DivergenceError naming (l, j, n) when a coefficient
/// leaves the finite range.
AdaptiveState lms_step(const Scenario& scenario, const AdaptiveState& state);

/// Runs the adaptive loop for `steps` samples from zero coefficients.
/// Divergence is reported in the returned (partial) trace, not thrown.
SimulationTrace run_simulation(const Scenario& scenario, std::uint64_t steps,
                               const TraceOptions& options = {},
                               const std::optional<ProbeTone>& probe = std::nullopt);

/// Amplitude of the f component over the trailing `window` samples by direct
/// correlation with e^{-i 2 pi f n} at the exact frequency.  The window must
/// cover at least two periods of f.
double tone_amplitude(std::span<const double> signal, double freq, std::size_t window);

/// True when the amplitudes over the two halves of the trailing window agree
/// within 0.5%.
bool amplitude_converged(std::span<const double> signal, double freq,
                         std::size_t window = kSteadyStateWindow);

} // namespace ane

#endif // ANELAB_EQUALIZER_HPP
