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

#include "anelab/signal_model.hpp"

#include <cmath>
#include <utility>

namespace ane {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Matching tolerances for gain-table lookups.
constexpr double kFreqMatchTol = 1e-12;
constexpr double kTableRadiusTol = 1e-9;
constexpr double kTableAngleTol = 1e-9;

} // namespace

double reduce_phase(double radians) {
    if (radians > -std::numbers::pi && radians <= std::numbers::pi) return radians;
    double r = std::remainder(radians, kTwoPi); // lands in [-pi, pi]
    if (r <= -std::numbers::pi) r += kTwoPi;
    return r;
}

PathResponse PathResponse::fir(std::vector<double> coefficients) {
    bool any_nonzero = false;
    for (double c : coefficients) {
        if (!std::isfinite(c)) throw Error("FIR path coefficients must be finite");
        if (c != 0.0) any_nonzero = true;
    }
    if (coefficients.empty() || !any_nonzero)
        throw Error("FIR path needs at least one nonzero coefficient");
    PathResponse p;
    p.is_fir_ = true;
    p.fir_ = std::move(coefficients);
    return p;
}

PathResponse PathResponse::gain_table(std::vector<ToneGain> entries) {
    if (entries.empty()) throw Error("gain table needs at least one entry");
    for (auto& e : entries) {
        if (!(e.freq > 0.0 && e.freq < 0.5)) throw Error("gain table frequency must lie in (0, 0.5)");
        if (!std::isfinite(e.amplitude) || e.amplitude < 0.0)
            throw Error("gain table amplitude must be finite and non-negative");
        e.phase = reduce_phase(e.phase);
    }
    PathResponse p;
    p.is_fir_ = false;
    p.fir_.clear();
    p.table_ = std::move(entries);
    return p;
}

Complex PathResponse::gain(Complex z) const {
    if (is_fir_) {
        const double r = std::abs(z);
        // Tiny slack so points constructed at the floor radius survive the
        // polar round trip.
        if (r < kMinPathEvalRadius - 1e-12)
            throw Error("path evaluation rejected for |z| < " + std::to_string(kMinPathEvalRadius));
        // Horner in w = 1/z: c0 + w (c1 + w (c2 + ...)).
        const Complex w = 1.0 / z;
        Complex acc{0.0, 0.0};
        for (std::size_t t = fir_.size(); t-- > 0;) acc = acc * w + fir_[t];
        return acc;
    }

    if (std::abs(std::abs(z) - 1.0) > kTableRadiusTol)
        throw Error("gain-table path is only defined on the unit circle");
    const double angle = std::arg(z);
    for (const auto& e : table_) {
        const double omega = kTwoPi * e.freq;
        if (std::abs(angle - omega) <= kTableAngleTol)
            return std::polar(e.amplitude, e.phase);
        if (std::abs(angle + omega) <= kTableAngleTol)
            return std::polar(e.amplitude, -e.phase);
    }
    throw Error("gain-table path queried off its control frequencies");
}

Complex PathResponse::gain_at_frequency(double f) const {
    if (!is_fir_) {
        for (const auto& e : table_)
            if (std::abs(e.freq - f) <= kFreqMatchTol) return std::polar(e.amplitude, e.phase);
        throw Error("gain-table path queried off its control frequencies (f = " + std::to_string(f) + ")");
    }
    return gain(std::polar(1.0, kTwoPi * f));
}

bool PathResponse::operator==(const PathResponse& other) const {
    if (is_fir_ != other.is_fir_) return false;
    if (is_fir_) return fir_ == other.fir_;
    if (table_.size() != other.table_.size()) return false;
    for (std::size_t i = 0; i < table_.size(); ++i) {
        if (table_[i].freq != other.table_[i].freq) return false;
        if (table_[i].amplitude != other.table_[i].amplitude) return false;
        if (table_[i].phase != other.table_[i].phase) return false;
    }
    return true;
}

PathMatrix PathMatrix::identity(std::size_t actuators, std::size_t sensors) {
    PathMatrix m;
    m.actuators = actuators;
    m.sensors = sensors;
    m.true_paths.assign(actuators * sensors, PathResponse::unity());
    m.estimated_paths = m.true_paths;
    m.perfect_estimates = true;
    return m;
}

SamplePair tone_pair(const std::vector<ToneSpec>& tones, const ReferenceSpec& ref,
                     std::size_t l, std::uint64_t n) {
    if (l >= tones.size()) throw Error("tone index out of range");
    const double arg = tones[l].omega() * static_cast<double>(n) + ref.phase[l];
    const double a = ref.amplitude[l];
    return {a * std::cos(arg), a * std::sin(arg)};
}

double primary_noise(const std::vector<ToneSpec>& tones, const NoiseField& noise,
                     std::size_t k, std::uint64_t n) {
    if (k >= noise.sensors) throw Error("sensor index out of range");
    double d = 0.0;
    for (std::size_t l = 0; l < noise.tones; ++l)
        d += noise.amp(k, l) * std::cos(tones[l].omega() * static_cast<double>(n) + noise.phi(k, l));
    return d;
}

Complex path_gain(const PathResponse& path, Complex z) { return path.gain(z); }

SamplePair filtered_reference(const std::vector<ToneSpec>& tones, const ReferenceSpec& ref,
                              const PathMatrix& paths, std::size_t l, std::size_t j,
                              std::size_t k, std::uint64_t n) {
    if (l >= tones.size()) throw Error("tone index out of range");
    if (j >= paths.actuators || k >= paths.sensors) throw Error("path index out of range");
    const Complex g = paths.estimated_path(j, k).gain_at_frequency(tones[l].freq);
    const double arg = tones[l].omega() * static_cast<double>(n) + ref.phase[l] + std::arg(g);
    const double a = std::abs(g) * ref.amplitude[l];
    return {a * std::cos(arg), a * std::sin(arg)};
}

} // namespace ane
