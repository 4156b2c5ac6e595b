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

#ifndef ANELAB_SIGNAL_MODEL_HPP
#define ANELAB_SIGNAL_MODEL_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "anelab/errors.hpp"

namespace ane {

using Complex = std::complex<double>;

/// Path responses are rejected for |z| below this radius to bound z^-t growth.
inline constexpr double kMinPathEvalRadius = 0.05;

/// Reduces an angle in radians to (-pi, pi].  Values already in range pass
/// through unchanged bit-for-bit.
double reduce_phase(double radians);

/// One tone of the reference set; frequency normalised to cycles/sample.
struct ToneSpec {
    double freq = 0.0; ///< in (0, 0.5), strictly interior

    double omega() const { return 2.0 * std::numbers::pi * freq; }
};

/// Per-tone amplitude and initial phase of the reference signals.
struct ReferenceSpec {
    std::vector<double> amplitude; ///< per tone, > 0
    std::vector<double> phase;     ///< radians, reduced to (-pi, pi] on ingestion

    static ReferenceSpec unit(std::size_t tones) {
        return ReferenceSpec{std::vector<double>(tones, 1.0), std::vector<double>(tones, 0.0)};
    }
};

/// Per-sensor, per-tone amplitude/phase of the primary noise, a K x L table.
struct NoiseField {
    std::size_t sensors = 0; ///< K
    std::size_t tones = 0;   ///< L
    std::vector<double> amplitude; ///< row-major K x L, >= 0
    std::vector<double> phase;     ///< radians

    double amp(std::size_t k, std::size_t l) const { return amplitude[k * tones + l]; }
    double phi(std::size_t k, std::size_t l) const { return phase[k * tones + l]; }

    static NoiseField uniform(std::size_t sensors, std::size_t tones, double amp = 1.0) {
        NoiseField n;
        n.sensors = sensors;
        n.tones = tones;
        n.amplitude.assign(sensors * tones, amp);
        n.phase.assign(sensors * tones, 0.0);
        return n;
    }
};

/// Complex gain of a path at a single frequency.
struct ToneGain {
    double freq = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
};

/// An acoustic path, evaluable as a complex gain on the z-plane.
///
/// Two representations: a real FIR coefficient list (evaluable anywhere with
/// |z| >= kMinPathEvalRadius), or a gain table valid only at the listed
/// control frequencies.
class PathResponse {
public:
    PathResponse() = default;

    static PathResponse fir(std::vector<double> coefficients);
    static PathResponse gain_table(std::vector<ToneGain> entries);

    /// Identity path, FIR [1].
    static PathResponse unity() { return fir({1.0}); }

    bool is_fir() const { return is_fir_; }
    const std::vector<double>& coefficients() const { return fir_; }
    const std::vector<ToneGain>& table() const { return table_; }

    /// Gain at an arbitrary z-plane point.  FIR form: sum_t c_t z^-t.  Gain
    /// table form: only z = e^{+-i 2 pi f} for a listed f is admissible (the
    /// conjugate point returns the conjugate gain).
    Complex gain(Complex z) const;

    /// Gain at z = e^{i 2 pi f}; table entries are matched on f exactly
    /// (within 1e-12) so table-form scenarios evaluate without round-tripping
    /// through the angle of z.
    Complex gain_at_frequency(double f) const;

    bool operator==(const PathResponse& other) const;

private:
    bool is_fir_ = true;
    std::vector<double> fir_{1.0};
    std::vector<ToneGain> table_;
};

/// True paths C_jk and estimated paths C~_jk, each a J x K grid.
struct PathMatrix {
    std::size_t actuators = 0; ///< J
    std::size_t sensors = 0;   ///< K
    std::vector<PathResponse> true_paths;      ///< row-major J x K
    std::vector<PathResponse> estimated_paths; ///< row-major J x K
    bool perfect_estimates = true;             ///< estimated grid is identically the true grid

    const PathResponse& true_path(std::size_t j, std::size_t k) const {
        return true_paths[j * sensors + k];
    }
    const PathResponse& estimated_path(std::size_t j, std::size_t k) const {
        return estimated_paths[j * sensors + k];
    }

    /// J x K grid of identity paths with perfect estimates.
    static PathMatrix identity(std::size_t actuators, std::size_t sensors);
};

/// In-phase/quadrature sample pair.
struct SamplePair {
    double in_phase = 0.0;
    double quadrature = 0.0;
};

/// x_l(n) and its quadrature companion for tone l at sample n.
SamplePair tone_pair(const std::vector<ToneSpec>& tones, const ReferenceSpec& ref,
                     std::size_t l, std::uint64_t n);

/// Primary noise sample d_k(n) at sensor k.
double primary_noise(const std::vector<ToneSpec>& tones, const NoiseField& noise,
                     std::size_t k, std::uint64_t n);

/// Complex gain of a path at z; see PathResponse::gain for the rules.
Complex path_gain(const PathResponse& path, Complex z);

/// Reference pair for tone l filtered by the estimated path j->k: the tone
/// pair scaled by the estimated gain magnitude and shifted by its phase.
SamplePair filtered_reference(const std::vector<ToneSpec>& tones, const ReferenceSpec& ref,
                              const PathMatrix& paths, std::size_t l, std::size_t j,
                              std::size_t k, std::uint64_t n);

} // namespace ane

#endif // ANELAB_SIGNAL_MODEL_HPP
