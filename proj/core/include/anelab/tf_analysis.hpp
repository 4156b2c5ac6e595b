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

#ifndef ANELAB_TF_ANALYSIS_HPP
#define ANELAB_TF_ANALYSIS_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "anelab/linalg.hpp"
#include "anelab/scenario.hpp"

namespace ane {

/// Raw evaluations are rejected within this distance of e^{+-i omega_l}.
inline constexpr double kPoleGuard = 1e-9;

/// Starting angular offset of the two-sided control-frequency limit; the
/// procedure halves it until the extrapolated limit settles.
inline constexpr double kControlEpsilon = 2.0e-5 * std::numbers::pi; // 1e-5 * 2 pi

/// Two-sided control-frequency values whose sides disagree beyond this
/// relative tolerance are flagged.
inline constexpr double kControlDisagreeTol = 1e-3;

/// Assembled block system whose solution carries 1/H_k(z) in its first entry.
struct TfSystem {
    ComplexMatrix matrix;     ///< (K+J)^2 single-frequency, (K+LJ)^2 multi-frequency
    std::vector<Complex> rhs; ///< concatenated [u; v]
    std::size_t target_sensor = 0;
    Complex z;
};

/// Transfer-function value of one sensor at one z point.
struct TfPoint {
    Complex z;
    Complex h;
    double residual = 0.0; ///< solver residual of the backing system
};

/// Transfer-function values of every sensor at one z point.
struct TfValue {
    Complex z;
    std::vector<Complex> h; ///< per sensor
    double max_residual = 0.0;
};

/// Control-frequency gain from the two-sided limit at e^{i(omega +- eps)}.
struct ControlGain {
    Complex value;
    Complex side_low;  ///< H at e^{i(omega - eps)}, finest offset used
    Complex side_high; ///< H at e^{i(omega + eps)}, finest offset used
    bool flagged = false; ///< sides disagree beyond kControlDisagreeTol
};

enum class SweepFlag { ok, control, failed };

/// Frequency response samples of one sensor on a fixed-radius circle.
struct SweepTable {
    std::size_t sensor = 0;
    double radius = 1.0;
    std::vector<double> freq;     ///< strictly increasing in [0, 0.5)
    std::vector<Complex> value;
    std::vector<double> magnitude;
    std::vector<double> phase;
    std::vector<SweepFlag> flag;
};

/// Loop-gain function G_jm(z) of a single-frequency scenario (L = 1).
/// Throws PoleProximityError within kPoleGuard of e^{+-i omega_0}.
Complex aux_gain_single(const Scenario& scenario, Complex z, std::size_t j, std::size_t m);

/// Loop-gain function G_ljk(z), one per (tone, actuator, sensor).
Complex aux_gain_multi(const Scenario& scenario, Complex z, std::size_t l, std::size_t j,
                       std::size_t k);

/// Single-frequency block system for H_target(z), size (K+J)^2.
TfSystem assemble_single(const Scenario& scenario, Complex z, std::size_t target_sensor);

/// Multi-frequency system of the common pseudo-error strategy, size (K+LJ)^2.
TfSystem assemble_common(const Scenario& scenario, Complex z, std::size_t target_sensor);

/// Multi-frequency system of the multiple pseudo-error strategy: identical to
/// the common one except the off-diagonal blocks of E vanish.
TfSystem assemble_multiple(const Scenario& scenario, Complex z, std::size_t target_sensor);

/// H_k(z) by assembling and solving the appropriate system.  The analytic
/// systems model unit-amplitude, zero-phase references; the scenario's
/// reference spec only affects the time-domain engine.
TfPoint transfer_function(const Scenario& scenario, Strategy strategy, Complex z,
                          std::size_t sensor);

/// H_k(z) for every sensor at one z.
TfValue transfer_function_all(const Scenario& scenario, Strategy strategy, Complex z);

/// Closed-form H_1(z) of the single-channel system (K = J = L = 1).  At the
/// control frequency the analytic limit is returned instead of the singular
/// quotient.
Complex closed_form_single(const Scenario& scenario, Complex z);

/// H_k at z = e^{i omega_l} via the two-sided epsilon-offset limit.
ControlGain control_frequency_gain(const Scenario& scenario, Strategy strategy,
                                   std::size_t sensor, std::size_t tone);

/// Frequency response of one sensor over `grid_size` points at the given
/// radius.  Control frequencies on the grid are substituted with the
/// two-sided limit; isolated failures are flagged, more than 1% of them is an
/// error.
SweepTable sweep(const Scenario& scenario, Strategy strategy, std::size_t sensor,
                 std::size_t grid_size, double radius = 1.0);

} // namespace ane

#endif // ANELAB_TF_ANALYSIS_HPP
