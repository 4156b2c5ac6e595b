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

#ifndef ANELAB_POLE_SEARCH_HPP
#define ANELAB_POLE_SEARCH_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "anelab/tf_analysis.hpp"

namespace ane {

/// Radial scan range and resolution of the pole search.
inline constexpr double kScanFloor = 0.05;          // matches the path evaluation floor
inline constexpr double kScanCeil = 1.0 - 1e-6;
inline constexpr std::size_t kCoarseScanPoints = 512;
inline constexpr double kRadiusResolution = 1e-6;

/// One estimated transfer-function pole: the |H_k| maximum along the radial
/// line at a control frequency's angle.
struct PoleEstimate {
    std::size_t sensor = 0;
    std::size_t tone = 0;
    double radius = 0.0; ///< argmax radius, meaningful when not boundary-flagged
    double angle = 0.0;  ///< 2 pi f_l, fixed by the search
    double peak = 0.0;   ///< |H_k| at the estimate
    double resolution = 0.0; ///< final bracket width
    bool unstable_or_boundary = false; ///< maximum sat on the scan boundary
};

/// |H_k(r e^{i 2 pi f_l})| over a strictly increasing radius grid inside
/// [kScanFloor, kScanCeil].
std::vector<double> radial_profile(const Scenario& scenario, Strategy strategy, std::size_t sensor,
                                   std::size_t tone, std::span<const double> r_grid);

/// Uniform radius grid with `points` entries over the scan range.
std::vector<double> scan_grid(std::size_t points = kCoarseScanPoints);

/// Coarse 512-point scan plus bracket refinement to kRadiusResolution.
PoleEstimate estimate_pole(const Scenario& scenario, Strategy strategy, std::size_t sensor,
                           std::size_t tone);

/// Pole estimates for every (sensor, tone) pair, sensor-major order.
std::vector<PoleEstimate> estimate_all_poles(const Scenario& scenario, Strategy strategy);

} // namespace ane

#endif // ANELAB_POLE_SEARCH_HPP
