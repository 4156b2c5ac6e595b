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

#include "anelab/pole_search.hpp"

#include <cmath>
#include <string>

namespace ane {

namespace {

double profile_value(const Scenario& s, Strategy strategy, std::size_t sensor, double angle,
                     double r) {
    return std::abs(transfer_function(s, strategy, std::polar(r, angle), sensor).h);
}

} // namespace

std::vector<double> scan_grid(std::size_t points) {
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = kScanFloor + (kScanCeil - kScanFloor) * static_cast<double>(i) /
                                   static_cast<double>(points - 1);
    return grid;
}

std::vector<double> radial_profile(const Scenario& scenario, Strategy strategy,
                                   std::size_t sensor, std::size_t tone,
                                   std::span<const double> r_grid) {
    if (sensor >= scenario.sensors || tone >= scenario.tone_count())
        throw Error("index out of range");
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (r_grid[i] < kScanFloor || r_grid[i] > kScanCeil)
            throw Error("radius grid must stay inside [" + std::to_string(kScanFloor) + ", 1 - 1e-6]");
        if (i > 0 && !(r_grid[i] > r_grid[i - 1]))
            throw Error("radius grid must be strictly increasing");
    }

    const double angle = scenario.omega(tone);
    std::vector<double> profile;
    profile.reserve(r_grid.size());
    for (double r : r_grid) {
        try {
            profile.push_back(profile_value(scenario, strategy, sensor, angle, r));
        } catch (const Error& err) {
            throw Error("radial profile failed at r = " + std::to_string(r) + ": " + err.what());
        }
    }
    return profile;
}

PoleEstimate estimate_pole(const Scenario& scenario, Strategy strategy, std::size_t sensor,
                           std::size_t tone) {
    const std::vector<double> grid = scan_grid(kCoarseScanPoints);
    const std::vector<double> profile =
        radial_profile(scenario, strategy, sensor, tone, grid);

    std::size_t best = 0;
    for (std::size_t i = 1; i < profile.size(); ++i)
        if (profile[i] > profile[best]) best = i;

    PoleEstimate est;
    est.sensor = sensor;
    est.tone = tone;
    est.angle = scenario.omega(tone);

    if (best == 0 || best + 1 == grid.size()) {
        // No interior maximum on the scan range; no radius claimed.
        est.unstable_or_boundary = true;
        est.radius = grid[best];
        est.peak = profile[best];
        est.resolution = grid[1] - grid[0];
        return est;
    }

    // Golden-section refinement inside the bracketing coarse cell pair.
    const double angle = est.angle;
    double a = grid[best - 1];
    double b = grid[best + 1];
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = profile_value(scenario, strategy, sensor, angle, x1);
    double f2 = profile_value(scenario, strategy, sensor, angle, x2);
    while (b - a > kRadiusResolution) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = profile_value(scenario, strategy, sensor, angle, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = profile_value(scenario, strategy, sensor, angle, x2);
        }
    }

    est.radius = 0.5 * (a + b);
    est.peak = profile_value(scenario, strategy, sensor, angle, est.radius);
    est.resolution = b - a;
    est.unstable_or_boundary = est.radius >= kScanCeil;
    return est;
}

std::vector<PoleEstimate> estimate_all_poles(const Scenario& scenario, Strategy strategy) {
    std::vector<PoleEstimate> all;
    all.reserve(scenario.sensors * scenario.tone_count());
    for (std::size_t k = 0; k < scenario.sensors; ++k)
        for (std::size_t l = 0; l < scenario.tone_count(); ++l)
            all.push_back(estimate_pole(scenario, strategy, k, l));
    return all;
}

} // namespace ane
