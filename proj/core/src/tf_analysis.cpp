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

#include "anelab/tf_analysis.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ane {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_fir_paths(const Scenario& s) {
    for (std::size_t j = 0; j < s.actuators; ++j)
        for (std::size_t k = 0; k < s.sensors; ++k)
            if (!s.paths.true_path(j, k).is_fir() || !s.paths.estimated_path(j, k).is_fir())
                throw Error("transfer-function analysis needs FIR paths; path [" +
                            std::to_string(j) + "][" + std::to_string(k) +
                            "] is a gain table and cannot be evaluated at generic z");
    for (std::size_t k = 0; k < s.sensors; ++k)
        if (!s.primary[k].is_fir())
            throw Error("transfer-function analysis needs FIR primary paths; primary_paths[" +
                        std::to_string(k) + "] is a gain table");
}

void guard_pole(Complex z, double omega) {
    const Complex pole{std::cos(omega), std::sin(omega)};
    if (std::abs(z - pole) < kPoleGuard || std::abs(z - std::conj(pole)) < kPoleGuard)
        throw PoleProximityError("z within " + std::to_string(kPoleGuard) +
                                 " of the control-frequency pole at omega = " +
                                 std::to_string(omega));
}

// Loop-gain kernel shared by the single- and multi-frequency operations so
// that both produce identical values for identical parameters.
Complex aux_kernel(Complex z, double omega, double amp_est, double phase_est, double mu,
                   double one_minus_gamma, double one_minus_beta) {
    guard_pole(z, omega);
    const Complex num = z * std::cos(omega - phase_est) - std::cos(phase_est);
    const Complex den = z * z - (2.0 * std::cos(omega)) * z + 1.0;
    return (-2.0 * mu * amp_est) * (one_minus_gamma / one_minus_beta) * (num / den);
}

// Estimated-path gain at the control frequency, in polar form.
void estimated_polar(const Scenario& s, std::size_t l, std::size_t j, std::size_t k,
                     double& amp, double& phase) {
    const Complex g = s.paths.estimated_path(j, k).gain_at_frequency(s.tones[l].freq);
    amp = std::abs(g);
    phase = std::arg(g);
}

Complex aux_value(const Scenario& s, Complex z, std::size_t l, std::size_t j, std::size_t k) {
    double amp = 0.0, phase = 0.0;
    estimated_polar(s, l, j, k, amp, phase);
    return aux_kernel(z, s.omega(l), amp, phase, s.eq.mu_at(l), 1.0 - s.eq.gamma_at(l, j),
                      1.0 - s.eq.beta_at(l, k));
}

// System position -> original sensor index, placing the target at position 0.
struct SensorPermutation {
    std::size_t target;
    std::size_t operator()(std::size_t pos) const {
        if (pos == 0) return target;
        if (pos == target) return 0;
        return pos;
    }
};

// Path gains of every true/estimated path at z, indexed [j][k] flattened.
struct PathGains {
    std::vector<Complex> truth;
    std::vector<Complex> estimate;
    std::size_t sensors;

    PathGains(const Scenario& s, Complex z) : sensors(s.sensors) {
        truth.resize(s.actuators * s.sensors);
        estimate.resize(s.actuators * s.sensors);
        for (std::size_t j = 0; j < s.actuators; ++j)
            for (std::size_t k = 0; k < s.sensors; ++k) {
                truth[j * sensors + k] = s.paths.true_path(j, k).gain(z);
                estimate[j * sensors + k] = s.paths.estimated_path(j, k).gain(z);
            }
    }

    Complex c(std::size_t j, std::size_t k) const { return truth[j * sensors + k]; }
    Complex c_est(std::size_t j, std::size_t k) const { return estimate[j * sensors + k]; }
};

// Generic multi-frequency block assembly; `block_diagonal` zeroes the
// off-diagonal blocks of E (the multiple pseudo-error structure).
TfSystem assemble_blocks(const Scenario& s, Complex z, std::size_t target, bool block_diagonal) {
    if (target >= s.sensors) throw Error("target sensor out of range");
    require_fir_paths(s);

    const std::size_t K = s.sensors;
    const std::size_t J = s.actuators;
    const std::size_t L = s.tone_count();
    const SensorPermutation sigma{target};
    const std::size_t dim = K + L * J;

    TfSystem sys{ComplexMatrix(dim, dim), std::vector<Complex>(dim, Complex{0.0, 0.0}), target, z};
    const PathGains gains(s, z);

    // G_{l, j, k} for every tone, actuator and (original) sensor index.
    std::vector<Complex> g(L * J * K);
    auto g_at = [&](std::size_t l, std::size_t j, std::size_t k) -> Complex {
        return g[(l * J + j) * K + k];
    };
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t j = 0; j < J; ++j)
            for (std::size_t k = 0; k < K; ++k)
                g[(l * J + j) * K + k] = aux_value(s, z, l, j, k);

    // A block: first column carries the primary-path ratios, the remaining
    // diagonal is -1.
    std::vector<Complex> p(K);
    for (std::size_t k = 0; k < K; ++k) p[k] = s.primary[k].gain(z);
    for (std::size_t f = 0; f < K; ++f) {
        sys.matrix(f, 0) = p[sigma(f)] / p[sigma(0)];
        if (f != 0) sys.matrix(f, f) = -1.0;
    }

    // B blocks: row f (sensor position), block l, column c (actuator), true paths.
    for (std::size_t f = 0; f < K; ++f)
        for (std::size_t l = 0; l < L; ++l)
            for (std::size_t c = 0; c < J; ++c)
                sys.matrix(f, K + l * J + c) =
                    (1.0 - s.eq.gamma_at(l, c)) * gains.c(c, sigma(f));

    // D blocks: row (l, f actuator), column c (sensor position); the target
    // column is zero because its error ratio moved to the right-hand side.
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t f = 0; f < J; ++f)
            for (std::size_t c = 1; c < K; ++c)
                sys.matrix(K + l * J + f, c) = -g_at(l, f, sigma(c));

    // E blocks: block row F, block column C, entries (f, c) over actuators.
    for (std::size_t F = 0; F < L; ++F)
        for (std::size_t C = 0; C < L; ++C) {
            if (block_diagonal && F != C) continue;
            for (std::size_t f = 0; f < J; ++f)
                for (std::size_t c = 0; c < J; ++c) {
                    Complex sum{0.0, 0.0};
                    for (std::size_t kp = 0; kp < K; ++kp) {
                        const std::size_t k = sigma(kp);
                        const double b = s.eq.beta_at(C, k);
                        sum += (b / (1.0 - b)) * g_at(F, f, k) * gains.c_est(c, k);
                    }
                    Complex e = -(1.0 - s.eq.gamma_at(C, c)) * sum;
                    if (F == C && f == c) e += 1.0;
                    sys.matrix(K + F * J + f, K + C * J + c) = e;
                }
        }

    // rhs = [u; v]: u has the single nonzero u_1 = 1, v carries the target
    // column of G.
    sys.rhs[0] = 1.0;
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t f = 0; f < J; ++f)
            sys.rhs[K + l * J + f] = g_at(l, f, sigma(0));

    return sys;
}

} // namespace

Complex aux_gain_single(const Scenario& scenario, Complex z, std::size_t j, std::size_t m) {
    if (scenario.tone_count() != 1)
        throw Error("aux_gain_single needs a single-frequency scenario");
    if (j >= scenario.actuators || m >= scenario.sensors) throw Error("index out of range");
    return aux_value(scenario, z, 0, j, m);
}

Complex aux_gain_multi(const Scenario& scenario, Complex z, std::size_t l, std::size_t j,
                       std::size_t k) {
    if (l >= scenario.tone_count() || j >= scenario.actuators || k >= scenario.sensors)
        throw Error("index out of range");
    return aux_value(scenario, z, l, j, k);
}

TfSystem assemble_single(const Scenario& scenario, Complex z, std::size_t target_sensor) {
    if (scenario.tone_count() != 1)
        throw Error("assemble_single needs a single-frequency scenario");
    if (target_sensor >= scenario.sensors) throw Error("target sensor out of range");
    require_fir_paths(scenario);

    const std::size_t K = scenario.sensors;
    const std::size_t J = scenario.actuators;
    const SensorPermutation sigma{target_sensor};
    const std::size_t dim = K + J;

    TfSystem sys{ComplexMatrix(dim, dim), std::vector<Complex>(dim, Complex{0.0, 0.0}),
                 target_sensor, z};
    const PathGains gains(scenario, z);

    std::vector<Complex> g(J * K);
    for (std::size_t j = 0; j < J; ++j)
        for (std::size_t k = 0; k < K; ++k) g[j * K + k] = aux_value(scenario, z, 0, j, k);

    std::vector<Complex> p(K);
    for (std::size_t k = 0; k < K; ++k) p[k] = scenario.primary[k].gain(z);

    for (std::size_t f = 0; f < K; ++f) {
        sys.matrix(f, 0) = p[sigma(f)] / p[sigma(0)];
        if (f != 0) sys.matrix(f, f) = -1.0;
        for (std::size_t c = 0; c < J; ++c)
            sys.matrix(f, K + c) = (1.0 - scenario.eq.gamma_at(0, c)) * gains.c(c, sigma(f));
    }

    for (std::size_t f = 0; f < J; ++f) {
        for (std::size_t c = 1; c < K; ++c) sys.matrix(K + f, c) = -g[f * K + sigma(c)];
        for (std::size_t c = 0; c < J; ++c) {
            Complex sum{0.0, 0.0};
            for (std::size_t kp = 0; kp < K; ++kp) {
                const std::size_t k = sigma(kp);
                const double b = scenario.eq.beta_at(0, k);
                sum += (b / (1.0 - b)) * g[f * K + k] * gains.c_est(c, k);
            }
            Complex e = -(1.0 - scenario.eq.gamma_at(0, c)) * sum;
            if (f == c) e += 1.0;
            sys.matrix(K + f, K + c) = e;
        }
        sys.rhs[K + f] = g[f * K + sigma(0)];
    }
    sys.rhs[0] = 1.0;

    return sys;
}

TfSystem assemble_common(const Scenario& scenario, Complex z, std::size_t target_sensor) {
    return assemble_blocks(scenario, z, target_sensor, /*block_diagonal=*/false);
}

TfSystem assemble_multiple(const Scenario& scenario, Complex z, std::size_t target_sensor) {
    return assemble_blocks(scenario, z, target_sensor, /*block_diagonal=*/true);
}

TfPoint transfer_function(const Scenario& scenario, Strategy strategy, Complex z,
                          std::size_t sensor) {
    // The two strategies coincide for a single frequency; use the compact
    // single-frequency system there.
    const TfSystem sys = scenario.tone_count() == 1
                             ? assemble_single(scenario, z, sensor)
                             : (strategy == Strategy::common
                                    ? assemble_common(scenario, z, sensor)
                                    : assemble_multiple(scenario, z, sensor));
    const SolveResult res = solve(sys.matrix, sys.rhs);
    return {z, 1.0 / res.x[0], res.residual};
}

TfValue transfer_function_all(const Scenario& scenario, Strategy strategy, Complex z) {
    TfValue v;
    v.z = z;
    v.h.resize(scenario.sensors);
    for (std::size_t k = 0; k < scenario.sensors; ++k) {
        const TfPoint point = transfer_function(scenario, strategy, z, k);
        v.h[k] = point.h;
        v.max_residual = std::max(v.max_residual, point.residual);
    }
    return v;
}

Complex closed_form_single(const Scenario& scenario, Complex z) {
    if (scenario.sensors != 1 || scenario.actuators != 1 || scenario.tone_count() != 1)
        throw Error("closed_form_single needs K = J = L = 1");
    require_fir_paths(scenario);

    const double omega = scenario.omega(0);
    const double beta = scenario.eq.beta_at(0, 0);
    const Complex pole{std::cos(omega), std::sin(omega)};

    // At the control frequency the quotient is singular; its limit follows
    // from the diverging loop gain: H -> beta C~ / ((1 - beta) C + beta C~),
    // which is exactly beta under perfect estimation.
    const bool near_high = std::abs(z - pole) < kPoleGuard;
    const bool near_low = std::abs(z - std::conj(pole)) < kPoleGuard;
    if (near_high || near_low) {
        const Complex zp = near_high ? pole : std::conj(pole);
        const Complex c = scenario.paths.true_path(0, 0).gain(zp);
        const Complex c_est = scenario.paths.estimated_path(0, 0).gain(zp);
        return (beta * c_est) / ((1.0 - beta) * c + beta * c_est);
    }

    const Complex g = aux_value(scenario, z, 0, 0, 0);
    const Complex c = scenario.paths.true_path(0, 0).gain(z);
    const Complex c_est = scenario.paths.estimated_path(0, 0).gain(z);
    const double q = (1.0 - scenario.eq.gamma_at(0, 0)) / (1.0 - beta);
    return (1.0 - q * beta * g * c_est) / (1.0 - q * g * c + q * beta * g * (c - c_est));
}

ControlGain control_frequency_gain(const Scenario& scenario, Strategy strategy,
                                   std::size_t sensor, std::size_t tone) {
    if (sensor >= scenario.sensors || tone >= scenario.tone_count())
        throw Error("index out of range");
    const double omega = scenario.omega(tone);

    // Two-sided limit with refinement.  The two-sided average carries an
    // O(epsilon^2) error whose scale is set by the distance of the nearest
    // true pole to the unit circle, so the offset is halved (with Richardson
    // extrapolation across levels) until successive estimates settle.
    ControlGain gain;
    Complex prev_avg{};
    Complex extrapolated{};
    bool have_prev_level = false;
    bool have_prev_extrapolation = false;
    double eps = kControlEpsilon;
    try {
        for (int level = 0; level < 9; ++level, eps *= 0.5) {
            gain.side_low =
                transfer_function(scenario, strategy, std::polar(1.0, omega - eps), sensor).h;
            gain.side_high =
                transfer_function(scenario, strategy, std::polar(1.0, omega + eps), sensor).h;
            const Complex avg = 0.5 * (gain.side_low + gain.side_high);
            if (have_prev_level) {
                const Complex rich = (4.0 * avg - prev_avg) / 3.0;
                if (have_prev_extrapolation &&
                    std::abs(rich - extrapolated) <= 1e-7 * (1.0 + std::abs(rich))) {
                    gain.value = rich;
                    break;
                }
                extrapolated = rich;
                have_prev_extrapolation = true;
                gain.value = rich;
            } else {
                gain.value = avg;
            }
            prev_avg = avg;
            have_prev_level = true;
        }
    } catch (const Error& err) {
        throw Error("near_pole: control-frequency limit unsolvable at tone " +
                    std::to_string(tone) + " (side values incomplete): " + err.what());
    }

    // "Relative" with an absolute floor of one: H is an O(1) ratio, and near
    // a transmission zero both sides are tiny with opposite phase.
    const double scale = std::max({1.0, std::abs(gain.side_low), std::abs(gain.side_high)});
    gain.flagged = std::abs(gain.side_high - gain.side_low) / scale > kControlDisagreeTol;
    return gain;
}

SweepTable sweep(const Scenario& scenario, Strategy strategy, std::size_t sensor,
                 std::size_t grid_size, double radius) {
    if (grid_size < 16) throw Error("sweep grid must have at least 16 points");
    if (sensor >= scenario.sensors) throw Error("sensor index out of range");
    if (radius < kMinPathEvalRadius) throw Error("sweep radius below the path evaluation floor");

    SweepTable table;
    table.sensor = sensor;
    table.radius = radius;
    table.freq.reserve(grid_size);
    table.value.reserve(grid_size);
    table.magnitude.reserve(grid_size);
    table.phase.reserve(grid_size);
    table.flag.reserve(grid_size);

    const bool on_circle = std::abs(radius - 1.0) <= kPoleGuard;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::size_t failed = 0;

    for (std::size_t i = 0; i < grid_size; ++i) {
        const double f = 0.5 * static_cast<double>(i) / static_cast<double>(grid_size);
        const double angle = kTwoPi * f;
        table.freq.push_back(f);

        // Control frequencies on the grid take the two-sided limit value.
        std::size_t control_tone = scenario.tone_count();
        if (on_circle)
            for (std::size_t l = 0; l < scenario.tone_count(); ++l)
                if (std::abs(angle - scenario.omega(l)) < kPoleGuard) {
                    control_tone = l;
                    break;
                }

        try {
            Complex h;
            SweepFlag flag = SweepFlag::ok;
            if (control_tone < scenario.tone_count()) {
                h = control_frequency_gain(scenario, strategy, sensor, control_tone).value;
                flag = SweepFlag::control;
            } else {
                h = transfer_function(scenario, strategy, std::polar(radius, angle), sensor).h;
            }
            table.value.push_back(h);
            table.magnitude.push_back(std::abs(h));
            table.phase.push_back(std::arg(h));
            table.flag.push_back(flag);
        } catch (const Error&) {
            table.value.push_back(Complex{nan, nan});
            table.magnitude.push_back(nan);
            table.phase.push_back(nan);
            table.flag.push_back(SweepFlag::failed);
            ++failed;
        }
    }

    if (static_cast<double>(failed) > 0.01 * static_cast<double>(grid_size))
        throw Error("sweep failed at " + std::to_string(failed) + " of " +
                    std::to_string(grid_size) + " grid points");
    return table;
}

} // namespace ane
