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

#include <benchmark/benchmark.h>

#include <complex>

#include "anelab/equalizer.hpp"
#include "anelab/pole_search.hpp"
#include "anelab/scenario.hpp"
#include "anelab/tf_analysis.hpp"

namespace {

// 2x2, five-tone scenario mirroring the shipped fig5 fixture.
ane::Scenario bench_scenario() {
    ane::Scenario s;
    s.name = "bench";
    s.actuators = 2;
    s.sensors = 2;
    for (double f : {0.05, 0.15, 0.25, 0.35, 0.45}) s.tones.push_back(ane::ToneSpec{f});
    s.reference = ane::ReferenceSpec::unit(5);
    s.noise = ane::NoiseField::uniform(2, 5);
    s.paths.actuators = 2;
    s.paths.sensors = 2;
    s.paths.true_paths = {
        ane::PathResponse::fir({1.0, 0.25, -0.1, 0.05}),
        ane::PathResponse::fir({0.35, 0.1, 0.05, -0.02}),
        ane::PathResponse::fir({0.3, -0.12, 0.06, 0.03}),
        ane::PathResponse::fir({1.0, 0.2, 0.1, -0.05}),
    };
    s.paths.estimated_paths = s.paths.true_paths;
    s.paths.perfect_estimates = true;
    s.eq.tones = 5;
    s.eq.sensors = 2;
    s.eq.actuators = 2;
    const double b1[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    const double b2[] = {0.9, 0.7, 0.5, 0.3, 0.1};
    for (int l = 0; l < 5; ++l) {
        s.eq.beta.push_back(b1[l]);
        s.eq.beta.push_back(b2[l]);
    }
    s.eq.gamma.assign(10, 0.0);
    s.eq.mu.assign(5, 0.001);
    s.primary = {ane::PathResponse::unity(), ane::PathResponse::unity()};
    s.validate();
    return s;
}

void BM_AssembleSolve(benchmark::State& state) {
    const auto s = bench_scenario();
    const ane::Complex z = std::polar(0.97, 1.3);
    for (auto _ : state) {
        auto point = ane::transfer_function(s, ane::Strategy::common, z, 0);
        benchmark::DoNotOptimize(point.h);
    }
}
BENCHMARK(BM_AssembleSolve);

void BM_SweepPoint256(benchmark::State& state) {
    const auto s = bench_scenario();
    for (auto _ : state) {
        auto table = ane::sweep(s, ane::Strategy::multiple, 0, 256);
        benchmark::DoNotOptimize(table.magnitude.data());
    }
}
BENCHMARK(BM_SweepPoint256);

void BM_SimulationSteps(benchmark::State& state) {
    const auto s = bench_scenario();
    for (auto _ : state) {
        auto trace = ane::run_simulation(s, 4096);
        benchmark::DoNotOptimize(trace.error.data());
    }
}
BENCHMARK(BM_SimulationSteps);

void BM_PoleEstimate(benchmark::State& state) {
    const auto s = bench_scenario();
    for (auto _ : state) {
        auto est = ane::estimate_pole(s, ane::Strategy::common, 0, 2);
        benchmark::DoNotOptimize(est.radius);
    }
}
BENCHMARK(BM_PoleEstimate);

} // namespace

BENCHMARK_MAIN();
