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

#ifndef ANELAB_ERRORS_HPP
#define ANELAB_ERRORS_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ane {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// A scenario (or one of its components) violates a model invariant.
/// Carries the complete list of violations, not just the first one found.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::vector<std::string>& items)
        : Error(join(items)), violations_(items) {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string text = "scenario validation failed (" + std::to_string(items.size()) + " issue(s)):";
        for (const auto& item : items) text += "\n  - " + item;
        return text;
    }

    std::vector<std::string> violations_;
};

/// Raw evaluation was requested too close to a control-frequency pole of
/// the loop-gain function.
class PoleProximityError : public Error {
public:
    using Error::Error;
};

/// Gaussian elimination met a pivot below the singularity threshold.
class NearSingularError : public Error {
public:
    NearSingularError(const std::string& message, std::size_t step)
        : Error(message), step_(step) {}

    /// Elimination step at which the pivot collapsed.
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

/// An adaptive coefficient left the finite range during simulation.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& message, std::size_t tone, std::size_t actuator,
                    std::uint64_t sample)
        : Error(message), tone_(tone), actuator_(actuator), sample_(sample) {}

    std::size_t tone() const { return tone_; }
    std::size_t actuator() const { return actuator_; }
    std::uint64_t sample() const { return sample_; }

private:
    std::size_t tone_;
    std::size_t actuator_;
    std::uint64_t sample_;
};

/// File-system or format failure while reading or writing artefacts.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace ane

#endif // ANELAB_ERRORS_HPP
