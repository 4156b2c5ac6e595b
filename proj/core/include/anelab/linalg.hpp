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

#ifndef ANELAB_LINALG_HPP
#define ANELAB_LINALG_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "anelab/errors.hpp"

namespace ane {

using Complex = std::complex<double>;

/// Pivot moduli below kSingularityFactor * ||M||_inf abort the elimination.
inline constexpr double kSingularityFactor = 1e-13;

/// Residual target ||Mx - rhs||_inf <= kResidualFactor * ||rhs||_inf; one
/// refinement pass runs when the first solve misses it.
inline constexpr double kResidualFactor = 1e-10;

/// Dense row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    /// Zero-filled rows x cols matrix; both dimensions must be >= 1.
    ComplexMatrix(std::size_t rows, std::size_t cols);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<Complex>& data() const { return data_; }

    /// Induced infinity norm (maximum absolute row sum).
    double norm_inf() const;

    /// True when every entry is finite.
    bool is_finite() const;

    std::vector<Complex> multiply(const std::vector<Complex>& x) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// LU factorisation with partial pivoting by modulus, PA = LU packed in place.
class LuDecomposition {
public:
    /// Throws NearSingularError naming the elimination step when a pivot
    /// modulus drops below kSingularityFactor * ||M||_inf.
    explicit LuDecomposition(const ComplexMatrix& m);

    std::vector<Complex> solve(const std::vector<Complex>& rhs) const;

    std::size_t size() const { return lu_.rows(); }

private:
    ComplexMatrix lu_;
    std::vector<std::size_t> perm_;
};

struct SolveResult {
    std::vector<Complex> x;
    double residual = 0.0; ///< ||Mx - rhs||_inf after any refinement
    bool refined = false;  ///< one iterative refinement pass ran
};

/// Solves Mx = rhs by Gaussian elimination with partial pivoting.  Inputs are
/// validated for shape and finiteness; the residual is measured against the
/// original matrix.
SolveResult solve(const ComplexMatrix& m, const std::vector<Complex>& rhs);

} // namespace ane

#endif // ANELAB_LINALG_HPP
