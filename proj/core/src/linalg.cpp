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

#include "anelab/linalg.hpp"

#include <cmath>
#include <utility>

namespace ane {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {
    if (rows == 0 || cols == 0) throw Error("matrix dimensions must be at least 1x1");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double ComplexMatrix::norm_inf() const {
    double best = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
        double row_sum = 0.0;
        for (std::size_t c = 0; c < cols_; ++c) row_sum += std::abs((*this)(r, c));
        best = std::max(best, row_sum);
    }
    return best;
}

bool ComplexMatrix::is_finite() const {
    for (const auto& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

std::vector<Complex> ComplexMatrix::multiply(const std::vector<Complex>& x) const {
    if (x.size() != cols_) throw Error("matrix-vector size mismatch");
    std::vector<Complex> y(rows_, Complex{0.0, 0.0});
    for (std::size_t r = 0; r < rows_; ++r) {
        Complex acc{0.0, 0.0};
        for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * x[c];
        y[r] = acc;
    }
    return y;
}

LuDecomposition::LuDecomposition(const ComplexMatrix& m) : lu_(m), perm_(m.rows()) {
    if (m.rows() != m.cols()) throw Error("LU factorisation needs a square matrix");
    if (!m.is_finite()) throw Error("matrix entries must be finite");

    const std::size_t n = lu_.rows();
    const double pivot_floor = kSingularityFactor * m.norm_inf();
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

    for (std::size_t step = 0; step < n; ++step) {
        // Pivot by modulus over the remaining column.
        std::size_t pivot_row = step;
        double pivot_mag = std::abs(lu_(step, step));
        for (std::size_t r = step + 1; r < n; ++r) {
            const double mag = std::abs(lu_(r, step));
            if (mag > pivot_mag) {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if (pivot_mag <= pivot_floor)
            throw NearSingularError("matrix is singular to working precision at elimination step " +
                                        std::to_string(step),
                                    step);

        if (pivot_row != step) {
            for (std::size_t c = 0; c < n; ++c)
                std::swap(lu_(step, c), lu_(pivot_row, c));
            std::swap(perm_[step], perm_[pivot_row]);
        }

        const Complex pivot = lu_(step, step);
        for (std::size_t r = step + 1; r < n; ++r) {
            const Complex factor = lu_(r, step) / pivot;
            lu_(r, step) = factor;
            for (std::size_t c = step + 1; c < n; ++c)
                lu_(r, c) -= factor * lu_(step, c);
        }
    }
}

std::vector<Complex> LuDecomposition::solve(const std::vector<Complex>& rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) throw Error("right-hand side length mismatch");

    std::vector<Complex> y(n);
    for (std::size_t r = 0; r < n; ++r) {
        Complex acc = rhs[perm_[r]];
        for (std::size_t c = 0; c < r; ++c) acc -= lu_(r, c) * y[c];
        y[r] = acc;
    }
    std::vector<Complex> x(n);
    for (std::size_t ri = n; ri-- > 0;) {
        Complex acc = y[ri];
        for (std::size_t c = ri + 1; c < n; ++c) acc -= lu_(ri, c) * x[c];
        x[ri] = acc / lu_(ri, ri);
    }
    return x;
}

namespace {

double norm_inf(const std::vector<Complex>& v) {
    double best = 0.0;
    for (const auto& e : v) best = std::max(best, std::abs(e));
    return best;
}

double residual_inf(const ComplexMatrix& m, const std::vector<Complex>& x,
                    const std::vector<Complex>& rhs) {
    const auto mx = m.multiply(x);
    double best = 0.0;
    for (std::size_t i = 0; i < rhs.size(); ++i) best = std::max(best, std::abs(mx[i] - rhs[i]));
    return best;
}

} // namespace

SolveResult solve(const ComplexMatrix& m, const std::vector<Complex>& rhs) {
    if (m.rows() != m.cols()) throw Error("solve needs a square matrix");
    if (rhs.size() != m.rows()) throw Error("right-hand side length mismatch");
    for (const auto& v : rhs)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error("right-hand side entries must be finite");

    const LuDecomposition lu(m);
    SolveResult result;
    result.x = lu.solve(rhs);
    result.residual = residual_inf(m, result.x, rhs);

    const double target = kResidualFactor * norm_inf(rhs);
    if (result.residual > target) {
        // One refinement pass against the original matrix.
        std::vector<Complex> r(rhs.size());
        const auto mx = m.multiply(result.x);
        for (std::size_t i = 0; i < rhs.size(); ++i) r[i] = rhs[i] - mx[i];
        const auto delta = lu.solve(r);
        for (std::size_t i = 0; i < rhs.size(); ++i) result.x[i] += delta[i];
        result.residual = residual_inf(m, result.x, rhs);
        result.refined = true;
    }
    return result;
}

} // namespace ane
