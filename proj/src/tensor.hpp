// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace sedd {

// All network math is binary32, row-major. Dot products and reductions
// accumulate in binary64 before rounding back to binary32.
using FloatVector = std::vector<float>;

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<float> data;  // rows * cols, row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0f) {}

    float& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    float at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    const float* row(std::size_t r) const { return data.data() + r * cols; }
    float* row(std::size_t r) { return data.data() + r * cols; }
    std::size_t size() const { return data.size(); }
};

// out = m * x  (out has length m.rows)
void matvec(const Matrix& m, const FloatVector& x, FloatVector& out);

// out = m^T * x  (out has length m.cols)
void matvec_transposed(const Matrix& m, const FloatVector& x, FloatVector& out);

bool all_finite(const FloatVector& v);
bool all_finite(const Matrix& m);

}  // namespace sedd
