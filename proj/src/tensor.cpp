// SPDX-License-Identifier: Apache-2.0
#include "tensor.hpp"

#include <cmath>

#include "error.hpp"

namespace sedd {

void matvec(const Matrix& m, const FloatVector& x, FloatVector& out) {
    if (x.size() != m.cols) {
        throw ShapeError("matvec: expected input of length " +
                         std::to_string(m.cols) + ", got " +
                         std::to_string(x.size()));
    }
    out.resize(m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) {
        const float* w = m.row(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < m.cols; ++c) {
            acc += static_cast<double>(w[c]) * static_cast<double>(x[c]);
        }
        out[r] = static_cast<float>(acc);
    }
}

void matvec_transposed(const Matrix& m, const FloatVector& x, FloatVector& out) {
    if (x.size() != m.rows) {
        throw ShapeError("matvec_transposed: expected input of length " +
                         std::to_string(m.rows) + ", got " +
                         std::to_string(x.size()));
    }
    out.assign(m.cols, 0.0f);
    std::vector<double> acc(m.cols, 0.0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        const float* w = m.row(r);
        const double xr = x[r];
        for (std::size_t c = 0; c < m.cols; ++c) {
            acc[c] += static_cast<double>(w[c]) * xr;
        }
    }
    for (std::size_t c = 0; c < m.cols; ++c) {
        out[c] = static_cast<float>(acc[c]);
    }
}

bool all_finite(const FloatVector& v) {
    for (float f : v) {
        if (!std::isfinite(f)) return false;
    }
    return true;
}

bool all_finite(const Matrix& m) {
    for (float f : m.data) {
        if (!std::isfinite(f)) return false;
    }
    return true;
}

}  // namespace sedd
