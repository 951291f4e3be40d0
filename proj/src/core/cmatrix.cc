// Copyright 2026 The entclass Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "entclass/core/cmatrix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "entclass/core/error.h"

namespace entclass {

CMatrix::CMatrix(size_t rows, size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw ShapeError("CMatrix entry count " + std::to_string(entries_.size()) + " != " + std::to_string(rows_) +
                         "x" + std::to_string(cols_));
    }
}

CMatrix CMatrix::identity(size_t n) {
    CMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

CMatrix CMatrix::column(const std::vector<Complex> &entries) { return CMatrix(entries.size(), 1, entries); }

CMatrix CMatrix::outer(const std::vector<Complex> &v, const std::vector<Complex> &w) {
    CMatrix m(v.size(), w.size());
    for (size_t i = 0; i < v.size(); ++i) {
        for (size_t j = 0; j < w.size(); ++j) {
            m(i, j) = v[i] * std::conj(w[j]);
        }
    }
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(cols_, rows_);
    for (size_t r = 0; r < rows_; ++r) {
        for (size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

Complex CMatrix::trace() const {
    Complex t = 0;
    for (size_t i = 0; i < std::min(rows_, cols_); ++i) {
        t += (*this)(i, i);
    }
    return t;
}

CMatrix CMatrix::operator*(const CMatrix &rhs) const {
    if (cols_ != rhs.rows_) {
        throw ShapeError("CMatrix product: " + std::to_string(rows_) + "x" + std::to_string(cols_) + " times " +
                         std::to_string(rhs.rows_) + "x" + std::to_string(rhs.cols_));
    }
    CMatrix out(rows_, rhs.cols_);
    for (size_t r = 0; r < rows_; ++r) {
        for (size_t k = 0; k < cols_; ++k) {
            Complex a = (*this)(r, k);
            if (a == Complex(0)) {
                continue;
            }
            for (size_t c = 0; c < rhs.cols_; ++c) {
                out(r, c) += a * rhs(k, c);
            }
        }
    }
    return out;
}

std::vector<Complex> CMatrix::apply(const std::vector<Complex> &v) const {
    if (v.size() != cols_) {
        throw ShapeError("CMatrix::apply: vector length " + std::to_string(v.size()) + " != cols " +
                         std::to_string(cols_));
    }
    std::vector<Complex> out(rows_);
    for (size_t r = 0; r < rows_; ++r) {
        Complex acc = 0;
        for (size_t c = 0; c < cols_; ++c) {
            acc += (*this)(r, c) * v[c];
        }
        out[r] = acc;
    }
    return out;
}

double CMatrix::max_abs_diff(const CMatrix &other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw ShapeError("CMatrix::max_abs_diff: shape mismatch");
    }
    double worst = 0;
    for (size_t i = 0; i < entries_.size(); ++i) {
        worst = std::max(worst, std::abs(entries_[i] - other.entries_[i]));
    }
    return worst;
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t i1 = 0; i1 < a.rows(); ++i1) {
        for (size_t j1 = 0; j1 < a.cols(); ++j1) {
            Complex s = a(i1, j1);
            for (size_t i2 = 0; i2 < b.rows(); ++i2) {
                for (size_t j2 = 0; j2 < b.cols(); ++j2) {
                    out(i1 * b.rows() + i2, j1 * b.cols() + j2) = s * b(i2, j2);
                }
            }
        }
    }
    return out;
}

}  // namespace entclass
