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

#ifndef ENTCLASS_CORE_CMATRIX_H
#define ENTCLASS_CORE_CMATRIX_H

#include <complex>
#include <cstddef>
#include <vector>

namespace entclass {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Column vectors are rows x 1 matrices.
class CMatrix {
   public:
    CMatrix() = default;
    CMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
    CMatrix(size_t rows, size_t cols, std::vector<Complex> entries);

    static CMatrix identity(size_t n);
    static CMatrix column(const std::vector<Complex> &entries);
    /// |v><w| for column vectors v, w.
    static CMatrix outer(const std::vector<Complex> &v, const std::vector<Complex> &w);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const std::vector<Complex> &entries() const { return entries_; }

    Complex &operator()(size_t r, size_t c) { return entries_[r * cols_ + c]; }
    const Complex &operator()(size_t r, size_t c) const { return entries_[r * cols_ + c]; }

    CMatrix adjoint() const;
    Complex trace() const;
    CMatrix operator*(const CMatrix &rhs) const;
    std::vector<Complex> apply(const std::vector<Complex> &v) const;

    /// Largest |a_ij - b_ij|. Shapes must match.
    double max_abs_diff(const CMatrix &other) const;

    bool operator==(const CMatrix &other) const = default;

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<Complex> entries_;
};

/// Kronecker (tensor) product: entry [(i1,i2),(j1,j2)] = a[i1,j1] * b[i2,j2].
CMatrix kron(const CMatrix &a, const CMatrix &b);

}  // namespace entclass

#endif
