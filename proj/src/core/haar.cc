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

#include "entclass/core/haar.h"

#include <cmath>

#include "entclass/core/error.h"

namespace entclass {

CMatrix haar_unitary(size_t dim, RngStream &rng) {
    if (dim < 1) {
        throw DomainError("haar_unitary: dim must be >= 1");
    }
    const double scale = 1.0 / std::sqrt(2.0);
    // Columns stored contiguously while orthonormalizing.
    std::vector<std::vector<Complex>> cols(dim, std::vector<Complex>(dim));
    for (size_t r = 0; r < dim; ++r) {
        for (size_t c = 0; c < dim; ++c) {
            double re = rng.normal();
            double im = rng.normal();
            cols[c][r] = Complex(re * scale, im * scale);
        }
    }
    for (size_t c = 0; c < dim; ++c) {
        // Second sweep restores orthogonality lost to round-off.
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (size_t p = 0; p < c; ++p) {
                Complex proj = 0;
                for (size_t r = 0; r < dim; ++r) {
                    proj += std::conj(cols[p][r]) * cols[c][r];
                }
                for (size_t r = 0; r < dim; ++r) {
                    cols[c][r] -= proj * cols[p][r];
                }
            }
        }
        double norm = 0;
        for (const Complex &z : cols[c]) {
            norm += std::norm(z);
        }
        norm = std::sqrt(norm);
        for (Complex &z : cols[c]) {
            z /= norm;
        }
    }
    CMatrix u(dim, dim);
    for (size_t r = 0; r < dim; ++r) {
        for (size_t c = 0; c < dim; ++c) {
            u(r, c) = cols[c][r];
        }
    }
    return u;
}

}  // namespace entclass
