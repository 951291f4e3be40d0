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

#ifndef ENTCLASS_QSIM_STATE_H
#define ENTCLASS_QSIM_STATE_H

#include <vector>

#include "entclass/core/cmatrix.h"

namespace entclass {

/// Pure n-qubit state. Qubit 0 is the most significant bit of the amplitude index.
struct QuantumState {
    int n_qubits = 0;
    std::vector<Complex> amplitudes;

    /// Validates length 2^n and unit norm (within 1e-10).
    static QuantumState from_amplitudes(int n_qubits, std::vector<Complex> amplitudes);
    /// Same, but rescales to unit norm first.
    static QuantumState normalized(int n_qubits, std::vector<Complex> amplitudes);

    size_t dim() const { return amplitudes.size(); }
    double norm_squared() const;
};

/// Mixed state on n qubits.
struct DensityMatrix {
    int n_qubits = 0;
    CMatrix rho;

    size_t dim() const { return rho.rows(); }
    double purity() const;
    /// Throws DomainError unless Hermitian, unit trace and PSD within `tol`.
    void validate(double tol = 1e-10) const;
};

DensityMatrix to_density(const QuantumState &state);

/// rho_ij -> (1 - epsilon) rho_ij for i != j; populations untouched.
DensityMatrix apply_dephasing(const DensityMatrix &rho, double epsilon);

/// Applies unitaries[q] to qubit q. unitaries.size() must equal n_qubits.
QuantumState apply_local_unitaries(const QuantumState &state, const std::vector<CMatrix> &unitaries);

/// Tensor product of states; `a` occupies the more significant qubits.
QuantumState tensor_product(const QuantumState &a, const QuantumState &b);

/// Reorders qubits: qubit q of `state` becomes qubit destination[q] of the result.
QuantumState permute_qubits(const QuantumState &state, const std::vector<int> &destination);

}  // namespace entclass

#endif
