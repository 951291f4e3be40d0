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

#include "entclass/qsim/state.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "entclass/core/error.h"

namespace entclass {

namespace {

void check_dim(int n_qubits, size_t length) {
    if (n_qubits < 1 || n_qubits > 16) {
        throw DomainError("n_qubits must be in [1, 16], got " + std::to_string(n_qubits));
    }
    if (length != (size_t{1} << n_qubits)) {
        throw ShapeError("state of " + std::to_string(n_qubits) + " qubits needs " +
                         std::to_string(size_t{1} << n_qubits) + " amplitudes, got " + std::to_string(length));
    }
}

}  // namespace

double QuantumState::norm_squared() const {
    double total = 0;
    for (const Complex &a : amplitudes) {
        total += std::norm(a);
    }
    return total;
}

QuantumState QuantumState::from_amplitudes(int n_qubits, std::vector<Complex> amplitudes) {
    check_dim(n_qubits, amplitudes.size());
    QuantumState s{n_qubits, std::move(amplitudes)};
    if (std::abs(s.norm_squared() - 1.0) > 1e-10) {
        throw DomainError("state is not normalized: |psi|^2 = " + std::to_string(s.norm_squared()));
    }
    return s;
}

QuantumState QuantumState::normalized(int n_qubits, std::vector<Complex> amplitudes) {
    check_dim(n_qubits, amplitudes.size());
    QuantumState s{n_qubits, std::move(amplitudes)};
    double norm = std::sqrt(s.norm_squared());
    if (norm == 0.0) {
        throw DomainError("cannot normalize the zero vector");
    }
    for (Complex &a : s.amplitudes) {
        a /= norm;
    }
    return s;
}

double DensityMatrix::purity() const { return (rho * rho).trace().real(); }

void DensityMatrix::validate(double tol) const {
    const size_t d = dim();
    if (rho.cols() != d || d != (size_t{1} << n_qubits)) {
        throw ShapeError("density matrix dimension does not match n_qubits");
    }
    if (rho.max_abs_diff(rho.adjoint()) > tol) {
        throw DomainError("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - Complex(1.0)) > tol) {
        throw DomainError("density matrix trace is not 1");
    }
    Eigen::MatrixXcd m(d, d);
    for (size_t r = 0; r < d; ++r) {
        for (size_t c = 0; c < d; ++c) {
            m(r, c) = rho(r, c);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol) {
        throw DomainError("density matrix has a negative eigenvalue " + std::to_string(solver.eigenvalues().minCoeff()));
    }
}

DensityMatrix to_density(const QuantumState &state) {
    return DensityMatrix{state.n_qubits, CMatrix::outer(state.amplitudes, state.amplitudes)};
}

DensityMatrix apply_dephasing(const DensityMatrix &rho, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw DomainError("dephasing epsilon must be in [0, 1], got " + std::to_string(epsilon));
    }
    DensityMatrix out = rho;
    const double keep = 1.0 - epsilon;
    for (size_t r = 0; r < out.dim(); ++r) {
        for (size_t c = 0; c < out.dim(); ++c) {
            if (r != c) {
                out.rho(r, c) *= keep;
            }
        }
    }
    return out;
}

QuantumState apply_local_unitaries(const QuantumState &state, const std::vector<CMatrix> &unitaries) {
    if (unitaries.size() != static_cast<size_t>(state.n_qubits)) {
        throw ShapeError("need one single-qubit unitary per qubit");
    }
    std::vector<Complex> amps = state.amplitudes;
    const size_t dim = amps.size();
    for (int q = 0; q < state.n_qubits; ++q) {
        const CMatrix &u = unitaries[q];
        if (u.rows() != 2 || u.cols() != 2) {
            throw ShapeError("local unitary must be 2x2");
        }
        const size_t bit = size_t{1} << (state.n_qubits - 1 - q);
        for (size_t i = 0; i < dim; ++i) {
            if (i & bit) {
                continue;
            }
            Complex a0 = amps[i];
            Complex a1 = amps[i | bit];
            amps[i] = u(0, 0) * a0 + u(0, 1) * a1;
            amps[i | bit] = u(1, 0) * a0 + u(1, 1) * a1;
        }
    }
    return QuantumState{state.n_qubits, std::move(amps)};
}

QuantumState tensor_product(const QuantumState &a, const QuantumState &b) {
    std::vector<Complex> amps(a.dim() * b.dim());
    for (size_t i = 0; i < a.dim(); ++i) {
        for (size_t j = 0; j < b.dim(); ++j) {
            amps[i * b.dim() + j] = a.amplitudes[i] * b.amplitudes[j];
        }
    }
    return QuantumState{a.n_qubits + b.n_qubits, std::move(amps)};
}

QuantumState permute_qubits(const QuantumState &state, const std::vector<int> &destination) {
    const int n = state.n_qubits;
    if (destination.size() != static_cast<size_t>(n)) {
        throw ShapeError("permutation length must equal n_qubits");
    }
    std::vector<Complex> amps(state.dim());
    for (size_t i = 0; i < state.dim(); ++i) {
        size_t j = 0;
        for (int q = 0; q < n; ++q) {
            size_t bit = (i >> (n - 1 - q)) & 1u;
            j |= bit << (n - 1 - destination[q]);
        }
        amps[j] = state.amplitudes[i];
    }
    return QuantumState{n, std::move(amps)};
}

}  // namespace entclass
