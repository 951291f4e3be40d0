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

#include "entclass/qsim/measurement.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "entclass/core/error.h"

namespace entclass {

namespace {

constexpr double kNegativeClamp = 1e-10;
constexpr double kProbabilitySumTol = 1e-9;

// Eigenvectors of X, Y, Z; index 0 is the +1 eigenvector.
std::vector<std::vector<Complex>> pauli_eigenbasis(int pauli) {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    switch (pauli) {
        case 0:
            return {{s, s}, {s, -s}};
        case 1:
            return {{s, s * i}, {s, -s * i}};
        default:
            return {{1.0, 0.0}, {0.0, 1.0}};
    }
}

}  // namespace

std::string to_string(MeasurementScheme) { return "LOCAL_PAULI"; }

MeasurementScheme parse_scheme(const std::string &text) {
    if (text == "LOCAL_PAULI" || text == "local_pauli") {
        return MeasurementScheme::kLocalPauli;
    }
    throw DomainError("unknown measurement scheme '" + text + "' (supported: LOCAL_PAULI)");
}

size_t BasisSet::setting_index(const std::string &label) const {
    for (size_t i = 0; i < settings.size(); ++i) {
        if (settings[i].label == label) {
            return i;
        }
    }
    throw DomainError("no measurement setting labelled '" + label + "'");
}

BasisSet build_basis_set(int n_qubits, MeasurementScheme scheme) {
    if (n_qubits < 1 || n_qubits > 8) {
        throw DomainError("build_basis_set: n_qubits must be in [1, 8]");
    }
    BasisSet out{n_qubits, scheme, {}};
    size_t n_settings = 1;
    for (int q = 0; q < n_qubits; ++q) {
        n_settings *= 3;
    }
    const size_t dim = size_t{1} << n_qubits;
    const char letters[3] = {'X', 'Y', 'Z'};
    for (size_t s = 0; s < n_settings; ++s) {
        std::vector<int> paulis(n_qubits);
        size_t rest = s;
        for (int q = n_qubits - 1; q >= 0; --q) {
            paulis[q] = static_cast<int>(rest % 3);
            rest /= 3;
        }
        MeasurementSetting setting;
        for (int q = 0; q < n_qubits; ++q) {
            setting.label += letters[paulis[q]];
        }
        for (size_t k = 0; k < dim; ++k) {
            std::vector<Complex> v{1.0};
            for (int q = 0; q < n_qubits; ++q) {
                const auto basis = pauli_eigenbasis(paulis[q]);
                const auto &e = basis[(k >> (n_qubits - 1 - q)) & 1u];
                std::vector<Complex> next(v.size() * 2);
                for (size_t j = 0; j < v.size(); ++j) {
                    next[2 * j] = v[j] * e[0];
                    next[2 * j + 1] = v[j] * e[1];
                }
                v = std::move(next);
            }
            setting.projectors.push_back(std::move(v));
        }
        out.settings.push_back(std::move(setting));
    }
    return out;
}

NoiseConfig NoiseConfig::from_codes(double epsilon, int64_t shots_code) {
    NoiseConfig n;
    n.dephasing_epsilon = epsilon;
    if (shots_code == 0 || shots_code < -1) {
        throw DomainError("shots must be positive or -1 (EXACT)");
    }
    if (shots_code > 0) {
        n.shots = static_cast<uint64_t>(shots_code);
    }
    return n;
}

std::string NoiseConfig::describe() const {
    std::ostringstream out;
    out << "eps=" << dephasing_epsilon << ";shots=" << (shots ? std::to_string(*shots) : std::string("EXACT"));
    return out.str();
}

std::vector<double> born_probabilities(const DensityMatrix &rho, const MeasurementSetting &setting) {
    const size_t dim = rho.dim();
    if (setting.projectors.size() != dim) {
        throw ShapeError("measurement setting has " + std::to_string(setting.projectors.size()) +
                         " outcomes but the state has dimension " + std::to_string(dim));
    }
    std::vector<double> probs(dim);
    std::vector<Complex> rho_phi(dim);
    for (size_t k = 0; k < dim; ++k) {
        const auto &phi = setting.projectors[k];
        if (phi.size() != dim) {
            throw ShapeError("projector dimension mismatch");
        }
        for (size_t r = 0; r < dim; ++r) {
            Complex acc = 0;
            for (size_t c = 0; c < dim; ++c) {
                acc += rho.rho(r, c) * phi[c];
            }
            rho_phi[r] = acc;
        }
        Complex p = 0;
        for (size_t r = 0; r < dim; ++r) {
            p += std::conj(phi[r]) * rho_phi[r];
        }
        double value = p.real();
        if (value < 0) {
            if (value < -kNegativeClamp) {
                throw NumericError("Born probability " + std::to_string(value) + " is negative beyond round-off");
            }
            value = 0;
        }
        probs[k] = value;
    }
    return probs;
}

std::vector<double> sample_frequencies(const std::vector<double> &probs, std::optional<uint64_t> shots,
                                       RngStream &rng) {
    if (!shots) {
        return probs;
    }
    if (*shots == 0) {
        throw DomainError("shots must be >= 1");
    }
    double total = 0;
    for (double p : probs) {
        total += p;
    }
    if (std::abs(total - 1.0) > kProbabilitySumTol) {
        throw DomainError("probabilities must sum to 1 (got " + std::to_string(total) + ")");
    }
    std::vector<double> cdf(probs.size());
    double running = 0;
    for (size_t k = 0; k < probs.size(); ++k) {
        running += probs[k];
        cdf[k] = running;
    }
    std::vector<uint64_t> counts(probs.size(), 0);
    for (uint64_t s = 0; s < *shots; ++s) {
        double u = rng.uniform() * running;
        size_t k = static_cast<size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        // Never land on a zero-probability outcome at the end of the table.
        while (k > 0 && (k >= probs.size() || probs[k] == 0.0)) {
            --k;
        }
        ++counts[k];
    }
    std::vector<double> freq(probs.size());
    for (size_t k = 0; k < probs.size(); ++k) {
        freq[k] = static_cast<double>(counts[k]) / static_cast<double>(*shots);
    }
    return freq;
}

std::vector<double> encode_features(const DensityMatrix &rho, const BasisSet &bases, const NoiseConfig &noise,
                                    RngStream &rng) {
    if (rho.n_qubits != bases.n_qubits) {
        throw ShapeError("density matrix has " + std::to_string(rho.n_qubits) + " qubits, basis set has " +
                         std::to_string(bases.n_qubits));
    }
    const DensityMatrix noisy =
        noise.dephasing_epsilon != 0.0 ? apply_dephasing(rho, noise.dephasing_epsilon) : rho;
    std::vector<double> features;
    features.reserve(bases.feature_length());
    for (const MeasurementSetting &setting : bases.settings) {
        auto block = sample_frequencies(born_probabilities(noisy, setting), noise.shots, rng);
        features.insert(features.end(), block.begin(), block.end());
    }
    return features;
}

}  // namespace entclass
