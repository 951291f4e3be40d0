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

#ifndef ENTCLASS_QSIM_MEASUREMENT_H
#define ENTCLASS_QSIM_MEASUREMENT_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entclass/core/rng.h"
#include "entclass/qsim/state.h"

namespace entclass {

enum class MeasurementScheme {
    /// All 3^n products of single-qubit X, Y, Z eigenbases.
    kLocalPauli,
};

std::string to_string(MeasurementScheme scheme);
MeasurementScheme parse_scheme(const std::string &text);

/// One projective measurement: 2^n orthonormal vectors, outcome k <-> projectors[k].
struct MeasurementSetting {
    std::string label;
    std::vector<std::vector<Complex>> projectors;
};

/// Ordered measurement settings; fixes the feature-vector layout.
///
/// LOCAL_PAULI layout: setting index is the base-3 number whose digits
/// (qubit 0 most significant) pick X=0, Y=1, Z=2. Within a setting, outcome
/// index is the base-2 number whose digits (qubit 0 most significant) pick the
/// +1 eigenvector (0) or the -1 eigenvector (1).
struct BasisSet {
    int n_qubits = 0;
    MeasurementScheme scheme = MeasurementScheme::kLocalPauli;
    std::vector<MeasurementSetting> settings;

    size_t outcomes_per_setting() const { return size_t{1} << n_qubits; }
    /// M: total number of outcomes across all settings.
    size_t feature_length() const { return settings.size() * outcomes_per_setting(); }
    /// Index of the setting with this label (e.g. "ZZZ"); throws if absent.
    size_t setting_index(const std::string &label) const;
};

BasisSet build_basis_set(int n_qubits, MeasurementScheme scheme = MeasurementScheme::kLocalPauli);

/// Finite-shot and dephasing noise applied during feature encoding.
struct NoiseConfig {
    double dephasing_epsilon = 0.0;
    /// nullopt = EXACT (infinite shots).
    std::optional<uint64_t> shots;

    /// -1 for EXACT, otherwise the shot count.
    int64_t shots_code() const { return shots ? static_cast<int64_t>(*shots) : -1; }
    static NoiseConfig from_codes(double epsilon, int64_t shots_code);
    std::string describe() const;
    bool operator==(const NoiseConfig &) const = default;
};

/// p_k = <phi_k| rho |phi_k>. Negatives down to -1e-10 are clamped to 0.
std::vector<double> born_probabilities(const DensityMatrix &rho, const MeasurementSetting &setting);

/// Multinomial draw of `shots` outcomes returned as frequencies; EXACT returns probs.
std::vector<double> sample_frequencies(const std::vector<double> &probs, std::optional<uint64_t> shots,
                                       RngStream &rng);

/// Dephasing, then per-setting Born probabilities and shot sampling,
/// concatenated in basis-set order. Length = bases.feature_length().
std::vector<double> encode_features(const DensityMatrix &rho, const BasisSet &bases, const NoiseConfig &noise,
                                    RngStream &rng);

}  // namespace entclass

#endif
