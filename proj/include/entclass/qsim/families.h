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

#ifndef ENTCLASS_QSIM_FAMILIES_H
#define ENTCLASS_QSIM_FAMILIES_H

#include <string>
#include <vector>

#include "entclass/core/rng.h"
#include "entclass/qsim/state.h"

namespace entclass {

/// One SLOCC equivalence family used as a classification label.
struct SloccFamily {
    int label_id = 0;
    std::string name;
    int n_qubits = 0;
    /// Human-readable canonical form and parameter ranges.
    std::string description;
};

using Roster = std::vector<SloccFamily>;

/// How sampled canonical representatives are dressed before measurement.
enum class LocalUnitaryMode {
    /// Canonical form only. Product factors of separable parts are still random.
    kNone,
    /// Independent Haar-random single-qubit unitary on every qubit.
    kHaar,
};

std::string to_string(LocalUnitaryMode mode);
LocalUnitaryMode parse_local_unitary_mode(const std::string &text);

/// Family names with a canonical-form sampler for n qubits (3 or 4).
std::vector<std::string> known_family_names(int n_qubits);

/// Default rosters: 6 families for 3 qubits, 10 for 4 qubits.
Roster default_roster(int n_qubits);

/// Roster from an ordered list of family names; label ids follow list order.
Roster roster_from_names(int n_qubits, const std::vector<std::string> &names);

std::vector<std::string> roster_names(const Roster &roster);

/// Random member of the family's canonical form (no local unitary layer).
QuantumState sample_canonical_state(const SloccFamily &family, RngStream &rng);

/// Random member of the family: canonical form, then the local unitary layer.
QuantumState sample_state(const SloccFamily &family, RngStream &rng, LocalUnitaryMode mode = LocalUnitaryMode::kHaar);

/// Canonical representatives with explicit parameters.
namespace canonical {

/// cos(theta)|000> + e^{i phi} sin(theta)|111>.
QuantumState ghz3(double theta, double phi);
/// a|001> + b|010> + c|100> with |a|^2, |b|^2, |c|^2 = weights (normalized).
QuantumState w3(double w_a, double w_b, double w_c);
/// cos(alpha)|00> + sin(alpha)|11>.
QuantumState schmidt2(double alpha);

/// Four-qubit family representatives, parameters in the order they appear in
/// the family name (a, b, c, d). Unused trailing parameters are ignored.
QuantumState four_qubit(const std::string &name, const std::vector<Complex> &params);

}  // namespace canonical

}  // namespace entclass

#endif
