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

#include "entclass/qsim/families.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>

#include "entclass/core/error.h"
#include "entclass/core/haar.h"

namespace entclass {

namespace {

constexpr double kPi = std::numbers::pi;

// Margins keep samples away from measure-zero boundaries where the class
// label would be numerically ill-defined.
constexpr double kGhzThetaMin = 0.2;
constexpr double kSchmidtAngleMin = 0.2;
constexpr double kWMinWeight = 0.05;
constexpr double kFourQubitModulusMin = 0.25;
constexpr double kFourQubitModulusMax = 1.0;

QuantumState random_qubit(RngStream &rng) {
    CMatrix u = haar_unitary(2, rng);
    return QuantumState{1, {u(0, 0), u(1, 0)}};
}

QuantumState random_product(int n_qubits, RngStream &rng) {
    QuantumState s = random_qubit(rng);
    for (int q = 1; q < n_qubits; ++q) {
        s = tensor_product(s, random_qubit(rng));
    }
    return s;
}

Complex random_parameter(RngStream &rng) {
    double r = rng.uniform(kFourQubitModulusMin, kFourQubitModulusMax);
    double phase = rng.uniform(0.0, 2.0 * kPi);
    return std::polar(r, phase);
}

// Single qubit `lone` is separable from the entangled pair on the other two.
QuantumState biseparable3(int lone, RngStream &rng) {
    QuantumState single = random_qubit(rng);
    QuantumState pair = canonical::schmidt2(rng.uniform(kSchmidtAngleMin, kPi / 4));
    QuantumState joint = tensor_product(single, pair);
    switch (lone) {
        case 0:
            return joint;
        case 1:
            return permute_qubits(joint, {1, 0, 2});
        default:
            return permute_qubits(joint, {2, 0, 1});
    }
}

QuantumState sample_w3(RngStream &rng) {
    // Dirichlet(1,1,1) = uniform on the simplex, via sorted uniforms.
    while (true) {
        double u1 = rng.uniform();
        double u2 = rng.uniform();
        double lo = std::min(u1, u2);
        double hi = std::max(u1, u2);
        double w[3] = {lo, hi - lo, 1.0 - hi};
        if (*std::min_element(w, w + 3) >= kWMinWeight) {
            return canonical::w3(w[0], w[1], w[2]);
        }
    }
}

struct FamilySpec {
    std::string description;
    std::function<QuantumState(RngStream &)> sample;
};

QuantumState sample_four(const std::string &name, RngStream &rng) {
    std::vector<Complex> params(4);
    for (Complex &p : params) {
        p = random_parameter(rng);
    }
    return canonical::four_qubit(name, params);
}

const std::map<std::string, FamilySpec> &three_qubit_specs() {
    static const std::map<std::string, FamilySpec> specs = {
        {"SEP", {"product of three Haar-random qubits", [](RngStream &r) { return random_product(3, r); }}},
        {"BISEP_A_BC",
         {"Haar qubit A (x) cos(a)|00>+sin(a)|11> on BC, a in [0.2, pi/4]",
          [](RngStream &r) { return biseparable3(0, r); }}},
        {"BISEP_B_AC",
         {"Haar qubit B (x) cos(a)|00>+sin(a)|11> on AC, a in [0.2, pi/4]",
          [](RngStream &r) { return biseparable3(1, r); }}},
        {"BISEP_C_AB",
         {"Haar qubit C (x) cos(a)|00>+sin(a)|11> on AB, a in [0.2, pi/4]",
          [](RngStream &r) { return biseparable3(2, r); }}},
        {"GHZ",
         {"cos(t)|000>+e^{ip}sin(t)|111>, t in [0.2, pi/2-0.2], p in [0, 2pi)",
          [](RngStream &r) {
              double theta = r.uniform(kGhzThetaMin, kPi / 2 - kGhzThetaMin);
              double phi = r.uniform(0.0, 2.0 * kPi);
              return canonical::ghz3(theta, phi);
          }}},
        {"W", {"a|001>+b|010>+c|100>, weights uniform on simplex, each >= 0.05", sample_w3}},
    };
    return specs;
}

const std::vector<std::string> &four_qubit_order() {
    static const std::vector<std::string> order = {"G_abcd",     "L_abc2",   "L_a2b2",   "L_ab3",
                                                   "L_a4",       "L_a2_0_3p1", "L_0_5p3", "L_0_7p1",
                                                   "L_0_3p1_0_3p1", "SEP"};
    return order;
}

const std::map<std::string, FamilySpec> &four_qubit_specs() {
    static const std::map<std::string, FamilySpec> specs = [] {
        std::map<std::string, FamilySpec> m;
        const std::string ranges = "complex parameters |z| in [0.25, 1], arg z in [0, 2pi)";
        for (const std::string &name : four_qubit_order()) {
            if (name == "SEP") {
                m[name] = {"product of four Haar-random qubits", [](RngStream &r) { return random_product(4, r); }};
            } else {
                m[name] = {"four-qubit SLOCC family " + name + "; " + ranges,
                           [name](RngStream &r) { return sample_four(name, r); }};
            }
        }
        return m;
    }();
    return specs;
}

const std::map<std::string, FamilySpec> &specs_for(int n_qubits) {
    if (n_qubits == 3) {
        return three_qubit_specs();
    }
    if (n_qubits == 4) {
        return four_qubit_specs();
    }
    throw DomainError("no SLOCC roster for " + std::to_string(n_qubits) + " qubits (supported: 3, 4)");
}

}  // namespace

std::string to_string(LocalUnitaryMode mode) { return mode == LocalUnitaryMode::kHaar ? "haar" : "none"; }

LocalUnitaryMode parse_local_unitary_mode(const std::string &text) {
    if (text == "haar") {
        return LocalUnitaryMode::kHaar;
    }
    if (text == "none") {
        return LocalUnitaryMode::kNone;
    }
    throw DomainError("unknown local unitary mode '" + text + "' (expected none|haar)");
}

std::vector<std::string> known_family_names(int n_qubits) {
    if (n_qubits == 3) {
        return {"SEP", "BISEP_A_BC", "BISEP_B_AC", "BISEP_C_AB", "GHZ", "W"};
    }
    if (n_qubits == 4) {
        return four_qubit_order();
    }
    throw DomainError("no SLOCC roster for " + std::to_string(n_qubits) + " qubits (supported: 3, 4)");
}

Roster default_roster(int n_qubits) { return roster_from_names(n_qubits, known_family_names(n_qubits)); }

Roster roster_from_names(int n_qubits, const std::vector<std::string> &names) {
    const auto &specs = specs_for(n_qubits);
    if (names.size() < 2) {
        throw RosterError("a roster needs at least two families");
    }
    Roster roster;
    std::set<std::string> seen;
    for (const std::string &name : names) {
        auto it = specs.find(name);
        if (it == specs.end()) {
            throw RosterError("unknown " + std::to_string(n_qubits) + "-qubit SLOCC family '" + name + "'");
        }
        if (!seen.insert(name).second) {
            throw RosterError("duplicate family '" + name + "' in roster");
        }
        roster.push_back(SloccFamily{static_cast<int>(roster.size()), name, n_qubits, it->second.description});
    }
    return roster;
}

std::vector<std::string> roster_names(const Roster &roster) {
    std::vector<std::string> names;
    for (const SloccFamily &f : roster) {
        names.push_back(f.name);
    }
    return names;
}

QuantumState sample_canonical_state(const SloccFamily &family, RngStream &rng) {
    const auto &specs = specs_for(family.n_qubits);
    auto it = specs.find(family.name);
    if (it == specs.end()) {
        throw RosterError("unknown " + std::to_string(family.n_qubits) + "-qubit SLOCC family '" + family.name + "'");
    }
    return it->second.sample(rng);
}

QuantumState sample_state(const SloccFamily &family, RngStream &rng, LocalUnitaryMode mode) {
    QuantumState s = sample_canonical_state(family, rng);
    if (mode == LocalUnitaryMode::kHaar) {
        std::vector<CMatrix> locals;
        for (int q = 0; q < s.n_qubits; ++q) {
            locals.push_back(haar_unitary(2, rng));
        }
        s = apply_local_unitaries(s, locals);
    }
    // Re-normalize away accumulated round-off.
    return QuantumState::normalized(s.n_qubits, std::move(s.amplitudes));
}

namespace canonical {

QuantumState ghz3(double theta, double phi) {
    std::vector<Complex> a(8);
    a[0] = std::cos(theta);
    a[7] = std::polar(std::sin(theta), phi);
    return QuantumState::normalized(3, std::move(a));
}

QuantumState w3(double w_a, double w_b, double w_c) {
    std::vector<Complex> a(8);
    a[0b001] = std::sqrt(w_a);
    a[0b010] = std::sqrt(w_b);
    a[0b100] = std::sqrt(w_c);
    return QuantumState::normalized(3, std::move(a));
}

QuantumState schmidt2(double alpha) {
    return QuantumState::normalized(2, {std::cos(alpha), 0.0, 0.0, std::sin(alpha)});
}

QuantumState four_qubit(const std::string &name, const std::vector<Complex> &p) {
    if (p.size() < 4) {
        throw DomainError("four_qubit: expected four parameters");
    }
    const Complex a = p[0], b = p[1], c = p[2], d = p[3];
    const Complex i(0.0, 1.0);
    std::vector<Complex> v(16);
    auto add = [&](unsigned basis, Complex amp) { v[basis] += amp; };
    if (name == "G_abcd") {
        add(0b0000, (a + d) / 2.0), add(0b1111, (a + d) / 2.0);
        add(0b0011, (a - d) / 2.0), add(0b1100, (a - d) / 2.0);
        add(0b0101, (b + c) / 2.0), add(0b1010, (b + c) / 2.0);
        add(0b0110, (b - c) / 2.0), add(0b1001, (b - c) / 2.0);
    } else if (name == "L_abc2") {
        add(0b0000, (a + b) / 2.0), add(0b1111, (a + b) / 2.0);
        add(0b0011, (a - b) / 2.0), add(0b1100, (a - b) / 2.0);
        add(0b0101, c), add(0b1010, c);
        add(0b0110, 1.0);
    } else if (name == "L_a2b2") {
        add(0b0000, a), add(0b1111, a);
        add(0b0101, b), add(0b1010, b);
        add(0b0110, 1.0), add(0b0011, 1.0);
    } else if (name == "L_ab3") {
        add(0b0000, a), add(0b1111, a);
        add(0b0101, (a + b) / 2.0), add(0b1010, (a + b) / 2.0);
        add(0b0110, (a - b) / 2.0), add(0b1001, (a - b) / 2.0);
        const Complex t = i / std::sqrt(2.0);
        add(0b0001, t), add(0b0010, t), add(0b0111, t), add(0b1011, t);
    } else if (name == "L_a4") {
        add(0b0000, a), add(0b0101, a), add(0b1010, a), add(0b1111, a);
        add(0b0001, i), add(0b0110, 1.0), add(0b1011, -i);
    } else if (name == "L_a2_0_3p1") {
        add(0b0000, a), add(0b1111, a);
        add(0b0011, 1.0), add(0b0101, 1.0), add(0b0110, 1.0);
    } else if (name == "L_0_5p3") {
        add(0b0000, 1.0), add(0b0101, 1.0), add(0b1000, 1.0), add(0b1110, 1.0);
    } else if (name == "L_0_7p1") {
        add(0b0000, 1.0), add(0b1011, 1.0), add(0b1101, 1.0), add(0b1110, 1.0);
    } else if (name == "L_0_3p1_0_3p1") {
        add(0b0000, 1.0), add(0b0111, 1.0);
    } else {
        throw RosterError("unknown four-qubit canonical family '" + name + "'");
    }
    return QuantumState::normalized(4, std::move(v));
}

}  // namespace canonical

}  // namespace entclass
