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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "entclass/core/error.h"
#include "entclass/core/haar.h"
#include "entclass/core/rng.h"
#include "entclass/qsim/families.h"
#include "entclass/qsim/measurement.h"
#include "entclass/qsim/state.h"
#include "oracles.h"

using namespace entclass;

namespace {

const double kPi = std::numbers::pi;

QuantumState ghz() { return canonical::ghz3(kPi / 4, 0); }

std::vector<double> block(const std::vector<double> &features, const BasisSet &bases, const std::string &label) {
    size_t s = bases.setting_index(label);
    size_t d = bases.outcomes_per_setting();
    return {features.begin() + s * d, features.begin() + (s + 1) * d};
}

std::vector<int> axes_of(const std::string &label) {
    std::vector<int> axes;
    for (char c : label) axes.push_back(c == 'X' ? 0 : c == 'Y' ? 1 : 2);
    return axes;
}

std::vector<CMatrix> random_locals(int n, RngStream &rng) {
    std::vector<CMatrix> u;
    for (int q = 0; q < n; ++q) u.push_back(haar_unitary(2, rng));
    return u;
}

}  // namespace

// ---------------------------------------------------------------- states

TEST(States, GhzCanonicalRepresentative) {
    QuantumState s = ghz();
    const double r = 1 / std::sqrt(2.0);
    for (size_t i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(s.amplitudes[i] - Complex(i == 0 || i == 7 ? r : 0)), 0, 1e-15);
}

TEST(States, WCanonicalRepresentative) {
    QuantumState s = canonical::w3(1, 1, 1);
    const double r = 1 / std::sqrt(3.0);
    for (size_t i = 0; i < 8; ++i) {
        bool weight_one = i == 1 || i == 2 || i == 4;
        EXPECT_NEAR(std::abs(s.amplitudes[i] - Complex(weight_one ? r : 0)), 0, 1e-15);
    }
}

TEST(States, FromAmplitudesValidates) {
    EXPECT_THROW(QuantumState::from_amplitudes(2, {1, 0, 0}), ShapeError);
    EXPECT_THROW(QuantumState::from_amplitudes(1, {1, 1}), DomainError);
    EXPECT_THROW(QuantumState::normalized(1, {0, 0}), DomainError);
    EXPECT_NEAR(QuantumState::normalized(1, {3, 4}).norm_squared(), 1, 1e-15);
}

TEST(States, ToDensityExamples) {
    DensityMatrix z = to_density(QuantumState::from_amplitudes(1, {1, 0}));
    EXPECT_EQ(z.rho, CMatrix(2, 2, {1, 0, 0, 0}));
    const double r = 1 / std::sqrt(2.0);
    DensityMatrix plus = to_density(QuantumState::from_amplitudes(1, {r, r}));
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) EXPECT_NEAR(plus.rho(i, j).real(), 0.5, 1e-15);
}

TEST(States, PurityOfRandomPureStatesIsOne) {
    for (const auto &family : default_roster(4)) {
        RngStream rng(11, 0);
        DensityMatrix rho = to_density(sample_state(family, rng));
        EXPECT_NEAR(rho.purity(), 1, 1e-10) << family.name;
        EXPECT_NO_THROW(rho.validate());
    }
}

TEST(States, TensorProductAndPermutation) {
    QuantumState a = QuantumState::from_amplitudes(1, {0, 1});
    QuantumState b = canonical::schmidt2(kPi / 4);
    QuantumState ab = tensor_product(a, b);
    EXPECT_EQ(ab.n_qubits, 3);
    EXPECT_NEAR(std::abs(ab.amplitudes[4]), 1 / std::sqrt(2.0), 1e-15);  // |100>
    EXPECT_NEAR(std::abs(ab.amplitudes[7]), 1 / std::sqrt(2.0), 1e-15);  // |111>
    // qubit 0 -> 2: |1>_A sits on the last qubit
    QuantumState moved = permute_qubits(ab, {2, 0, 1});
    EXPECT_NEAR(std::abs(moved.amplitudes[1]), 1 / std::sqrt(2.0), 1e-15);  // |001>
    EXPECT_NEAR(std::abs(moved.amplitudes[7]), 1 / std::sqrt(2.0), 1e-15);
}

// ---------------------------------------------------------------- dephasing

TEST(Dephasing, ZeroIsIdentity) {
    DensityMatrix rho = to_density(ghz());
    EXPECT_EQ(apply_dephasing(rho, 0.0).rho, rho.rho);
}

TEST(Dephasing, FullOnGhzIsClassicalMixture) {
    DensityMatrix out = apply_dephasing(to_density(ghz()), 1.0);
    for (size_t i = 0; i < 8; ++i)
        for (size_t j = 0; j < 8; ++j) {
            double expect = (i == j && (i == 0 || i == 7)) ? 0.5 : 0.0;
            EXPECT_NEAR(std::abs(out.rho(i, j) - Complex(expect)), 0, 1e-15);
        }
}

TEST(Dephasing, TenPercentScalesCoherence) {
    DensityMatrix out = apply_dephasing(to_density(ghz()), 0.1);
    EXPECT_NEAR(out.rho(0, 7).real(), 0.45, 1e-15);
    EXPECT_NEAR(out.rho(7, 0).real(), 0.45, 1e-15);
    EXPECT_NEAR(out.rho(0, 0).real(), 0.5, 1e-15);
}

TEST(Dephasing, RejectsOutOfRangeEpsilon) {
    DensityMatrix rho = to_density(ghz());
    EXPECT_THROW(apply_dephasing(rho, -0.01), DomainError);
    EXPECT_THROW(apply_dephasing(rho, 1.01), DomainError);
}

TEST(Dephasing, PreservesTraceHermiticityAndIsIdempotentAtOne) {
    for (uint64_t s = 0; s < 30; ++s) {
        RngStream rng(s, 5);
        auto roster = default_roster(4);
        DensityMatrix rho = to_density(sample_state(roster[s % roster.size()], rng));
        double eps = rng.uniform();
        DensityMatrix out = apply_dephasing(rho, eps);
        EXPECT_EQ(out.rho.trace(), rho.rho.trace());
        EXPECT_LT(out.rho.max_abs_diff(out.rho.adjoint()), 1e-12);
        EXPECT_NO_THROW(out.validate());
        for (size_t i = 0; i < rho.dim(); ++i)
            for (size_t j = 0; j < rho.dim(); ++j) {
                Complex expect = i == j ? rho.rho(i, j) : (1 - eps) * rho.rho(i, j);
                EXPECT_LT(std::abs(out.rho(i, j) - expect), 1e-15);
            }
        DensityMatrix once = apply_dephasing(rho, 1.0);
        EXPECT_EQ(apply_dephasing(once, 1.0).rho, once.rho);
    }
}

// ---------------------------------------------------------------- basis sets

TEST(Basis, FeatureLengths) {
    EXPECT_EQ(build_basis_set(3).feature_length(), 216u);
    EXPECT_EQ(build_basis_set(4).feature_length(), 1296u);
    EXPECT_EQ(build_basis_set(3).settings.size(), 27u);
}

TEST(Basis, SettingOrderIsBaseThreeQubitZeroMostSignificant) {
    BasisSet b = build_basis_set(3);
    EXPECT_EQ(b.settings[0].label, "XXX");
    EXPECT_EQ(b.settings[1].label, "XXY");
    EXPECT_EQ(b.settings[3].label, "XYX");
    EXPECT_EQ(b.settings[9].label, "YXX");
    EXPECT_EQ(b.settings[26].label, "ZZZ");
    EXPECT_EQ(b.setting_index("ZZZ"), 26u);
    EXPECT_THROW(b.setting_index("QQQ"), DomainError);
}

TEST(Basis, ProjectorsMatchPauliEigenvectors) {
    BasisSet b = build_basis_set(3);
    for (const auto &setting : b.settings) {
        std::vector<int> axes = axes_of(setting.label);
        for (size_t k = 0; k < 8; ++k) {
            std::vector<Complex> expect = {1.0};
            for (int q = 0; q < 3; ++q) {
                auto v = oracle::pauli_eigenvector(axes[q], static_cast<int>((k >> (2 - q)) & 1u));
                std::vector<Complex> next;
                for (auto a : expect)
                    for (auto e : v) next.push_back(a * e);
                expect = next;
            }
            for (size_t i = 0; i < 8; ++i) EXPECT_LT(std::abs(setting.projectors[k][i] - expect[i]), 1e-15);
        }
    }
}

TEST(Basis, CompletenessOfEverySetting) {
    for (int n : {3, 4}) {
        BasisSet b = build_basis_set(n);
        const size_t d = b.outcomes_per_setting();
        for (const auto &setting : b.settings) {
            CMatrix sum(d, d);
            for (const auto &phi : setting.projectors) {
                CMatrix p = CMatrix::outer(phi, phi);
                for (size_t i = 0; i < d; ++i)
                    for (size_t j = 0; j < d; ++j) sum(i, j) += p(i, j);
            }
            EXPECT_LT(sum.max_abs_diff(CMatrix::identity(d)), 1e-12) << setting.label;
        }
    }
}

TEST(Basis, UnknownSchemeRejected) { EXPECT_THROW(parse_scheme("MUB_FULL"), DomainError); }

// ---------------------------------------------------------------- Born rule

TEST(Born, GhzZZZ) {
    BasisSet b = build_basis_set(3);
    auto p = born_probabilities(to_density(ghz()), b.settings[b.setting_index("ZZZ")]);
    for (size_t k = 0; k < 8; ++k) EXPECT_NEAR(p[k], (k == 0 || k == 7) ? 0.5 : 0.0, 1e-10);
}

TEST(Born, WZZZ) {
    BasisSet b = build_basis_set(3);
    auto p = born_probabilities(to_density(canonical::w3(1, 1, 1)), b.settings[b.setting_index("ZZZ")]);
    for (size_t k = 0; k < 8; ++k) EXPECT_NEAR(p[k], (k == 1 || k == 2 || k == 4) ? 1.0 / 3 : 0.0, 1e-10);
}

TEST(Born, GhzXXXEvenParity) {
    BasisSet b = build_basis_set(3);
    auto p = born_probabilities(to_density(ghz()), b.settings[b.setting_index("XXX")]);
    for (size_t k = 0; k < 8; ++k) {
        bool even = std::popcount(k) % 2 == 0;
        EXPECT_NEAR(p[k], even ? 0.25 : 0.0, 1e-10) << k;
    }
}

TEST(Born, MatchesInnerProductOracleOnRandomStates) {
    for (int n : {3, 4}) {
        BasisSet b = build_basis_set(n);
        for (uint64_t s = 0; s < 5; ++s) {
            RngStream rng(s, 99);
            auto roster = default_roster(n);
            QuantumState psi = sample_state(roster[s % roster.size()], rng);
            DensityMatrix rho = to_density(psi);
            for (const auto &setting : b.settings) {
                auto p = born_probabilities(rho, setting);
                auto q = oracle::pure_pauli_probabilities(psi.amplitudes, axes_of(setting.label));
                for (size_t k = 0; k < p.size(); ++k) EXPECT_NEAR(p[k], q[k], 1e-12);
            }
        }
    }
}

TEST(Born, NegativePopulationBeyondThresholdIsAnError) {
    BasisSet b = build_basis_set(3);
    DensityMatrix bad{3, CMatrix::identity(8)};
    bad.rho(0, 0) = -0.01;
    bad.rho(1, 1) = 1.01 - 6.0 / 8;  // keep unit trace loosely; only the sign matters
    EXPECT_THROW(born_probabilities(bad, b.settings[b.setting_index("ZZZ")]), NumericError);
}

TEST(Born, TinyNegativeIsClampedToZero) {
    BasisSet b = build_basis_set(3);
    DensityMatrix rho{3, CMatrix(8, 8)};
    rho.rho(0, 0) = 1.0 + 1e-12;
    rho.rho(1, 1) = -1e-12;
    auto p = born_probabilities(rho, b.settings[b.setting_index("ZZZ")]);
    EXPECT_EQ(p[1], 0.0);
}

TEST(Born, DimensionMismatch) {
    BasisSet b = build_basis_set(4);
    EXPECT_THROW(born_probabilities(to_density(ghz()), b.settings[0]), ShapeError);
}

TEST(Born, ProductStatesFactorize) {
    BasisSet b = build_basis_set(3);
    for (uint64_t s = 0; s < 10; ++s) {
        RngStream rng(s, 3);
        std::vector<QuantumState> q;
        for (int i = 0; i < 3; ++i) {
            CMatrix u = haar_unitary(2, rng);
            q.push_back(QuantumState::from_amplitudes(1, {u(0, 0), u(1, 0)}));
        }
        QuantumState psi = tensor_product(tensor_product(q[0], q[1]), q[2]);
        DensityMatrix rho = to_density(psi);
        for (const auto &setting : b.settings) {
            auto joint = born_probabilities(rho, setting);
            auto axes = axes_of(setting.label);
            std::vector<std::vector<double>> marg;
            for (int i = 0; i < 3; ++i) marg.push_back(oracle::pure_pauli_probabilities(q[i].amplitudes, {axes[i]}));
            for (size_t k = 0; k < 8; ++k) {
                double prod = marg[0][(k >> 2) & 1] * marg[1][(k >> 1) & 1] * marg[2][k & 1];
                EXPECT_NEAR(joint[k], prod, 1e-9);
            }
        }
    }
}

// ---------------------------------------------------------------- shots

TEST(Shots, ExactReturnsInput) {
    RngStream rng(0, 0);
    std::vector<double> p = {0.1, 0.2, 0.3, 0.4};
    EXPECT_EQ(sample_frequencies(p, std::nullopt, rng), p);
}

TEST(Shots, DegenerateDistribution) {
    RngStream rng(0, 0);
    std::vector<double> p = {1, 0, 0, 0};
    for (uint64_t shots : {1ull, 7ull, 1000ull}) EXPECT_EQ(sample_frequencies(p, shots, rng), p);
}

TEST(Shots, FrequenciesSumToOneAndAreMultiplesOfOneOverShots) {
    RngStream rng(4, 4);
    std::vector<double> p = {0.1, 0.2, 0.3, 0.4};
    for (int rep = 0; rep < 100; ++rep) {
        auto f = sample_frequencies(p, 37, rng);
        double s = 0;
        for (double v : f) {
            s += v;
            EXPECT_NEAR(v * 37, std::round(v * 37), 1e-9);
        }
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(Shots, MonteCarloMean) {
    RngStream rng(123, 0);
    double sum = 0;
    for (int rep = 0; rep < 1000; ++rep) sum += sample_frequencies({0.5, 0.5}, 10000, rng)[0];
    EXPECT_NEAR(sum / 1000, 0.5, 0.005);
}

TEST(Shots, NoiseCodes) {
    EXPECT_FALSE(NoiseConfig::from_codes(0, -1).shots.has_value());
    EXPECT_EQ(NoiseConfig::from_codes(0.1, 100).shots_code(), 100);
    EXPECT_THROW(NoiseConfig::from_codes(0, 0), DomainError);
    EXPECT_THROW(NoiseConfig::from_codes(0, -2), DomainError);
}

// ---------------------------------------------------------------- encoding

TEST(Encode, NoiselessGhzZZZEntries) {
    BasisSet b = build_basis_set(3);
    RngStream rng(0, 0);
    auto f = encode_features(to_density(ghz()), b, {}, rng);
    ASSERT_EQ(f.size(), 216u);
    size_t z = b.setting_index("ZZZ") * 8;
    EXPECT_NEAR(f[z + 0], 0.5, 1e-12);
    EXPECT_NEAR(f[z + 7], 0.5, 1e-12);
}

TEST(Encode, FullDephasingMakesXXXUniform) {
    BasisSet b = build_basis_set(3);
    RngStream rng(0, 0);
    auto f = encode_features(to_density(ghz()), b, NoiseConfig::from_codes(1.0, -1), rng);
    for (double v : block(f, b, "XXX")) EXPECT_NEAR(v, 0.125, 1e-12);
}

TEST(Encode, BlocksAreProbabilityVectors) {
    for (int n : {3, 4}) {
        BasisSet b = build_basis_set(n);
        auto roster = default_roster(n);
        for (uint64_t s = 0; s < 10; ++s) {
            RngStream rng(s, 8);
            auto noise = NoiseConfig::from_codes(rng.uniform(), s % 2 ? 100 : -1);
            auto f = encode_features(to_density(sample_state(roster[s % roster.size()], rng)), b, noise, rng);
            ASSERT_EQ(f.size(), b.feature_length());
            size_t d = b.outcomes_per_setting();
            for (size_t k = 0; k < b.settings.size(); ++k) {
                double sum = 0;
                for (size_t i = 0; i < d; ++i) {
                    double v = f[k * d + i];
                    EXPECT_GE(v, 0.0);
                    EXPECT_LE(v, 1.0);
                    sum += v;
                }
                EXPECT_NEAR(sum, 1.0, 1e-9);
            }
        }
    }
}

TEST(Encode, DephasingAppliedBeforeMeasurement) {
    BasisSet b = build_basis_set(3);
    RngStream r1(1, 1), r2(1, 1);
    DensityMatrix rho = to_density(canonical::w3(1, 2, 3));
    auto direct = encode_features(apply_dephasing(rho, 0.3), b, {}, r1);
    auto composed = encode_features(rho, b, NoiseConfig::from_codes(0.3, -1), r2);
    for (size_t i = 0; i < direct.size(); ++i) EXPECT_NEAR(direct[i], composed[i], 1e-15);
}

// ---------------------------------------------------------------- families

TEST(Families, RosterSizesAndOrder) {
    auto three = default_roster(3);
    ASSERT_EQ(three.size(), 6u);
    EXPECT_EQ(roster_names(three), (std::vector<std::string>{"SEP", "BISEP_A_BC", "BISEP_B_AC", "BISEP_C_AB", "GHZ", "W"}));
    auto four = default_roster(4);
    ASSERT_EQ(four.size(), 10u);
    for (size_t i = 0; i < four.size(); ++i) EXPECT_EQ(four[i].label_id, static_cast<int>(i));
    EXPECT_EQ(four.back().name, "SEP");
}

TEST(Families, RosterErrors) {
    EXPECT_THROW(roster_from_names(3, {"GHZ", "NOPE"}), RosterError);
    EXPECT_THROW(roster_from_names(3, {"GHZ", "GHZ"}), RosterError);
    EXPECT_THROW(roster_from_names(3, {"GHZ"}), RosterError);
    EXPECT_THROW(default_roster(5), DomainError);
    SloccFamily bogus{0, "G_abcd", 3, ""};
    RngStream rng(0, 0);
    EXPECT_THROW(sample_state(bogus, rng), RosterError);
}

TEST(Families, SubsetRosterRelabels) {
    auto r = roster_from_names(3, {"W", "GHZ"});
    EXPECT_EQ(r[0].name, "W");
    EXPECT_EQ(r[0].label_id, 0);
    EXPECT_EQ(r[1].label_id, 1);
}

TEST(Families, SeparableHasRankOneEverywhere) {
    RngStream rng(6, 6);
    SloccFamily sep = default_roster(3)[0];
    for (int i = 0; i < 50; ++i) {
        QuantumState s = sample_state(sep, rng);
        for (int q = 0; q < 3; ++q) EXPECT_LT(oracle::schmidt_coefficients(s.amplitudes, 3, {q})(1), 1e-10);
    }
}

class ThreeQubitClassification : public ::testing::TestWithParam<LocalUnitaryMode> {};

TEST_P(ThreeQubitClassification, OracleAgreesWithLabel) {
    for (const auto &family : default_roster(3)) {
        RngStream rng(family.label_id, 42);
        for (int i = 0; i < 200; ++i) {
            QuantumState s = sample_state(family, rng, GetParam());
            EXPECT_NEAR(s.norm_squared(), 1, 1e-12);
            ASSERT_EQ(oracle::classify3(s.amplitudes), family.name) << "sample " << i;
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Modes, ThreeQubitClassification,
                         ::testing::Values(LocalUnitaryMode::kNone, LocalUnitaryMode::kHaar));

TEST(Families, ExtraLocalUnitariesPreserveClassDecision) {
    for (int n : {3, 4}) {
        for (const auto &family : default_roster(n)) {
            RngStream rng(family.label_id, 17);
            for (int i = 0; i < 30; ++i) {
                QuantumState s = sample_state(family, rng, LocalUnitaryMode::kHaar);
                QuantumState t = apply_local_unitaries(s, random_locals(n, rng));
                EXPECT_EQ(oracle::rank_signature(s.amplitudes, n), oracle::rank_signature(t.amplitudes, n))
                    << family.name;
                if (n == 3) {
                    EXPECT_EQ(oracle::classify3(s.amplitudes), oracle::classify3(t.amplitudes));
                }
            }
        }
    }
}

TEST(Families, FourQubitSignatures) {
    auto four = default_roster(4);
    RngStream rng(9, 9);
    for (const auto &family : four) {
        auto sig = oracle::rank_signature(sample_state(family, rng).amplitudes, 4);
        if (family.name == "SEP") {
            for (int r : sig) EXPECT_EQ(r, 1);
        } else if (family.name == "G_abcd") {
            // {0}, {0,1}, {0,2}, {0,1,2}, {0,3}, {0,1,3}, {0,2,3}: generic ranks
            EXPECT_EQ(sig, (std::vector<int>{2, 4, 4, 2, 4, 2, 2}));
        }
    }
}

TEST(Families, LocalUnitaryModeParsing) {
    EXPECT_EQ(parse_local_unitary_mode("none"), LocalUnitaryMode::kNone);
    EXPECT_EQ(parse_local_unitary_mode("haar"), LocalUnitaryMode::kHaar);
    EXPECT_EQ(to_string(LocalUnitaryMode::kHaar), "haar");
    EXPECT_THROW(parse_local_unitary_mode("sometimes"), DomainError);
}

TEST(Families, SamplingIsDeterministicPerStream) {
    for (const auto &family : default_roster(4)) {
        RngStream a(5, 1), b(5, 1);
        EXPECT_EQ(sample_state(family, a).amplitudes, sample_state(family, b).amplitudes);
    }
}
