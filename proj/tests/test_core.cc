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

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <set>

#include "entclass/core/binary_io.h"
#include "entclass/core/cmatrix.h"
#include "entclass/core/error.h"
#include "entclass/core/haar.h"
#include "entclass/core/rng.h"
#include "entclass/core/tensor.h"

using namespace entclass;

namespace {

CMatrix pauli_x() { return CMatrix(2, 2, {0, 1, 1, 0}); }
CMatrix pauli_z() { return CMatrix(2, 2, {1, 0, 0, -1}); }

CMatrix random_matrix(size_t r, size_t c, RngStream &rng) {
    CMatrix m(r, c);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
    return m;
}

}  // namespace

// ---------------------------------------------------------------- Philox

TEST(Philox, KnownAnswerZero) {
    auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out, (std::array<uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerAllOnes) {
    auto out = philox4x32_10({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u});
    EXPECT_EQ(out, (std::array<uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
    auto out = philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
    EXPECT_EQ(out, (std::array<uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStream, SameSeedAndStreamRepeat) {
    RngStream a = derive_stream(42, 7);
    RngStream b = derive_stream(42, 7);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngStream, DistinctStreamsDiffer) {
    RngStream a = derive_stream(42, 0);
    RngStream b = derive_stream(42, 1);
    int equal = 0;
    for (int i = 0; i < 100; ++i) equal += a.next_u64() == b.next_u64();
    EXPECT_EQ(equal, 0);
}

TEST(RngStream, IndependentOfDerivationOrder) {
    RngStream first = derive_stream(5, 3);
    uint64_t x = first.next_u64();
    for (uint64_t s = 0; s < 10; ++s) derive_stream(5, s).next_u64();
    EXPECT_EQ(derive_stream(5, 3).next_u64(), x);
}

TEST(RngStream, UniformInUnitInterval) {
    RngStream r(1, 2);
    double sum = 0;
    for (int i = 0; i < 100000; ++i) {
        double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(RngStream, UniformIndexCoversRangeEvenly) {
    RngStream r(3, 4);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) {
        uint64_t k = r.uniform_index(7);
        ASSERT_LT(k, 7u);
        ++counts[k];
    }
    for (int c : counts) EXPECT_NEAR(c, 10000, 400);
}

TEST(RngStream, NormalMoments) {
    RngStream r(9, 9);
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double z = r.normal();
        s += z;
        s2 += z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.015);
}

TEST(RngStream, ShuffleIsPermutation) {
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    RngStream r(1, 1);
    shuffle(v, r);
    std::set<int> seen(v.begin(), v.end());
    EXPECT_EQ(seen.size(), 50u);
    EXPECT_NE(v[0] + v[1] * 100, 0 + 1 * 100);
}

// ---------------------------------------------------------------- kron

TEST(Kron, BasisKets) {
    CMatrix k = kron(CMatrix::column({1, 0}), CMatrix::column({0, 1}));
    EXPECT_EQ(k, CMatrix::column({0, 1, 0, 0}));
}

TEST(Kron, IdentityTimesIdentity) { EXPECT_EQ(kron(CMatrix::identity(2), CMatrix::identity(2)), CMatrix::identity(4)); }

TEST(Kron, XZOnZeroZero) {
    CMatrix out = kron(pauli_x(), pauli_z()) * CMatrix::column({1, 0, 0, 0});
    EXPECT_LT(out.max_abs_diff(CMatrix::column({0, 0, 1, 0})), 1e-15);
}

TEST(Kron, ShapeAndEntries) {
    RngStream r(2, 2);
    CMatrix a = random_matrix(2, 3, r), b = random_matrix(3, 2, r);
    CMatrix k = kron(a, b);
    ASSERT_EQ(k.rows(), 6u);
    ASSERT_EQ(k.cols(), 6u);
    for (size_t i1 = 0; i1 < 2; ++i1)
        for (size_t j1 = 0; j1 < 3; ++j1)
            for (size_t i2 = 0; i2 < 3; ++i2)
                for (size_t j2 = 0; j2 < 2; ++j2) EXPECT_EQ(k(i1 * 3 + i2, j1 * 2 + j2), a(i1, j1) * b(i2, j2));
}

TEST(Kron, AssociativeOnRandomInputs) {
    for (uint64_t s = 0; s < 20; ++s) {
        RngStream r(s, 0);
        CMatrix a = random_matrix(2, 2, r), b = random_matrix(2, 2, r), c = random_matrix(2, 2, r);
        EXPECT_LT(kron(kron(a, b), c).max_abs_diff(kron(a, kron(b, c))), 1e-12);
    }
}

// ---------------------------------------------------------------- Haar

TEST(Haar, DimOneIsUnitModulus) {
    RngStream r(1, 0);
    for (int i = 0; i < 10; ++i) {
        CMatrix u = haar_unitary(1, r);
        EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-14);
    }
}

TEST(Haar, UnitaryAndUnitDeterminant) {
    for (size_t dim = 1; dim <= 16; dim *= 2) {
        RngStream r(dim, 1);
        for (int i = 0; i < 20; ++i) {
            CMatrix u = haar_unitary(dim, r);
            EXPECT_LT((u.adjoint() * u).max_abs_diff(CMatrix::identity(dim)), 1e-12);
            Eigen::MatrixXcd m(dim, dim);
            for (size_t a = 0; a < dim; ++a)
                for (size_t b = 0; b < dim; ++b) m(a, b) = u(a, b);
            EXPECT_NEAR(std::abs(m.determinant()), 1.0, 1e-10);
        }
    }
}

TEST(Haar, SecondMomentOfCornerEntry) {
    RngStream r(77, 0);
    double s = 0;
    for (int i = 0; i < 10000; ++i) s += std::norm(haar_unitary(2, r)(0, 0));
    EXPECT_NEAR(s / 10000, 0.5, 0.02);
}

TEST(Haar, RejectsZeroDimension) {
    RngStream r(0, 0);
    EXPECT_THROW(haar_unitary(0, r), DomainError);
}

// ---------------------------------------------------------------- Tensor

TEST(Tensor, ReshapeRoundTripIsExact) {
    Tensor<double> t({2, 3, 4});
    for (size_t i = 0; i < t.size(); ++i) t[i] = 0.1 * i - 1.0;
    EXPECT_EQ(t.reshaped({6, 4}).reshaped({2, 3, 4}), t);
    EXPECT_EQ(t.reshaped({24}).reshaped({2, 3, 4}), t);
}

TEST(Tensor, RowMajorIndexing) {
    Tensor<float> t({2, 3, 4});
    for (size_t i = 0; i < t.size(); ++i) t[i] = static_cast<float>(i);
    EXPECT_EQ(t.at(1, 2, 3), 23.0f);
    EXPECT_EQ(t.at(1, 0, 0), 12.0f);
}

TEST(Tensor, RejectsZeroDimensionsAndBadReshape) {
    EXPECT_THROW(Tensor<double>({2, 0}), ShapeError);
    Tensor<double> t({2, 3});
    EXPECT_THROW(t.reshaped({4, 2}), ShapeError);
    EXPECT_THROW(Tensor<double>({2, 2}, std::vector<double>(3)), ShapeError);
}

// ---------------------------------------------------------------- binary io

TEST(BinaryIo, Crc32CheckValue) {
    std::string s = "123456789";
    EXPECT_EQ(crc32({reinterpret_cast<const uint8_t *>(s.data()), s.size()}), 0xCBF43926u);
}

TEST(BinaryIo, WriterReaderRoundTrip) {
    ByteWriter w;
    w.u16(0xBEEF);
    w.u32(0xDEADBEEF);
    w.u64(0x0123456789ABCDEFull);
    w.f32(-1.5f);
    w.text("hi");
    std::vector<uint8_t> bytes = w.buffer();
    ASSERT_EQ(bytes.size(), 2u + 4 + 8 + 4 + 2);
    EXPECT_EQ(bytes[0], 0xEF);  // little-endian
    ByteReader r(bytes);
    EXPECT_EQ(r.u16(), 0xBEEF);
    EXPECT_EQ(r.u32(), 0xDEADBEEFu);
    EXPECT_EQ(r.u64(), 0x0123456789ABCDEFull);
    EXPECT_EQ(r.f32(), -1.5f);
    EXPECT_EQ(r.text(2), "hi");
    EXPECT_THROW(r.u16(), FormatError);
}

TEST(BinaryIo, SealedBufferVerifies) {
    ByteWriter w;
    w.text("payload");
    w.seal();
    std::vector<uint8_t> bytes = w.buffer();
    EXPECT_NO_THROW(verify_crc(bytes));
    bytes[2] ^= 0x01;
    try {
        verify_crc(bytes);
        FAIL() << "corruption not detected";
    } catch (const FormatError &e) {
        EXPECT_EQ(e.kind(), FormatError::Kind::kChecksum);
    }
}
