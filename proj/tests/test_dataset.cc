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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "entclass/core/binary_io.h"
#include "entclass/core/error.h"
#include "entclass/dataset/dataset.h"
#include "entclass/dataset/io.h"

using namespace entclass;
namespace fs = std::filesystem;

namespace {

GenerationConfig config(int n_qubits, size_t n, uint64_t seed, unsigned workers = 1) {
    GenerationConfig g;
    g.n_samples = n;
    g.roster = default_roster(n_qubits);
    g.bases = build_basis_set(n_qubits);
    g.root_seed = seed;
    g.workers = workers;
    return g;
}

fs::path scratch_dir() {
    fs::path p = fs::temp_directory_path() / ("entclass_test_dataset_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
}

FormatError::Kind decode_error_kind(const std::vector<uint8_t> &bytes) {
    try {
        decode_dataset(bytes);
    } catch (const FormatError &e) {
        return e.kind();
    }
    ADD_FAILURE() << "decode succeeded";
    return FormatError::Kind::kMalformed;
}

/// Two-class dataset with distinct features per sample, `per_class` each.
Dataset two_class(size_t per_class) {
    DatasetMetadata m;
    m.n_qubits = 3;
    m.n_classes = 2;
    m.feature_length = 2;
    m.roster = {"GHZ", "W"};
    Dataset d(m);
    for (size_t i = 0; i < 2 * per_class; ++i) {
        float v = static_cast<float>(i);
        d.append(std::vector<float>{v, -v}, static_cast<uint16_t>(i % 2));
    }
    return d;
}

std::multiset<float> first_features(const Dataset &d) {
    std::multiset<float> out;
    for (size_t i = 0; i < d.size(); ++i) out.insert(d.features(i)[0]);
    return out;
}

}  // namespace

TEST(Generate, BalancedClasses) {
    Dataset d = generate(config(3, 600, 1));
    EXPECT_EQ(d.size(), 600u);
    EXPECT_EQ(d.class_counts(), std::vector<size_t>(6, 100));
}

TEST(Generate, UnevenCountsDifferByAtMostOne) {
    Dataset d = generate(config(4, 25, 1));
    auto c = d.class_counts();
    EXPECT_EQ(*std::max_element(c.begin(), c.end()) - *std::min_element(c.begin(), c.end()), 1u);
}

TEST(Generate, LabelsAreShuffled) {
    Dataset d = generate(config(3, 60, 1));
    bool cyclic = true;
    for (size_t i = 0; i < d.size(); ++i) cyclic = cyclic && d.label(i) == i % 6;
    EXPECT_FALSE(cyclic);
}

TEST(Generate, SameInputsSameBytes) {
    EXPECT_EQ(encode_dataset(generate(config(3, 120, 7))), encode_dataset(generate(config(3, 120, 7))));
    EXPECT_NE(encode_dataset(generate(config(3, 120, 7))), encode_dataset(generate(config(3, 120, 8))));
}

TEST(Generate, WorkerCountDoesNotChangeBytes) {
    auto one = encode_dataset(generate(config(3, 300, 3, 1)));
    auto eight = encode_dataset(generate(config(3, 300, 3, 8)));
    EXPECT_EQ(crc32(one), crc32(eight));
    EXPECT_EQ(one, eight);
    auto four_a = encode_dataset(generate(config(4, 40, 3, 1)));
    auto four_b = encode_dataset(generate(config(4, 40, 3, 8)));
    EXPECT_EQ(four_a, four_b);
}

TEST(Generate, FeaturesInUnitIntervalAndBlocksNormalized) {
    GenerationConfig g = config(3, 60, 2);
    g.noise = NoiseConfig::from_codes(0.1, 50);
    Dataset d = generate(g);
    for (size_t i = 0; i < d.size(); ++i) {
        auto f = d.features(i);
        for (size_t b = 0; b < 27; ++b) {
            double s = 0;
            for (size_t k = 0; k < 8; ++k) {
                EXPECT_GE(f[b * 8 + k], 0.0f);
                EXPECT_LE(f[b * 8 + k], 1.0f);
                s += f[b * 8 + k];
            }
            EXPECT_NEAR(s, 1.0, 1e-5);  // f32 storage
        }
    }
}

TEST(Generate, MetadataRecordsInputs) {
    GenerationConfig g = config(4, 20, 99);
    g.noise = NoiseConfig::from_codes(0.05, 200);
    g.local_unitaries = LocalUnitaryMode::kHaar;
    Dataset d = generate(g);
    const auto &m = d.metadata();
    EXPECT_EQ(m.n_qubits, 4);
    EXPECT_EQ(m.n_classes, 10);
    EXPECT_EQ(m.feature_length, 1296u);
    EXPECT_EQ(m.roster, roster_names(g.roster));
    EXPECT_EQ(m.noise, g.noise);
    EXPECT_EQ(m.local_unitaries, LocalUnitaryMode::kHaar);
    EXPECT_EQ(m.root_seed, 99u);
}

TEST(Generate, TooFewSamples) { EXPECT_THROW(generate(config(3, 5, 0)), DomainError); }

// ---------------------------------------------------------------- io

TEST(Io, RoundTripIsExact) {
    fs::path dir = scratch_dir();
    GenerationConfig g = config(3, 12, 4);
    g.noise = NoiseConfig::from_codes(0.1, 100);
    Dataset d = generate(g).select({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    write_dataset(d, (dir / "rt.entd").string());
    Dataset back = read_dataset((dir / "rt.entd").string());
    EXPECT_EQ(back, d);
    fs::remove_all(dir);
}

TEST(Io, FileSizeMatchesLayout) {
    Dataset d = generate(config(3, 10, 4));
    std::string meta = d.metadata().to_json().dump();
    auto bytes = encode_dataset(d);
    size_t expect = 4 + 2 + 4 + meta.size() + 8 + 4 + 10 * (216 * 4 + 2) + 4;
    EXPECT_EQ(bytes.size(), expect);
    EXPECT_EQ(encoded_dataset_size(meta.size(), 10, 216), expect);
}

TEST(Io, HeaderFields) {
    Dataset d = generate(config(3, 6, 0));
    auto bytes = encode_dataset(d);
    ByteReader r(bytes);
    EXPECT_EQ(r.text(4), "ENTD");
    EXPECT_EQ(r.u16(), kDatasetFormatVersion);
    uint32_t len = r.u32();
    auto meta = nlohmann::json::parse(r.text(len));
    for (const char *key : {"n_qubits", "n_classes", "scheme", "roster", "dephasing_epsilon", "shots", "root_seed",
                            "creator_version"})
        EXPECT_TRUE(meta.contains(key)) << key;
    EXPECT_EQ(meta["shots"], -1);
    EXPECT_EQ(r.u64(), 6u);
    EXPECT_EQ(r.u32(), 216u);
}

TEST(Io, CorruptPayloadByteFailsChecksum) {
    auto bytes = encode_dataset(generate(config(3, 10, 4)));
    bytes[bytes.size() - 100] ^= 0x40;
    EXPECT_EQ(decode_error_kind(bytes), FormatError::Kind::kChecksum);
}

TEST(Io, DistinctErrorKinds) {
    auto good = encode_dataset(generate(config(3, 10, 4)));

    auto magic = good;
    magic[0] = 'X';
    EXPECT_EQ(decode_error_kind(magic), FormatError::Kind::kBadMagic);

    auto version = good;
    version[4] = 9;
    EXPECT_EQ(decode_error_kind(version), FormatError::Kind::kVersionMismatch);

    auto truncated = good;
    truncated.resize(good.size() - 10);
    EXPECT_EQ(decode_error_kind(truncated), FormatError::Kind::kTruncated);

    EXPECT_EQ(decode_error_kind({'E', 'N'}), FormatError::Kind::kTruncated);
}

TEST(Io, MissingFileIsIoError) { EXPECT_THROW(read_dataset("/nonexistent/dir/x.entd"), IoError); }

TEST(Io, CsvExport) {
    fs::path dir = scratch_dir();
    Dataset d = generate(config(3, 6, 4));
    write_dataset_csv(d, (dir / "d.csv").string());
    std::ifstream in(dir / "d.csv");
    std::string header, line;
    std::getline(in, header);
    EXPECT_EQ(std::count(header.begin(), header.end(), ','), 216);
    EXPECT_EQ(header.substr(0, 6), "f0,f1,");
    EXPECT_EQ(header.substr(header.size() - 6), ",label");
    size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 216);
        EXPECT_EQ(std::stoi(line.substr(line.rfind(',') + 1)), d.label(rows - 1));
    }
    EXPECT_EQ(rows, 6u);
    fs::remove_all(dir);
}

TEST(Io, MetadataJsonRoundTrip) {
    DatasetMetadata m = generate(config(4, 10, 3)).metadata();
    EXPECT_EQ(DatasetMetadata::from_json(m.to_json()), m);
    auto j = m.to_json();
    j["n_classes"] = 3;
    EXPECT_THROW(DatasetMetadata::from_json(j), SchemaError);
}

// ---------------------------------------------------------------- subsample / split

TEST(Subsample, QuotaSixClasses) {
    Dataset d = generate(config(3, 600, 2));
    EXPECT_EQ(subsample(d, 100, 0).class_counts(), (std::vector<size_t>{17, 17, 17, 17, 16, 16}));
}

TEST(Subsample, QuotaTenClasses) {
    Dataset d = generate(config(4, 200, 2));
    EXPECT_EQ(subsample(d, 100, 0).class_counts(), std::vector<size_t>(10, 10));
}

TEST(Subsample, FullSizeIsPermutation) {
    Dataset d = two_class(30);
    Dataset s = subsample(d, d.size(), 3);
    EXPECT_EQ(first_features(s), first_features(d));
}

TEST(Subsample, WithoutReplacementAndDeterministic) {
    Dataset d = two_class(50);
    Dataset a = subsample(d, 40, 11);
    EXPECT_EQ(a, subsample(d, 40, 11));
    EXPECT_NE(a, subsample(d, 40, 12));
    auto f = first_features(a);
    EXPECT_EQ(std::set<float>(f.begin(), f.end()).size(), 40u);
    for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(static_cast<size_t>(a.features(i)[0]) % 2, a.label(i));
}

TEST(Subsample, TooLarge) { EXPECT_THROW(subsample(two_class(5), 11, 0), DomainError); }

TEST(Split, HalvesOfTwoClassSet) {
    Dataset d = two_class(100);
    auto [a, b] = split(d, {0.5, 0.5}, 1);
    EXPECT_EQ(a.size(), 100u);
    EXPECT_EQ(b.size(), 100u);
    EXPECT_EQ(a.class_counts(), (std::vector<size_t>{50, 50}));
    EXPECT_EQ(b.class_counts(), (std::vector<size_t>{50, 50}));
    auto fa = first_features(a), fb = first_features(b);
    for (float v : fa) EXPECT_EQ(fb.count(v), 0u);
    fa.insert(fb.begin(), fb.end());
    EXPECT_EQ(fa, first_features(d));
}

TEST(Split, StratifiedOnBalancedInput) {
    Dataset d = generate(config(3, 120, 2));
    for (double f : {0.1, 0.25, 0.8}) {
        auto [a, b] = split(d, {f, 1 - f}, 4);
        for (const Dataset *part : {&a, &b}) {
            auto c = part->class_counts();
            EXPECT_LE(*std::max_element(c.begin(), c.end()) - *std::min_element(c.begin(), c.end()), 1u);
        }
        EXPECT_EQ(a.size() + b.size(), d.size());
    }
}

TEST(Split, InvalidFractions) {
    Dataset d = two_class(10);
    EXPECT_THROW(split(d, {0.5, 0.6}, 0), DomainError);
    EXPECT_THROW(split(d, {1.2, -0.2}, 0), DomainError);
    EXPECT_THROW(split(d, {1.0}, 0), DomainError);
}

TEST(DatasetType, AppendValidates) {
    Dataset d = two_class(1);
    EXPECT_THROW(d.append(std::vector<float>{1, 2, 3}, 0), ShapeError);
    EXPECT_THROW(d.append(std::vector<float>{1, 2}, 2), DomainError);
}
