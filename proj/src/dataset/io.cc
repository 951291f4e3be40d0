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

#include "entclass/dataset/io.h"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>

#include "entclass/core/binary_io.h"
#include "entclass/core/error.h"

namespace entclass {

size_t encoded_dataset_size(size_t metadata_json_bytes, size_t n_samples, size_t feature_length) {
    const size_t header = 4 + 2 + 4;
    const size_t counts = 8 + 4;
    return header + metadata_json_bytes + counts + n_samples * (feature_length * 4 + 2) + 4;
}

std::vector<uint8_t> encode_dataset(const Dataset &dataset) {
    const std::string meta = dataset.metadata().to_json().dump();
    if (meta.size() > std::numeric_limits<uint32_t>::max()) {
        throw DomainError("dataset metadata too large");
    }
    ByteWriter w;
    w.bytes({reinterpret_cast<const uint8_t *>(kDatasetMagic), 4});
    w.u16(kDatasetFormatVersion);
    w.u32(static_cast<uint32_t>(meta.size()));
    w.text(meta);
    w.u64(dataset.size());
    w.u32(static_cast<uint32_t>(dataset.feature_length()));
    for (size_t i = 0; i < dataset.size(); ++i) {
        for (float f : dataset.features(i)) {
            w.f32(f);
        }
        w.u16(dataset.label(i));
    }
    w.seal();
    return w.buffer();
}

Dataset decode_dataset(std::span<const uint8_t> bytes) {
    using Kind = FormatError::Kind;
    ByteReader r(bytes);
    auto magic = r.bytes(4);
    if (std::memcmp(magic.data(), kDatasetMagic, 4) != 0) {
        throw FormatError(Kind::kBadMagic, "not an .entd dataset (bad magic)");
    }
    uint16_t version = r.u16();
    if (version != kDatasetFormatVersion) {
        throw FormatError(Kind::kVersionMismatch, "unsupported .entd version " + std::to_string(version) +
                                                      " (expected " + std::to_string(kDatasetFormatVersion) + ")");
    }
    uint32_t meta_len = r.u32();
    std::string meta_text = r.text(meta_len);
    uint64_t n = r.u64();
    uint32_t m = r.u32();
    if (n > bytes.size() || m > bytes.size()) {
        // Header counts cannot exceed the file; either truncation or a corrupt header.
        verify_crc(bytes);
        throw FormatError(Kind::kMalformed, "sample counts exceed file size");
    }
    const size_t expected = encoded_dataset_size(meta_len, n, m);
    if (bytes.size() < expected) {
        throw FormatError(Kind::kTruncated, "file is truncated: " + std::to_string(bytes.size()) + " bytes, expected " +
                                                std::to_string(expected));
    }
    verify_crc(bytes);
    if (bytes.size() != expected) {
        throw FormatError(Kind::kMalformed, "trailing bytes after payload");
    }

    nlohmann::json meta_json;
    try {
        meta_json = nlohmann::json::parse(meta_text);
    } catch (const nlohmann::json::exception &e) {
        throw FormatError(Kind::kMalformed, std::string("metadata is not valid JSON: ") + e.what());
    }
    DatasetMetadata meta = DatasetMetadata::from_json(meta_json);
    if (meta.feature_length != 0 && meta.feature_length != m) {
        throw FormatError(Kind::kMalformed, "metadata feature_length disagrees with header M");
    }
    meta.feature_length = m;

    Dataset out(meta);
    out.reserve(n);
    std::vector<float> features(m);
    for (uint64_t i = 0; i < n; ++i) {
        for (uint32_t j = 0; j < m; ++j) {
            features[j] = r.f32();
        }
        out.append(features, r.u16());
    }
    return out;
}

void write_dataset(const Dataset &dataset, const std::string &path) { write_file_atomic(path, encode_dataset(dataset)); }

Dataset read_dataset(const std::string &path) { return decode_dataset(read_file(path)); }

void write_dataset_csv(const Dataset &dataset, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    for (size_t j = 0; j < dataset.feature_length(); ++j) {
        out << 'f' << j << ',';
    }
    out << "label\n";
    out << std::setprecision(9);
    for (size_t i = 0; i < dataset.size(); ++i) {
        for (float f : dataset.features(i)) {
            out << f << ',';
        }
        out << dataset.label(i) << '\n';
    }
}

}  // namespace entclass
