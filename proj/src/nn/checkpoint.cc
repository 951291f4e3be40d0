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

#include "entclass/nn/checkpoint.h"

#include <cstring>

#include "entclass/core/binary_io.h"

namespace entclass::nn {

std::vector<uint8_t> encode_checkpoint(const Checkpoint &checkpoint) {
    nlohmann::json header;
    header["config"] = checkpoint.config;
    header["tensors"] = nlohmann::json::array();
    uint64_t total = 0;
    for (const NamedTensor &t : checkpoint.tensors) {
        header["tensors"].push_back({{"name", t.name}, {"shape", t.values.shape()}});
        total += t.values.size();
    }
    const std::string text = header.dump();
    ByteWriter w;
    w.bytes({reinterpret_cast<const uint8_t *>(kCheckpointMagic), 4});
    w.u16(kCheckpointFormatVersion);
    w.u32(static_cast<uint32_t>(text.size()));
    w.text(text);
    w.u64(total);
    for (const NamedTensor &t : checkpoint.tensors) {
        for (float v : t.values.values()) {
            w.f32(v);
        }
    }
    w.seal();
    return w.buffer();
}

Checkpoint decode_checkpoint(std::span<const uint8_t> bytes) {
    using Kind = FormatError::Kind;
    ByteReader r(bytes);
    auto magic = r.bytes(4);
    if (std::memcmp(magic.data(), kCheckpointMagic, 4) != 0) {
        throw FormatError(Kind::kBadMagic, "not an ENTP checkpoint (bad magic)");
    }
    uint16_t version = r.u16();
    if (version != kCheckpointFormatVersion) {
        throw FormatError(Kind::kVersionMismatch, "unsupported checkpoint version " + std::to_string(version));
    }
    std::string text = r.text(r.u32());
    uint64_t total = r.u64();
    if (total > bytes.size() / 4 || r.remaining() < total * 4 + 4) {
        if (total <= bytes.size() / 4) {
            throw FormatError(Kind::kTruncated, "checkpoint is truncated");
        }
        verify_crc(bytes);
        throw FormatError(Kind::kMalformed, "checkpoint value count exceeds file size");
    }
    verify_crc(bytes);
    if (r.remaining() != total * 4 + 4) {
        throw FormatError(Kind::kMalformed, "trailing bytes after checkpoint payload");
    }

    Checkpoint out;
    uint64_t declared = 0;
    try {
        nlohmann::json header = nlohmann::json::parse(text);
        out.config = header.at("config");
        for (const auto &entry : header.at("tensors")) {
            Shape shape = entry.at("shape").get<Shape>();
            declared += shape_size(shape);
            if (declared > total) {
                throw FormatError(Kind::kMalformed, "tensor shapes exceed stored value count");
            }
            std::vector<float> values(shape_size(shape));
            for (float &v : values) {
                v = r.f32();
            }
            out.tensors.push_back({entry.at("name").get<std::string>(), Tensor<float>(shape, std::move(values))});
        }
    } catch (const nlohmann::json::exception &e) {
        throw FormatError(Kind::kMalformed, std::string("checkpoint header: ") + e.what());
    }
    if (declared != total) {
        throw FormatError(Kind::kMalformed, "tensor shapes do not cover the stored values");
    }
    return out;
}

void write_checkpoint(const Checkpoint &checkpoint, const std::string &path) {
    write_file_atomic(path, encode_checkpoint(checkpoint));
}

Checkpoint read_checkpoint(const std::string &path) { return decode_checkpoint(read_file(path)); }

}  // namespace entclass::nn
