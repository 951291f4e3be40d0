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

#include "entclass/core/binary_io.h"

#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

namespace entclass {

uint32_t crc32(std::span<const uint8_t> bytes) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed in chunks for large payloads.
    const size_t kChunk = size_t{1} << 30;
    for (size_t off = 0; off < bytes.size(); off += kChunk) {
        size_t n = std::min(kChunk, bytes.size() - off);
        crc = ::crc32(crc, bytes.data() + off, static_cast<uInt>(n));
    }
    return static_cast<uint32_t>(crc);
}

std::vector<uint8_t> read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_atomic(const std::string &path, std::span<const uint8_t> bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + tmp + "' for writing");
        }
        out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw IoError("write to '" + tmp + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
    }
}

void write_text_atomic(const std::string &path, const std::string &text) {
    write_file_atomic(path, {reinterpret_cast<const uint8_t *>(text.data()), text.size()});
}

void verify_crc(std::span<const uint8_t> bytes) {
    if (bytes.size() < 4) {
        throw FormatError(FormatError::Kind::kTruncated, "file is truncated");
    }
    ByteReader tail(bytes.subspan(bytes.size() - 4));
    uint32_t stored = tail.u32();
    if (stored != crc32(bytes.first(bytes.size() - 4))) {
        throw FormatError(FormatError::Kind::kChecksum, "CRC-32 mismatch: file is corrupt");
    }
}

}  // namespace entclass
