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

#ifndef ENTCLASS_CORE_BINARY_IO_H
#define ENTCLASS_CORE_BINARY_IO_H

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "entclass/core/error.h"

namespace entclass {

/// CRC-32 (IEEE 802.3 polynomial, as in zlib/PNG).
uint32_t crc32(std::span<const uint8_t> bytes);

/// Little-endian append-only byte buffer.
class ByteWriter {
   public:
    void u16(uint16_t v) { put(v); }
    void u32(uint32_t v) { put(v); }
    void u64(uint64_t v) { put(v); }
    void f32(float v) { put(v); }
    void bytes(std::span<const uint8_t> b) { buffer_.insert(buffer_.end(), b.begin(), b.end()); }
    void text(const std::string &s) { bytes({reinterpret_cast<const uint8_t *>(s.data()), s.size()}); }

    /// Appends the CRC-32 of everything written so far.
    void seal() { u32(crc32(buffer_)); }

    const std::vector<uint8_t> &buffer() const { return buffer_; }

   private:
    template <typename T>
    void put(T v) {
        static_assert(std::endian::native == std::endian::little, "big-endian hosts are not supported");
        uint8_t raw[sizeof(T)];
        std::memcpy(raw, &v, sizeof(T));
        buffer_.insert(buffer_.end(), raw, raw + sizeof(T));
    }

    std::vector<uint8_t> buffer_;
};

/// Bounds-checked little-endian reader. Reading past the end throws
/// FormatError(kTruncated).
class ByteReader {
   public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    uint16_t u16() { return get<uint16_t>(); }
    uint32_t u32() { return get<uint32_t>(); }
    uint64_t u64() { return get<uint64_t>(); }
    float f32() { return get<float>(); }
    std::span<const uint8_t> bytes(size_t n) {
        require(n);
        auto out = data_.subspan(pos_, n);
        pos_ += n;
        return out;
    }
    std::string text(size_t n) {
        auto b = bytes(n);
        return std::string(b.begin(), b.end());
    }

    size_t position() const { return pos_; }
    size_t remaining() const { return data_.size() - pos_; }

   private:
    void require(size_t n) const {
        if (n > remaining()) {
            throw FormatError(FormatError::Kind::kTruncated, "file is truncated");
        }
    }
    template <typename T>
    T get() {
        require(sizeof(T));
        T v;
        std::memcpy(&v, data_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

std::vector<uint8_t> read_file(const std::string &path);

/// Writes to a temporary sibling then renames over `path`.
void write_file_atomic(const std::string &path, std::span<const uint8_t> bytes);
void write_text_atomic(const std::string &path, const std::string &text);

/// Checks the trailing CRC-32 of a sealed buffer; throws FormatError(kChecksum).
void verify_crc(std::span<const uint8_t> bytes);

}  // namespace entclass

#endif
