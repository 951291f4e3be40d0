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

#ifndef ENTCLASS_DATASET_IO_H
#define ENTCLASS_DATASET_IO_H

#include <cstdint>
#include <string>
#include <vector>

#include "entclass/dataset/dataset.h"

namespace entclass {

inline constexpr char kDatasetMagic[4] = {'E', 'N', 'T', 'D'};
inline constexpr uint16_t kDatasetFormatVersion = 1;

/// Binary `.entd` layout (little-endian):
///   "ENTD" | version u16 | metadata length u32 | metadata JSON (UTF-8)
///   | n_samples u64 | M u32 | n_samples x (M x f32 features, u16 label)
///   | CRC-32 of all preceding bytes (u32)
std::vector<uint8_t> encode_dataset(const Dataset &dataset);
Dataset decode_dataset(std::span<const uint8_t> bytes);

void write_dataset(const Dataset &dataset, const std::string &path);
Dataset read_dataset(const std::string &path);

/// Byte size of an encoded dataset with the given metadata JSON length.
size_t encoded_dataset_size(size_t metadata_json_bytes, size_t n_samples, size_t feature_length);

/// One row per sample: f0..f{M-1},label.
void write_dataset_csv(const Dataset &dataset, const std::string &path);

}  // namespace entclass

#endif
