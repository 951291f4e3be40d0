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

#ifndef ENTCLASS_NN_CHECKPOINT_H
#define ENTCLASS_NN_CHECKPOINT_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entclass/core/tensor.h"
#include "json.hpp"

namespace entclass::nn {

inline constexpr char kCheckpointMagic[4] = {'E', 'N', 'T', 'P'};
inline constexpr uint16_t kCheckpointFormatVersion = 1;

struct NamedTensor {
    std::string name;
    Tensor<float> values;
    bool operator==(const NamedTensor &) const = default;
};

/// Model parameters plus the JSON config needed to rebuild the model.
///
/// Layout (little-endian):
///   "ENTP" | version u16 | header length u32
///   | header JSON {"config": ..., "tensors": [{"name", "shape"}, ...]}
///   | value count u64 | values as f32, tensors in header order
///   | CRC-32 of all preceding bytes (u32)
struct Checkpoint {
    nlohmann::json config;
    std::vector<NamedTensor> tensors;
    bool operator==(const Checkpoint &) const = default;
};

std::vector<uint8_t> encode_checkpoint(const Checkpoint &checkpoint);
Checkpoint decode_checkpoint(std::span<const uint8_t> bytes);
void write_checkpoint(const Checkpoint &checkpoint, const std::string &path);
Checkpoint read_checkpoint(const std::string &path);

}  // namespace entclass::nn

#endif
