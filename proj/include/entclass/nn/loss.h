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

#ifndef ENTCLASS_NN_LOSS_H
#define ENTCLASS_NN_LOSS_H

#include <cstdint>
#include <span>

#include "entclass/core/tensor.h"

namespace entclass::nn {

/// Row-wise softmax of (B, K) logits, with max subtraction.
template <typename T>
Tensor<T> softmax(const Tensor<T> &logits);

template <typename T>
struct LossAndGrad {
    /// Mean of -log p[label] over the batch.
    double loss = 0;
    /// d loss / d logits = (p - onehot(label)) / B.
    Tensor<T> grad;
};

/// Softmax cross-entropy for a (B, K) batch; labels.size() == B, each < K.
template <typename T>
LossAndGrad<T> softmax_cross_entropy(const Tensor<T> &logits, std::span<const uint16_t> labels);

}  // namespace entclass::nn

#endif
