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

#include "entclass/nn/loss.h"

#include <algorithm>
#include <cmath>

#include "entclass/core/error.h"

namespace entclass::nn {

template <typename T>
Tensor<T> softmax(const Tensor<T> &logits) {
    if (logits.rank() != 2) {
        throw ShapeError("softmax: expected (B, K) logits, got " + shape_str(logits.shape()));
    }
    const size_t batch = logits.dim(0), k = logits.dim(1);
    Tensor<T> p(logits.shape());
    for (size_t b = 0; b < batch; ++b) {
        const T *z = logits.data() + b * k;
        T *out = p.data() + b * k;
        const T peak = *std::max_element(z, z + k);
        T total{0};
        for (size_t j = 0; j < k; ++j) {
            out[j] = std::exp(z[j] - peak);
            total += out[j];
        }
        for (size_t j = 0; j < k; ++j) {
            out[j] /= total;
        }
    }
    return p;
}

template <typename T>
LossAndGrad<T> softmax_cross_entropy(const Tensor<T> &logits, std::span<const uint16_t> labels) {
    if (logits.rank() != 2 || logits.dim(0) != labels.size()) {
        throw ShapeError("softmax_cross_entropy: " + std::to_string(labels.size()) + " labels for logits " +
                         shape_str(logits.shape()));
    }
    const size_t batch = logits.dim(0), k = logits.dim(1);
    LossAndGrad<T> out;
    out.grad = softmax(logits);
    double total = 0;
    for (size_t b = 0; b < batch; ++b) {
        const size_t y = labels[b];
        if (y >= k) {
            throw DomainError("softmax_cross_entropy: label " + std::to_string(y) + " out of range [0, " +
                              std::to_string(k) + ")");
        }
        // log p_y = (z_y - max) - log(sum exp(z - max)), computed without forming p_y.
        const T *z = logits.data() + b * k;
        const T peak = *std::max_element(z, z + k);
        double sum = 0;
        for (size_t j = 0; j < k; ++j) {
            sum += std::exp(static_cast<double>(z[j] - peak));
        }
        total += std::log(sum) - static_cast<double>(z[y] - peak);
        out.grad[b * k + y] -= T{1};
    }
    const T inv_batch = T{1} / static_cast<T>(batch);
    for (T &g : out.grad.storage()) {
        g *= inv_batch;
    }
    out.loss = total / static_cast<double>(batch);
    return out;
}

template Tensor<float> softmax(const Tensor<float> &);
template Tensor<double> softmax(const Tensor<double> &);
template LossAndGrad<float> softmax_cross_entropy(const Tensor<float> &, std::span<const uint16_t>);
template LossAndGrad<double> softmax_cross_entropy(const Tensor<double> &, std::span<const uint16_t>);

}  // namespace entclass::nn
