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

#ifndef ENTCLASS_NN_LAYER_H
#define ENTCLASS_NN_LAYER_H

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "entclass/core/rng.h"
#include "entclass/core/tensor.h"

namespace entclass::nn {

/// Trainable tensor with its accumulated gradient (same shape).
template <typename T>
struct Parameter {
    std::string name;
    Tensor<T> value;
    Tensor<T> grad;

    Parameter() = default;
    Parameter(std::string n, Tensor<T> v) : name(std::move(n)), value(std::move(v)), grad(value.shape()) {}
};

/// A differentiable layer operating on a mini-batch.
///
/// Activation layouts used throughout:
///   feature map  (B, C, N)
///   vector       (B, D)
///   sequence     (T, B, F)   time-major so each step is a contiguous block
///
/// forward() caches whatever backward() needs; backward() must follow the
/// matching forward() and *accumulates* into parameter gradients.
template <typename T>
class Layer {
   public:
    virtual ~Layer() = default;

    virtual std::string kind() const = 0;
    /// Output shape for a given (batched) input shape; throws ShapeError if incompatible.
    virtual Shape output_shape(const Shape &input) const = 0;
    virtual Tensor<T> forward(const Tensor<T> &input) = 0;
    virtual Tensor<T> backward(const Tensor<T> &grad_output) = 0;
    virtual std::vector<Parameter<T> *> parameters() { return {}; }
    virtual std::unique_ptr<Layer<T>> clone() const = 0;

    void zero_grad() {
        for (Parameter<T> *p : parameters()) {
            p->grad.fill(T{0});
        }
    }
    size_t parameter_count() {
        size_t n = 0;
        for (Parameter<T> *p : parameters()) {
            n += p->value.size();
        }
        return n;
    }
};

template <typename T>
using MatrixRM = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapRM = Eigen::Map<MatrixRM<T>>;
template <typename T>
using ConstMapRM = Eigen::Map<const MatrixRM<T>>;

/// Fills with U(-bound, bound).
template <typename T>
void fill_uniform(Tensor<T> &t, double bound, RngStream &rng) {
    for (size_t i = 0; i < t.size(); ++i) {
        t[i] = static_cast<T>(rng.uniform(-bound, bound));
    }
}

}  // namespace entclass::nn

#endif
