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

#ifndef ENTCLASS_NN_LAYERS_H
#define ENTCLASS_NN_LAYERS_H

#include <vector>

#include "entclass/nn/layer.h"

namespace entclass::nn {

/// Valid (unpadded) 1-D cross-correlation, (B, C_in, N) -> (B, C_out, N').
///
/// N' = floor((N - k) / stride) + 1. Weights have shape (C_out, C_in, k).
template <typename T>
class Conv1d final : public Layer<T> {
   public:
    Conv1d(size_t in_channels, size_t out_channels, size_t kernel, size_t stride = 1);

    /// Kaiming-uniform weights for a LeakyReLU of the given slope; zero bias.
    void initialize(RngStream &rng, double leaky_slope);

    std::string kind() const override { return "conv1d"; }
    Shape output_shape(const Shape &input) const override;
    Tensor<T> forward(const Tensor<T> &input) override;
    Tensor<T> backward(const Tensor<T> &grad_output) override;
    std::vector<Parameter<T> *> parameters() override { return {&weight_, &bias_}; }
    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Conv1d>(*this); }

    Parameter<T> &weight() { return weight_; }
    Parameter<T> &bias() { return bias_; }
    size_t in_channels() const { return in_channels_; }
    size_t out_channels() const { return out_channels_; }
    size_t kernel() const { return kernel_; }
    size_t stride() const { return stride_; }

   private:
    size_t in_channels_, out_channels_, kernel_, stride_;
    Parameter<T> weight_, bias_;
    Shape input_shape_;
    // im2col buffers, one (C_in*k, N') block per sample.
    AlignedVector<T> columns_;
};

/// y = x for x > 0, slope * x otherwise. The derivative at exactly 0 is taken as 1.
template <typename T>
class LeakyReLU final : public Layer<T> {
   public:
    explicit LeakyReLU(double slope = 0.01);

    std::string kind() const override { return "leaky_relu"; }
    Shape output_shape(const Shape &input) const override { return input; }
    Tensor<T> forward(const Tensor<T> &input) override;
    Tensor<T> backward(const Tensor<T> &grad_output) override;
    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<LeakyReLU>(*this); }

    double slope() const { return slope_; }

   private:
    double slope_;
    Tensor<T> input_;
};

/// Per-channel max over sliding windows, (B, C, N) -> (B, C, N').
/// Ties resolve to the lowest index; backward routes the gradient there.
template <typename T>
class MaxPool1d final : public Layer<T> {
   public:
    MaxPool1d(size_t window, size_t stride);

    std::string kind() const override { return "maxpool1d"; }
    Shape output_shape(const Shape &input) const override;
    Tensor<T> forward(const Tensor<T> &input) override;
    Tensor<T> backward(const Tensor<T> &grad_output) override;
    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<MaxPool1d>(*this); }

    size_t window() const { return window_; }
    size_t stride() const { return stride_; }

   private:
    size_t window_, stride_;
    Shape input_shape_;
    std::vector<size_t> argmax_;
};

/// y = W x + b on (B, in) -> (B, out). W has shape (out, in).
template <typename T>
class Dense final : public Layer<T> {
   public:
    Dense(size_t in_features, size_t out_features);

    /// Kaiming-uniform weights (gain for the given LeakyReLU slope); zero bias.
    void initialize(RngStream &rng, double leaky_slope);

    std::string kind() const override { return "dense"; }
    Shape output_shape(const Shape &input) const override;
    Tensor<T> forward(const Tensor<T> &input) override;
    Tensor<T> backward(const Tensor<T> &grad_output) override;
    std::vector<Parameter<T> *> parameters() override { return {&weight_, &bias_}; }
    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Dense>(*this); }

    Parameter<T> &weight() { return weight_; }
    Parameter<T> &bias() { return bias_; }
    size_t in_features() const { return in_features_; }
    size_t out_features() const { return out_features_; }

   private:
    size_t in_features_, out_features_;
    Parameter<T> weight_, bias_;
    Tensor<T> input_;
};

/// (B, C, N) -> (B, C*N), row-major, no arithmetic.
template <typename T>
class Flatten final : public Layer<T> {
   public:
    std::string kind() const override { return "flatten"; }
    Shape output_shape(const Shape &input) const override;
    Tensor<T> forward(const Tensor<T> &input) override;
    Tensor<T> backward(const Tensor<T> &grad_output) override;
    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Flatten>(*this); }

   private:
    Shape input_shape_;
};

/// Feature map to sequence: (B, F, N) -> (N, B, F), out[t][b][f] = in[b][f][t].
/// Spatial positions become timesteps, channels become per-step features.
template <typename T>
class MapToSequence final : public Layer<T> {
   public:
    std::string kind() const override { return "map_to_sequence"; }
    Shape output_shape(const Shape &input) const override;
    Tensor<T> forward(const Tensor<T> &input) override;
    Tensor<T> backward(const Tensor<T> &grad_output) override;
    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<MapToSequence>(*this); }
};

/// Vector to sequence: (B, D) -> (S, B, D/S), out[t][b][j] = in[b][t*(D/S) + j].
/// S = 1 yields a single-timestep sequence; S = D one scalar per step.
template <typename T>
class VectorToSequence final : public Layer<T> {
   public:
    explicit VectorToSequence(size_t segments);

    std::string kind() const override { return "vector_to_sequence"; }
    Shape output_shape(const Shape &input) const override;
    Tensor<T> forward(const Tensor<T> &input) override;
    Tensor<T> backward(const Tensor<T> &grad_output) override;
    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<VectorToSequence>(*this); }

    size_t segments() const { return segments_; }

   private:
    size_t segments_;
};

}  // namespace entclass::nn

#endif
