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

#include "entclass/nn/layers.h"

#include <cmath>

#include "entclass/core/error.h"

namespace entclass::nn {

namespace {

void expect_rank(const Shape &shape, size_t rank, const char *who) {
    if (shape.size() != rank) {
        throw ShapeError(std::string(who) + ": expected rank " + std::to_string(rank) + " input, got " +
                         shape_str(shape));
    }
}

double kaiming_bound(size_t fan_in, double leaky_slope) {
    return std::sqrt(6.0 / ((1.0 + leaky_slope * leaky_slope) * static_cast<double>(fan_in)));
}

}  // namespace

// ---------------------------------------------------------------- Conv1d

template <typename T>
Conv1d<T>::Conv1d(size_t in_channels, size_t out_channels, size_t kernel, size_t stride)
    : in_channels_(in_channels),
      out_channels_(out_channels),
      kernel_(kernel),
      stride_(stride),
      weight_("weight", Tensor<T>({out_channels, in_channels, kernel})),
      bias_("bias", Tensor<T>({out_channels})) {
    if (stride == 0) {
        throw ShapeError("conv1d: stride must be >= 1");
    }
}

template <typename T>
void Conv1d<T>::initialize(RngStream &rng, double leaky_slope) {
    fill_uniform(weight_.value, kaiming_bound(in_channels_ * kernel_, leaky_slope), rng);
    bias_.value.fill(T{0});
}

template <typename T>
Shape Conv1d<T>::output_shape(const Shape &input) const {
    expect_rank(input, 3, "conv1d");
    if (input[1] != in_channels_) {
        throw ShapeError("conv1d: expected " + std::to_string(in_channels_) + " input channels, got " +
                         shape_str(input));
    }
    if (input[2] < kernel_) {
        throw ShapeError("conv1d: kernel " + std::to_string(kernel_) + " longer than input " + shape_str(input));
    }
    return {input[0], out_channels_, (input[2] - kernel_) / stride_ + 1};
}

template <typename T>
Tensor<T> Conv1d<T>::forward(const Tensor<T> &input) {
    Shape out_shape = output_shape(input.shape());
    input_shape_ = input.shape();
    const size_t batch = input.dim(0), n = input.dim(2), n_out = out_shape[2];
    const size_t rows = in_channels_ * kernel_;
    columns_.assign(batch * rows * n_out, T{0});
    Tensor<T> out(out_shape);
    ConstMapRM<T> w(weight_.value.data(), out_channels_, rows);
    for (size_t b = 0; b < batch; ++b) {
        T *col = columns_.data() + b * rows * n_out;
        const T *x = input.data() + b * in_channels_ * n;
        for (size_t c = 0; c < in_channels_; ++c) {
            for (size_t j = 0; j < kernel_; ++j) {
                T *dst = col + (c * kernel_ + j) * n_out;
                const T *src = x + c * n + j;
                for (size_t t = 0; t < n_out; ++t) {
                    dst[t] = src[t * stride_];
                }
            }
        }
        MapRM<T> y(out.data() + b * out_channels_ * n_out, out_channels_, n_out);
        y.noalias() = w * ConstMapRM<T>(col, rows, n_out);
        for (size_t o = 0; o < out_channels_; ++o) {
            y.row(o).array() += bias_.value[o];
        }
    }
    return out;
}

template <typename T>
Tensor<T> Conv1d<T>::backward(const Tensor<T> &grad_output) {
    const size_t batch = input_shape_.at(0), n = input_shape_[2];
    const size_t n_out = grad_output.dim(2);
    const size_t rows = in_channels_ * kernel_;
    Tensor<T> grad_input(input_shape_);
    ConstMapRM<T> w(weight_.value.data(), out_channels_, rows);
    MapRM<T> dw(weight_.grad.data(), out_channels_, rows);
    MatrixRM<T> dcol(rows, n_out);
    for (size_t b = 0; b < batch; ++b) {
        ConstMapRM<T> dy(grad_output.data() + b * out_channels_ * n_out, out_channels_, n_out);
        ConstMapRM<T> col(columns_.data() + b * rows * n_out, rows, n_out);
        dw.noalias() += dy * col.transpose();
        for (size_t o = 0; o < out_channels_; ++o) {
            bias_.grad[o] += dy.row(o).sum();
        }
        dcol.noalias() = w.transpose() * dy;
        T *dx = grad_input.data() + b * in_channels_ * n;
        for (size_t c = 0; c < in_channels_; ++c) {
            for (size_t j = 0; j < kernel_; ++j) {
                const T *src = dcol.data() + (c * kernel_ + j) * n_out;
                T *dst = dx + c * n + j;
                for (size_t t = 0; t < n_out; ++t) {
                    dst[t * stride_] += src[t];
                }
            }
        }
    }
    return grad_input;
}

// ---------------------------------------------------------------- LeakyReLU

template <typename T>
LeakyReLU<T>::LeakyReLU(double slope) : slope_(slope) {
    if (!(slope > 0.0 && slope < 1.0)) {
        throw DomainError("leaky_relu: slope must be in (0, 1)");
    }
}

template <typename T>
Tensor<T> LeakyReLU<T>::forward(const Tensor<T> &input) {
    input_ = input;
    Tensor<T> out = input;
    const T a = static_cast<T>(slope_);
    for (T &v : out.storage()) {
        v = v > T{0} ? v : a * v;
    }
    return out;
}

template <typename T>
Tensor<T> LeakyReLU<T>::backward(const Tensor<T> &grad_output) {
    Tensor<T> grad = grad_output;
    const T a = static_cast<T>(slope_);
    for (size_t i = 0; i < grad.size(); ++i) {
        if (input_[i] < T{0}) {
            grad[i] *= a;
        }
    }
    return grad;
}

// ---------------------------------------------------------------- MaxPool1d

template <typename T>
MaxPool1d<T>::MaxPool1d(size_t window, size_t stride) : window_(window), stride_(stride) {
    if (window == 0 || stride == 0) {
        throw ShapeError("maxpool1d: window and stride must be >= 1");
    }
}

template <typename T>
Shape MaxPool1d<T>::output_shape(const Shape &input) const {
    expect_rank(input, 3, "maxpool1d");
    if (input[2] < window_) {
        throw ShapeError("maxpool1d: window " + std::to_string(window_) + " longer than input " + shape_str(input));
    }
    return {input[0], input[1], (input[2] - window_) / stride_ + 1};
}

template <typename T>
Tensor<T> MaxPool1d<T>::forward(const Tensor<T> &input) {
    Shape out_shape = output_shape(input.shape());
    input_shape_ = input.shape();
    const size_t n = input.dim(2), n_out = out_shape[2];
    const size_t rows = input.dim(0) * input.dim(1);
    Tensor<T> out(out_shape);
    argmax_.resize(rows * n_out);
    for (size_t r = 0; r < rows; ++r) {
        const T *x = input.data() + r * n;
        for (size_t t = 0; t < n_out; ++t) {
            size_t best = t * stride_;
            for (size_t j = best + 1; j < t * stride_ + window_; ++j) {
                if (x[j] > x[best]) {
                    best = j;
                }
            }
            out[r * n_out + t] = x[best];
            argmax_[r * n_out + t] = best;
        }
    }
    return out;
}

template <typename T>
Tensor<T> MaxPool1d<T>::backward(const Tensor<T> &grad_output) {
    Tensor<T> grad(input_shape_);
    const size_t n = input_shape_[2], n_out = grad_output.dim(2);
    const size_t rows = input_shape_[0] * input_shape_[1];
    for (size_t r = 0; r < rows; ++r) {
        for (size_t t = 0; t < n_out; ++t) {
            grad[r * n + argmax_[r * n_out + t]] += grad_output[r * n_out + t];
        }
    }
    return grad;
}

// ---------------------------------------------------------------- Dense

template <typename T>
Dense<T>::Dense(size_t in_features, size_t out_features)
    : in_features_(in_features),
      out_features_(out_features),
      weight_("weight", Tensor<T>({out_features, in_features})),
      bias_("bias", Tensor<T>({out_features})) {}

template <typename T>
void Dense<T>::initialize(RngStream &rng, double leaky_slope) {
    fill_uniform(weight_.value, kaiming_bound(in_features_, leaky_slope), rng);
    bias_.value.fill(T{0});
}

template <typename T>
Shape Dense<T>::output_shape(const Shape &input) const {
    expect_rank(input, 2, "dense");
    if (input[1] != in_features_) {
        throw ShapeError("dense: expected " + std::to_string(in_features_) + " features, got " + shape_str(input));
    }
    return {input[0], out_features_};
}

template <typename T>
Tensor<T> Dense<T>::forward(const Tensor<T> &input) {
    Shape out_shape = output_shape(input.shape());
    input_ = input;
    const size_t batch = input.dim(0);
    Tensor<T> out(out_shape);
    MapRM<T> y(out.data(), batch, out_features_);
    y.noalias() = ConstMapRM<T>(input.data(), batch, in_features_) *
                  ConstMapRM<T>(weight_.value.data(), out_features_, in_features_).transpose();
    Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>> b(bias_.value.data(), out_features_);
    y.rowwise() += b;
    return out;
}

template <typename T>
Tensor<T> Dense<T>::backward(const Tensor<T> &grad_output) {
    const size_t batch = input_.dim(0);
    ConstMapRM<T> dy(grad_output.data(), batch, out_features_);
    ConstMapRM<T> x(input_.data(), batch, in_features_);
    MapRM<T>(weight_.grad.data(), out_features_, in_features_).noalias() += dy.transpose() * x;
    Eigen::Map<Eigen::Matrix<T, 1, Eigen::Dynamic>>(bias_.grad.data(), out_features_) += dy.colwise().sum();
    Tensor<T> grad_input(input_.shape());
    MapRM<T>(grad_input.data(), batch, in_features_).noalias() =
        dy * ConstMapRM<T>(weight_.value.data(), out_features_, in_features_);
    return grad_input;
}

// ---------------------------------------------------------------- reshapes

template <typename T>
Shape Flatten<T>::output_shape(const Shape &input) const {
    if (input.size() < 2) {
        throw ShapeError("flatten: expected a batched input, got " + shape_str(input));
    }
    return {input[0], shape_size(input) / input[0]};
}

template <typename T>
Tensor<T> Flatten<T>::forward(const Tensor<T> &input) {
    input_shape_ = input.shape();
    return input.reshaped(output_shape(input.shape()));
}

template <typename T>
Tensor<T> Flatten<T>::backward(const Tensor<T> &grad_output) {
    return grad_output.reshaped(input_shape_);
}

template <typename T>
Shape MapToSequence<T>::output_shape(const Shape &input) const {
    expect_rank(input, 3, "map_to_sequence");
    return {input[2], input[0], input[1]};
}

template <typename T>
Tensor<T> MapToSequence<T>::forward(const Tensor<T> &input) {
    const size_t batch = input.dim(0), f = input.dim(1), n = input.dim(2);
    Tensor<T> out(output_shape(input.shape()));
    for (size_t b = 0; b < batch; ++b) {
        for (size_t c = 0; c < f; ++c) {
            for (size_t t = 0; t < n; ++t) {
                out[(t * batch + b) * f + c] = input[(b * f + c) * n + t];
            }
        }
    }
    return out;
}

template <typename T>
Tensor<T> MapToSequence<T>::backward(const Tensor<T> &grad_output) {
    const size_t n = grad_output.dim(0), batch = grad_output.dim(1), f = grad_output.dim(2);
    Tensor<T> grad({batch, f, n});
    for (size_t b = 0; b < batch; ++b) {
        for (size_t c = 0; c < f; ++c) {
            for (size_t t = 0; t < n; ++t) {
                grad[(b * f + c) * n + t] = grad_output[(t * batch + b) * f + c];
            }
        }
    }
    return grad;
}

template <typename T>
VectorToSequence<T>::VectorToSequence(size_t segments) : segments_(segments) {
    if (segments == 0) {
        throw ShapeError("vector_to_sequence: segments must be >= 1");
    }
}

template <typename T>
Shape VectorToSequence<T>::output_shape(const Shape &input) const {
    expect_rank(input, 2, "vector_to_sequence");
    if (input[1] % segments_ != 0) {
        throw ShapeError("vector_to_sequence: " + std::to_string(input[1]) + " features do not split into " +
                         std::to_string(segments_) + " segments");
    }
    return {segments_, input[0], input[1] / segments_};
}

template <typename T>
Tensor<T> VectorToSequence<T>::forward(const Tensor<T> &input) {
    Shape out_shape = output_shape(input.shape());
    const size_t batch = input.dim(0), width = out_shape[2];
    Tensor<T> out(out_shape);
    for (size_t t = 0; t < segments_; ++t) {
        for (size_t b = 0; b < batch; ++b) {
            const T *src = input.data() + b * input.dim(1) + t * width;
            std::copy(src, src + width, out.data() + (t * batch + b) * width);
        }
    }
    return out;
}

template <typename T>
Tensor<T> VectorToSequence<T>::backward(const Tensor<T> &grad_output) {
    const size_t batch = grad_output.dim(1), width = grad_output.dim(2);
    Tensor<T> grad({batch, segments_ * width});
    for (size_t t = 0; t < segments_; ++t) {
        for (size_t b = 0; b < batch; ++b) {
            const T *src = grad_output.data() + (t * batch + b) * width;
            std::copy(src, src + width, grad.data() + b * segments_ * width + t * width);
        }
    }
    return grad;
}

template class Conv1d<float>;
template class Conv1d<double>;
template class Conv1d<long double>;
template class LeakyReLU<float>;
template class LeakyReLU<double>;
template class LeakyReLU<long double>;
template class MaxPool1d<float>;
template class MaxPool1d<double>;
template class MaxPool1d<long double>;
template class Dense<float>;
template class Dense<double>;
template class Dense<long double>;
template class Flatten<float>;
template class Flatten<double>;
template class Flatten<long double>;
template class MapToSequence<float>;
template class MapToSequence<double>;
template class MapToSequence<long double>;
template class VectorToSequence<float>;
template class VectorToSequence<double>;
template class VectorToSequence<long double>;

}  // namespace entclass::nn
