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

#ifndef ENTCLASS_NN_LSTM_H
#define ENTCLASS_NN_LSTM_H

#include <string>
#include <utility>
#include <vector>

#include "entclass/nn/layer.h"

namespace entclass::nn {

/// Weights of one LSTM direction. Gate blocks are stacked in the order
/// input (i), forget (f), candidate (g), output (o):
///   w_input      (4H, F)   input-to-gate
///   w_recurrent  (4H, H)   hidden-to-gate
///   bias         (4H)
template <typename T>
struct LstmParams {
    size_t input_size = 0;
    size_t hidden = 0;
    Parameter<T> w_input;
    Parameter<T> w_recurrent;
    Parameter<T> bias;

    LstmParams() = default;
    LstmParams(size_t input_size, size_t hidden, const std::string &prefix);

    /// U(-1/sqrt(H), 1/sqrt(H)) everywhere, then +1 on the forget-gate bias.
    void initialize(RngStream &rng);
    std::vector<Parameter<T> *> parameters() { return {&w_input, &w_recurrent, &bias}; }
};

/// One LSTM step on a batch: x (B, F), h_prev (B, H), c_prev (B, H).
///   i = sig(.), f = sig(.), g = tanh(.), o = sig(.)
///   c = f * c_prev + i * g,  h = o * tanh(c)
/// Returns (h, c).
template <typename T>
std::pair<Tensor<T>, Tensor<T>> lstm_cell(const Tensor<T> &x, const Tensor<T> &h_prev, const Tensor<T> &c_prev,
                                          const LstmParams<T> &params);

enum class SummaryMode {
    /// concat(forward hidden at t = T-1, backward hidden at t = 0)
    kLast,
    /// concat(mean_t forward hidden, mean_t backward hidden)
    kMean,
};

std::string to_string(SummaryMode mode);
SummaryMode parse_summary_mode(const std::string &text);

/// Bidirectional LSTM over a time-major sequence (T, B, F) -> summary (B, 2H).
///
/// The forward direction runs t = 0..T-1 and the backward direction
/// t = T-1..0, both from zero initial (h, c). backward() is full
/// (untruncated) backpropagation through time in both directions.
template <typename T>
class BiLstm final : public Layer<T> {
   public:
    BiLstm(size_t input_size, size_t hidden, SummaryMode summary = SummaryMode::kLast);

    void initialize(RngStream &rng);

    std::string kind() const override { return "bilstm"; }
    Shape output_shape(const Shape &input) const override;
    Tensor<T> forward(const Tensor<T> &input) override;
    Tensor<T> backward(const Tensor<T> &grad_output) override;
    std::vector<Parameter<T> *> parameters() override;
    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<BiLstm>(*this); }

    /// Per-step hidden states from the last forward(): (T, B, 2H), forward
    /// direction in [0, H), backward direction in [H, 2H).
    const Tensor<T> &step_outputs() const { return step_outputs_; }

    LstmParams<T> &forward_params() { return fwd_.params; }
    LstmParams<T> &backward_params() { return bwd_.params; }
    size_t input_size() const { return input_size_; }
    size_t hidden() const { return hidden_; }
    SummaryMode summary() const { return summary_; }

   private:
    struct Direction {
        LstmParams<T> params;
        bool reverse = false;
        // Caches in time order, each (T*B, ...) with step t at rows [t*B, (t+1)*B).
        MatrixRM<T> gates;   // activated gates (T*B, 4H)
        MatrixRM<T> cells;   // c_t (T*B, H)
        MatrixRM<T> tanh_c;  // tanh(c_t)
        MatrixRM<T> hidden;  // h_t

        void run(const ConstMapRM<T> &x, size_t steps, size_t batch);
        /// grad_h: (T*B, H) gradient w.r.t. h_t in time order. Adds dx into grad_x.
        void backprop(const ConstMapRM<T> &x, const MatrixRM<T> &grad_h, size_t steps, size_t batch,
                      MapRM<T> &grad_x);
    };

    size_t input_size_, hidden_;
    SummaryMode summary_;
    Direction fwd_, bwd_;
    Shape input_shape_;
    Tensor<T> input_;
    Tensor<T> step_outputs_;
};

}  // namespace entclass::nn

#endif
