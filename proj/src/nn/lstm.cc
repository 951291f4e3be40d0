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

#include "entclass/nn/lstm.h"

#include <cmath>

#include "entclass/core/error.h"

namespace entclass::nn {

namespace {

template <typename Derived>
void sigmoid_inplace(Eigen::ArrayBase<Derived> &&a) {
    a = (typename Derived::Scalar(1) + (-a).exp()).inverse();
}

// Activates a (B, 4H) pre-activation block in place: sig | sig | tanh | sig.
template <typename Block>
void activate_gates(Block &&g, size_t h) {
    const Eigen::Index hh = static_cast<Eigen::Index>(h);
    sigmoid_inplace(g.leftCols(2 * hh).array());
    g.middleCols(2 * hh, hh).array() = g.middleCols(2 * hh, hh).array().tanh();
    sigmoid_inplace(g.rightCols(hh).array());
}

}  // namespace

std::string to_string(SummaryMode mode) { return mode == SummaryMode::kMean ? "mean" : "last"; }

SummaryMode parse_summary_mode(const std::string &text) {
    if (text == "last") {
        return SummaryMode::kLast;
    }
    if (text == "mean") {
        return SummaryMode::kMean;
    }
    throw DomainError("unknown BiLSTM summary mode '" + text + "' (expected last|mean)");
}

template <typename T>
LstmParams<T>::LstmParams(size_t input_size_, size_t hidden_, const std::string &prefix)
    : input_size(input_size_),
      hidden(hidden_),
      w_input(prefix + "w_input", Tensor<T>({4 * hidden_, input_size_})),
      w_recurrent(prefix + "w_recurrent", Tensor<T>({4 * hidden_, hidden_})),
      bias(prefix + "bias", Tensor<T>({4 * hidden_})) {}

template <typename T>
void LstmParams<T>::initialize(RngStream &rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
    fill_uniform(w_input.value, bound, rng);
    fill_uniform(w_recurrent.value, bound, rng);
    fill_uniform(bias.value, bound, rng);
    for (size_t j = hidden; j < 2 * hidden; ++j) {
        bias.value[j] += T{1};
    }
}

template <typename T>
std::pair<Tensor<T>, Tensor<T>> lstm_cell(const Tensor<T> &x, const Tensor<T> &h_prev, const Tensor<T> &c_prev,
                                          const LstmParams<T> &params) {
    const size_t batch = x.dim(0), h = params.hidden;
    if (x.rank() != 2 || x.dim(1) != params.input_size || h_prev.shape() != Shape{batch, h} ||
        c_prev.shape() != Shape{batch, h}) {
        throw ShapeError("lstm_cell: shape mismatch (x " + shape_str(x.shape()) + ", h " + shape_str(h_prev.shape()) +
                         ", c " + shape_str(c_prev.shape()) + ")");
    }
    MatrixRM<T> gates = ConstMapRM<T>(x.data(), batch, params.input_size) *
                            ConstMapRM<T>(params.w_input.value.data(), 4 * h, params.input_size).transpose() +
                        ConstMapRM<T>(h_prev.data(), batch, h) *
                            ConstMapRM<T>(params.w_recurrent.value.data(), 4 * h, h).transpose();
    gates.rowwise() += Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>>(params.bias.value.data(), 4 * h);
    activate_gates(gates, h);
    const Eigen::Index hh = static_cast<Eigen::Index>(h);
    Tensor<T> c({batch, h}), h_out({batch, h});
    MapRM<T> cm(c.data(), batch, h);
    cm.array() = gates.middleCols(hh, hh).array() * ConstMapRM<T>(c_prev.data(), batch, h).array() +
                 gates.leftCols(hh).array() * gates.middleCols(2 * hh, hh).array();
    MapRM<T>(h_out.data(), batch, h).array() = gates.rightCols(hh).array() * cm.array().tanh();
    return {h_out, c};
}

template <typename T>
void BiLstm<T>::Direction::run(const ConstMapRM<T> &x, size_t steps, size_t batch) {
    const size_t h = params.hidden;
    const Eigen::Index hh = static_cast<Eigen::Index>(h), bb = static_cast<Eigen::Index>(batch);
    ConstMapRM<T> w_in(params.w_input.value.data(), 4 * h, params.input_size);
    ConstMapRM<T> w_rec(params.w_recurrent.value.data(), 4 * h, h);
    gates.noalias() = x * w_in.transpose();
    gates.rowwise() += Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>>(params.bias.value.data(), 4 * h);
    cells.resize(static_cast<Eigen::Index>(steps * batch), hh);
    tanh_c.resize(cells.rows(), hh);
    hidden.resize(cells.rows(), hh);
    Eigen::Index prev = -1;
    for (size_t s = 0; s < steps; ++s) {
        const Eigen::Index t = static_cast<Eigen::Index>(reverse ? steps - 1 - s : s);
        auto g = gates.middleRows(t * bb, bb);
        if (prev >= 0) {
            g.noalias() += hidden.middleRows(prev * bb, bb) * w_rec.transpose();
        }
        activate_gates(g, h);
        auto c = cells.middleRows(t * bb, bb);
        if (prev >= 0) {
            c.array() = g.middleCols(hh, hh).array() * cells.middleRows(prev * bb, bb).array() +
                        g.leftCols(hh).array() * g.middleCols(2 * hh, hh).array();
        } else {
            c.array() = g.leftCols(hh).array() * g.middleCols(2 * hh, hh).array();
        }
        tanh_c.middleRows(t * bb, bb).array() = c.array().tanh();
        hidden.middleRows(t * bb, bb).array() = g.rightCols(hh).array() * tanh_c.middleRows(t * bb, bb).array();
        prev = t;
    }
}

template <typename T>
void BiLstm<T>::Direction::backprop(const ConstMapRM<T> &x, const MatrixRM<T> &grad_h, size_t steps, size_t batch,
                                    MapRM<T> &grad_x) {
    const size_t h = params.hidden;
    const Eigen::Index hh = static_cast<Eigen::Index>(h), bb = static_cast<Eigen::Index>(batch);
    const Eigen::Index rows = static_cast<Eigen::Index>(steps * batch);
    ConstMapRM<T> w_in(params.w_input.value.data(), 4 * h, params.input_size);
    ConstMapRM<T> w_rec(params.w_recurrent.value.data(), 4 * h, h);

    MatrixRM<T> d_gates(rows, 4 * hh);
    // Row block t holds h_{t-1} in processing order (zero at the first step).
    MatrixRM<T> h_prev = MatrixRM<T>::Zero(rows, hh);
    MatrixRM<T> dh_next = MatrixRM<T>::Zero(bb, hh);
    MatrixRM<T> dc_next = MatrixRM<T>::Zero(bb, hh);
    MatrixRM<T> dh(bb, hh), dc(bb, hh);

    for (size_t s = steps; s-- > 0;) {
        const Eigen::Index t = static_cast<Eigen::Index>(reverse ? steps - 1 - s : s);
        const Eigen::Index prev = s == 0 ? -1 : (reverse ? t + 1 : t - 1);
        auto g = gates.middleRows(t * bb, bb).array();
        auto i_gate = g.leftCols(hh);
        auto f_gate = g.middleCols(hh, hh);
        auto g_gate = g.middleCols(2 * hh, hh);
        auto o_gate = g.rightCols(hh);
        auto tc = tanh_c.middleRows(t * bb, bb).array();
        auto dg = d_gates.middleRows(t * bb, bb);

        dh = grad_h.middleRows(t * bb, bb) + dh_next;
        dc.array() = dh.array() * o_gate * (T{1} - tc.square()) + dc_next.array();

        dg.leftCols(hh).array() = dc.array() * g_gate * i_gate * (T{1} - i_gate);
        if (prev >= 0) {
            auto c_prev = cells.middleRows(prev * bb, bb).array();
            dg.middleCols(hh, hh).array() = dc.array() * c_prev * f_gate * (T{1} - f_gate);
            h_prev.middleRows(t * bb, bb) = hidden.middleRows(prev * bb, bb);
        } else {
            dg.middleCols(hh, hh).setZero();
        }
        dg.middleCols(2 * hh, hh).array() = dc.array() * i_gate * (T{1} - g_gate.square());
        dg.rightCols(hh).array() = dh.array() * tc * o_gate * (T{1} - o_gate);

        dc_next.array() = dc.array() * f_gate;
        dh_next.noalias() = dg * w_rec;
    }

    MapRM<T>(params.w_input.grad.data(), 4 * h, params.input_size).noalias() += d_gates.transpose() * x;
    MapRM<T>(params.w_recurrent.grad.data(), 4 * h, h).noalias() += d_gates.transpose() * h_prev;
    Eigen::Map<Eigen::Matrix<T, 1, Eigen::Dynamic>>(params.bias.grad.data(), 4 * h) += d_gates.colwise().sum();
    grad_x.noalias() += d_gates * w_in;
}

template <typename T>
BiLstm<T>::BiLstm(size_t input_size, size_t hidden, SummaryMode summary)
    : input_size_(input_size), hidden_(hidden), summary_(summary) {
    if (input_size == 0 || hidden == 0) {
        throw ShapeError("bilstm: input size and hidden size must be >= 1");
    }
    fwd_.params = LstmParams<T>(input_size, hidden, "fwd.");
    bwd_.params = LstmParams<T>(input_size, hidden, "bwd.");
    fwd_.reverse = false;
    bwd_.reverse = true;
}

template <typename T>
void BiLstm<T>::initialize(RngStream &rng) {
    fwd_.params.initialize(rng);
    bwd_.params.initialize(rng);
}

template <typename T>
std::vector<Parameter<T> *> BiLstm<T>::parameters() {
    auto out = fwd_.params.parameters();
    for (Parameter<T> *p : bwd_.params.parameters()) {
        out.push_back(p);
    }
    return out;
}

template <typename T>
Shape BiLstm<T>::output_shape(const Shape &input) const {
    if (input.size() != 3 || input[2] != input_size_) {
        throw ShapeError("bilstm: expected (T, B, " + std::to_string(input_size_) + ") input, got " +
                         shape_str(input));
    }
    return {input[1], 2 * hidden_};
}

template <typename T>
Tensor<T> BiLstm<T>::forward(const Tensor<T> &input) {
    Shape out_shape = output_shape(input.shape());
    input_shape_ = input.shape();
    input_ = input;
    const size_t steps = input.dim(0), batch = input.dim(1);
    const Eigen::Index hh = static_cast<Eigen::Index>(hidden_), bb = static_cast<Eigen::Index>(batch);
    ConstMapRM<T> x(input.data(), steps * batch, input_size_);
    fwd_.run(x, steps, batch);
    bwd_.run(x, steps, batch);

    step_outputs_ = Tensor<T>({steps, batch, 2 * hidden_});
    MapRM<T> all(step_outputs_.data(), steps * batch, 2 * hidden_);
    all.leftCols(hh) = fwd_.hidden;
    all.rightCols(hh) = bwd_.hidden;

    Tensor<T> out(out_shape);
    MapRM<T> y(out.data(), batch, 2 * hidden_);
    if (summary_ == SummaryMode::kLast) {
        y.leftCols(hh) = fwd_.hidden.middleRows(static_cast<Eigen::Index>(steps - 1) * bb, bb);
        y.rightCols(hh) = bwd_.hidden.topRows(bb);
    } else {
        y.setZero();
        for (size_t t = 0; t < steps; ++t) {
            y += all.middleRows(static_cast<Eigen::Index>(t) * bb, bb);
        }
        y /= static_cast<T>(steps);
    }
    return out;
}

template <typename T>
Tensor<T> BiLstm<T>::backward(const Tensor<T> &grad_output) {
    const size_t steps = input_shape_.at(0), batch = input_shape_[1];
    const Eigen::Index hh = static_cast<Eigen::Index>(hidden_), bb = static_cast<Eigen::Index>(batch);
    const Eigen::Index rows = static_cast<Eigen::Index>(steps * batch);
    ConstMapRM<T> dy(grad_output.data(), batch, 2 * hidden_);
    MatrixRM<T> grad_fwd = MatrixRM<T>::Zero(rows, hh);
    MatrixRM<T> grad_bwd = MatrixRM<T>::Zero(rows, hh);
    if (summary_ == SummaryMode::kLast) {
        grad_fwd.middleRows(static_cast<Eigen::Index>(steps - 1) * bb, bb) = dy.leftCols(hh);
        grad_bwd.topRows(bb) = dy.rightCols(hh);
    } else {
        const T scale = T{1} / static_cast<T>(steps);
        for (size_t t = 0; t < steps; ++t) {
            grad_fwd.middleRows(static_cast<Eigen::Index>(t) * bb, bb) = dy.leftCols(hh) * scale;
            grad_bwd.middleRows(static_cast<Eigen::Index>(t) * bb, bb) = dy.rightCols(hh) * scale;
        }
    }
    Tensor<T> grad_input(input_shape_);
    MapRM<T> dx(grad_input.data(), rows, input_size_);
    ConstMapRM<T> x(input_.data(), rows, input_size_);
    fwd_.backprop(x, grad_fwd, steps, batch, dx);
    bwd_.backprop(x, grad_bwd, steps, batch, dx);
    return grad_input;
}

template struct LstmParams<float>;
template struct LstmParams<double>;
template struct LstmParams<long double>;
template std::pair<Tensor<float>, Tensor<float>> lstm_cell(const Tensor<float> &, const Tensor<float> &,
                                                           const Tensor<float> &, const LstmParams<float> &);
template std::pair<Tensor<double>, Tensor<double>> lstm_cell(const Tensor<double> &, const Tensor<double> &,
                                                             const Tensor<double> &, const LstmParams<double> &);
template class BiLstm<float>;
template class BiLstm<double>;
template class BiLstm<long double>;

}  // namespace entclass::nn
