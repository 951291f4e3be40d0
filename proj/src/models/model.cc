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

#include "entclass/models/model.h"

#include <algorithm>
#include <cctype>

#include "entclass/core/error.h"
#include "entclass/nn/layers.h"
#include "entclass/nn/loss.h"

namespace entclass {

using nn::Layer;

std::string to_string(Architecture arch) {
    switch (arch) {
        case Architecture::kArchi1:
            return "ARCHI1";
        case Architecture::kArchi2:
            return "ARCHI2";
        case Architecture::kCnn:
            return "CNN";
        case Architecture::kBiLstm:
            return "BILSTM";
        case Architecture::kMlp:
            return "MLP";
    }
    return "?";
}

Architecture parse_architecture(const std::string &text) {
    std::string upper = text;
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    for (Architecture a : {Architecture::kArchi1, Architecture::kArchi2, Architecture::kCnn, Architecture::kBiLstm,
                           Architecture::kMlp}) {
        if (to_string(a) == upper) {
            return a;
        }
    }
    throw DomainError("unknown architecture '" + text + "' (expected ARCHI1, ARCHI2, CNN, BILSTM or MLP)");
}

// ---------------------------------------------------------------- config

ModelConfig ModelConfig::defaults(Architecture arch, size_t feature_length, size_t n_classes) {
    ModelConfig c;
    c.architecture = arch;
    c.feature_length = feature_length;
    c.n_classes = n_classes;
    if (arch == Architecture::kCnn) {
        c.dense_hidden = {64};
    } else if (arch == Architecture::kMlp) {
        c.dense_hidden = {128, 64};
    }
    return c;
}

static bool uses_conv(Architecture a) {
    return a == Architecture::kArchi1 || a == Architecture::kArchi2 || a == Architecture::kCnn;
}

std::pair<size_t, size_t> ModelConfig::conv_output() const {
    size_t channels = 1;
    size_t length = feature_length;
    for (size_t i = 0; i < conv.size(); ++i) {
        const ConvStage &s = conv[i];
        if (s.out_channels == 0 || s.kernel == 0 || s.stride == 0) {
            throw SchemaError("conv stage " + std::to_string(i) + ": channels, kernel and stride must be >= 1");
        }
        if (length < s.kernel) {
            throw SchemaError("conv stage " + std::to_string(i) + ": kernel " + std::to_string(s.kernel) +
                              " exceeds input length " + std::to_string(length));
        }
        length = (length - s.kernel) / s.stride + 1;
        channels = s.out_channels;
        if (s.pool_window > 0) {
            if (s.pool_stride == 0) {
                throw SchemaError("conv stage " + std::to_string(i) + ": pool stride must be >= 1");
            }
            if (length < s.pool_window) {
                throw SchemaError("conv stage " + std::to_string(i) + ": pool window " +
                                  std::to_string(s.pool_window) + " exceeds length " + std::to_string(length));
            }
            length = (length - s.pool_window) / s.pool_stride + 1;
        }
    }
    return {channels, length};
}

void ModelConfig::validate() const {
    if (feature_length == 0 || n_classes < 2) {
        throw SchemaError("model needs feature_length >= 1 and n_classes >= 2");
    }
    if (n_classes > 65535) {
        throw SchemaError("n_classes exceeds the 16-bit label range");
    }
    if (!(leaky_slope > 0.0 && leaky_slope < 1.0)) {
        throw SchemaError("leaky_slope must lie in (0, 1)");
    }
    for (size_t w : dense_hidden) {
        if (w == 0) {
            throw SchemaError("dense_hidden widths must be >= 1");
        }
    }
    if (uses_conv(architecture)) {
        if (conv.empty()) {
            throw SchemaError(to_string(architecture) + " needs at least one conv stage");
        }
        conv_output();
    }
    if (architecture != Architecture::kCnn && architecture != Architecture::kMlp && lstm_hidden == 0) {
        throw SchemaError("lstm_hidden must be >= 1");
    }
    if (architecture == Architecture::kArchi1) {
        size_t width = archi1_projection == 0 ? conv_output().first : archi1_projection;
        if (archi1_segments == 0 || width % archi1_segments != 0) {
            throw SchemaError("archi1 projection width " + std::to_string(width) + " is not divisible by " +
                              std::to_string(archi1_segments) + " segments");
        }
    }
}

nlohmann::json ModelConfig::to_json() const {
    nlohmann::json stages = nlohmann::json::array();
    for (const ConvStage &s : conv) {
        stages.push_back({{"out_channels", s.out_channels},
                          {"kernel", s.kernel},
                          {"stride", s.stride},
                          {"pool_window", s.pool_window},
                          {"pool_stride", s.pool_stride}});
    }
    return {{"architecture", to_string(architecture)},
            {"feature_length", feature_length},
            {"n_classes", n_classes},
            {"conv", stages},
            {"leaky_slope", leaky_slope},
            {"lstm_hidden", lstm_hidden},
            {"dense_hidden", dense_hidden},
            {"archi1_projection", archi1_projection},
            {"archi1_segments", archi1_segments},
            {"summary", nn::to_string(summary)},
            {"init_seed", init_seed}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw SchemaError("model config must be a JSON object");
    }
    static const std::vector<std::string> known = {
        "architecture", "feature_length", "n_classes",       "conv",           "leaky_slope", "lstm_hidden",
        "dense_hidden", "archi1_projection", "archi1_segments", "summary", "init_seed",   "config_version",
        "comment"};
    for (const auto &item : j.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            throw SchemaError("model config: unknown key '" + item.key() + "'");
        }
    }
    ModelConfig c;
    try {
        if (j.contains("architecture")) {
            c = defaults(parse_architecture(j.at("architecture").get<std::string>()), c.feature_length,
                         c.n_classes);
        }
        if (j.contains("feature_length")) c.feature_length = j.at("feature_length").get<size_t>();
        if (j.contains("n_classes")) c.n_classes = j.at("n_classes").get<size_t>();
        if (j.contains("conv")) {
            c.conv.clear();
            for (const auto &s : j.at("conv")) {
                ConvStage stage;
                stage.out_channels = s.at("out_channels").get<size_t>();
                stage.kernel = s.at("kernel").get<size_t>();
                stage.stride = s.value("stride", size_t{1});
                stage.pool_window = s.value("pool_window", size_t{2});
                stage.pool_stride = s.value("pool_stride", stage.pool_window);
                c.conv.push_back(stage);
            }
        }
        if (j.contains("leaky_slope")) c.leaky_slope = j.at("leaky_slope").get<double>();
        if (j.contains("lstm_hidden")) c.lstm_hidden = j.at("lstm_hidden").get<size_t>();
        if (j.contains("dense_hidden")) c.dense_hidden = j.at("dense_hidden").get<std::vector<size_t>>();
        if (j.contains("archi1_projection")) c.archi1_projection = j.at("archi1_projection").get<size_t>();
        if (j.contains("archi1_segments")) c.archi1_segments = j.at("archi1_segments").get<size_t>();
        if (j.contains("summary")) c.summary = nn::parse_summary_mode(j.at("summary").get<std::string>());
        if (j.contains("init_seed")) c.init_seed = j.at("init_seed").get<uint64_t>();
    } catch (const nlohmann::json::exception &e) {
        throw SchemaError(std::string("model config: ") + e.what());
    } catch (const DomainError &e) {
        throw SchemaError(std::string("model config: ") + e.what());
    }
    c.validate();
    return c;
}

// ---------------------------------------------------------------- model

namespace {

/// (B, M) -> (B, 1, M)
template <typename T>
class AddChannelAxis final : public Layer<T> {
   public:
    std::string kind() const override { return "add_channel"; }
    Shape output_shape(const Shape &input) const override {
        if (input.size() != 2) {
            throw ShapeError("add_channel: expected (B, M), got " + shape_str(input));
        }
        return {input[0], 1, input[1]};
    }
    Tensor<T> forward(const Tensor<T> &input) override { return input.reshaped(output_shape(input.shape())); }
    Tensor<T> backward(const Tensor<T> &grad) override { return grad.reshaped({grad.dim(0), grad.dim(2)}); }
    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<AddChannelAxis>(*this); }
};

}  // namespace

template <typename T>
Model<T>::Model(const ModelConfig &config) : config_(config) {
    config_.validate();
    build();
}

template <typename T>
Model<T>::Model(const Model &other) : config_(other.config_), trace_(other.trace_) {
    for (const auto &l : other.layers_) {
        layers_.push_back(l->clone());
    }
}

template <typename T>
Model<T> &Model<T>::operator=(const Model &other) {
    if (this != &other) {
        Model copy(other);
        *this = std::move(copy);
    }
    return *this;
}

template <typename T>
void Model<T>::build() {
    const ModelConfig &c = config_;
    const double slope = c.leaky_slope;
    // Every layer draws from its own stream so adding a layer never shifts
    // the initialization of the ones before it.
    uint64_t stream = 0;
    auto next_rng = [&] { return derive_stream(c.init_seed, stream++); };

    auto add_dense = [&](size_t in, size_t out, double gain_slope) {
        auto d = std::make_unique<nn::Dense<T>>(in, out);
        RngStream rng = next_rng();
        d->initialize(rng, gain_slope);
        layers_.push_back(std::move(d));
    };
    auto add_bilstm = [&](size_t in) {
        auto l = std::make_unique<nn::BiLstm<T>>(in, c.lstm_hidden, c.summary);
        RngStream rng = next_rng();
        l->initialize(rng);
        layers_.push_back(std::move(l));
    };
    auto add_conv_stack = [&] {
        layers_.push_back(std::make_unique<AddChannelAxis<T>>());
        size_t channels = 1;
        for (const ConvStage &s : c.conv) {
            auto conv = std::make_unique<nn::Conv1d<T>>(channels, s.out_channels, s.kernel, s.stride);
            RngStream rng = next_rng();
            conv->initialize(rng, slope);
            layers_.push_back(std::move(conv));
            layers_.push_back(std::make_unique<nn::LeakyReLU<T>>(slope));
            if (s.pool_window > 0) {
                layers_.push_back(std::make_unique<nn::MaxPool1d<T>>(s.pool_window, s.pool_stride));
            }
            channels = s.out_channels;
        }
    };
    auto add_dense_stack = [&](size_t in) {
        for (size_t w : c.dense_hidden) {
            add_dense(in, w, slope);
            layers_.push_back(std::make_unique<nn::LeakyReLU<T>>(slope));
            in = w;
        }
        // Output layer feeds softmax, not LeakyReLU: gain 1.
        add_dense(in, c.n_classes, 1.0);
    };

    const size_t two_h = 2 * c.lstm_hidden;
    switch (c.architecture) {
        case Architecture::kArchi1: {
            auto [f, n] = c.conv_output();
            add_conv_stack();
            layers_.push_back(std::make_unique<nn::Flatten<T>>());
            size_t width = c.archi1_projection == 0 ? f : c.archi1_projection;
            add_dense(f * n, width, 1.0);
            layers_.push_back(std::make_unique<nn::VectorToSequence<T>>(c.archi1_segments));
            add_bilstm(width / c.archi1_segments);
            add_dense(two_h, c.n_classes, 1.0);
            break;
        }
        case Architecture::kArchi2: {
            auto [f, n] = c.conv_output();
            (void)n;
            add_conv_stack();
            layers_.push_back(std::make_unique<nn::MapToSequence<T>>());
            add_bilstm(f);
            add_dense(two_h, c.n_classes, 1.0);
            break;
        }
        case Architecture::kCnn: {
            auto [f, n] = c.conv_output();
            add_conv_stack();
            layers_.push_back(std::make_unique<nn::Flatten<T>>());
            add_dense_stack(f * n);
            break;
        }
        case Architecture::kBiLstm:
            layers_.push_back(std::make_unique<nn::VectorToSequence<T>>(c.feature_length));
            add_bilstm(1);
            add_dense(two_h, c.n_classes, 1.0);
            break;
        case Architecture::kMlp:
            add_dense_stack(c.feature_length);
            break;
    }

    Shape shape = {1, c.feature_length};
    trace_.clear();
    for (const auto &l : layers_) {
        Shape out = l->output_shape(shape);
        trace_.push_back({l->kind(), shape, out, l->parameter_count()});
        shape = out;
    }
    if (shape != Shape{1, c.n_classes}) {
        throw ShapeError("model output shape " + shape_str(shape) + " does not match K");
    }
}

template <typename T>
Tensor<T> Model<T>::logits(const Tensor<T> &batch) {
    if (batch.rank() != 2 || batch.dim(1) != config_.feature_length) {
        throw ShapeError("model expects (B, " + std::to_string(config_.feature_length) + ") input, got " +
                         shape_str(batch.shape()));
    }
    Tensor<T> x = batch;
    for (auto &l : layers_) {
        x = l->forward(x);
    }
    return x;
}

template <typename T>
Tensor<T> Model<T>::forward(const Tensor<T> &batch) {
    return nn::softmax(logits(batch));
}

template <typename T>
std::vector<T> Model<T>::forward(std::span<const float> features) {
    if (features.size() != config_.feature_length) {
        throw ShapeError("feature vector length " + std::to_string(features.size()) + " != M = " +
                         std::to_string(config_.feature_length));
    }
    return forward(make_batch<T>(features, config_.feature_length)).to_vector();
}

template <typename T>
void Model<T>::backward(const Tensor<T> &grad_logits) {
    Tensor<T> g = grad_logits;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
        g = (*it)->backward(g);
    }
}

template <typename T>
uint16_t argmax_label(std::span<const T> p) {
    size_t best = 0;
    for (size_t k = 1; k < p.size(); ++k) {
        if (p[k] > p[best]) {
            best = k;
        }
    }
    return static_cast<uint16_t>(best);
}

template <typename T>
std::vector<uint16_t> Model<T>::predict(const Tensor<T> &batch) {
    Tensor<T> p = forward(batch);
    const size_t k = config_.n_classes;
    std::vector<uint16_t> out(p.dim(0));
    for (size_t b = 0; b < out.size(); ++b) {
        out[b] = argmax_label<T>(std::span<const T>(p.data() + b * k, k));
    }
    return out;
}

template <typename T>
uint16_t Model<T>::predict(std::span<const float> features) {
    std::vector<T> p = forward(features);
    return argmax_label<T>(p);
}

template <typename T>
std::vector<nn::Parameter<T> *> Model<T>::parameters() {
    std::vector<nn::Parameter<T> *> out;
    for (auto &l : layers_) {
        for (nn::Parameter<T> *p : l->parameters()) {
            out.push_back(p);
        }
    }
    return out;
}

template <typename T>
std::vector<std::string> Model<T>::parameter_names() const {
    std::vector<std::string> out;
    for (size_t i = 0; i < layers_.size(); ++i) {
        for (nn::Parameter<T> *p : layers_[i]->parameters()) {
            out.push_back(std::to_string(i) + "." + layers_[i]->kind() + "." + p->name);
        }
    }
    return out;
}

template <typename T>
void Model<T>::zero_grad() {
    for (auto &l : layers_) {
        l->zero_grad();
    }
}

template <typename T>
size_t Model<T>::param_count() const {
    size_t n = 0;
    for (const auto &l : layers_) {
        n += l->parameter_count();
    }
    return n;
}

template <typename T>
nn::Checkpoint Model<T>::to_checkpoint() const {
    nn::Checkpoint ck;
    ck.config = config_.to_json();
    std::vector<std::string> names = parameter_names();
    size_t i = 0;
    for (const auto &l : layers_) {
        for (nn::Parameter<T> *p : l->parameters()) {
            ck.tensors.push_back({names[i++], p->value.template cast<float>()});
        }
    }
    return ck;
}

template <typename T>
Model<T> Model<T>::from_checkpoint(const nn::Checkpoint &checkpoint) {
    Model model(ModelConfig::from_json(checkpoint.config));
    std::vector<std::string> names = model.parameter_names();
    std::vector<nn::Parameter<T> *> params = model.parameters();
    if (checkpoint.tensors.size() != params.size()) {
        throw SchemaError("checkpoint has " + std::to_string(checkpoint.tensors.size()) +
                          " tensors, model expects " + std::to_string(params.size()));
    }
    for (size_t i = 0; i < params.size(); ++i) {
        const nn::NamedTensor &t = checkpoint.tensors[i];
        if (t.name != names[i] || t.values.shape() != params[i]->value.shape()) {
            throw SchemaError("checkpoint tensor " + t.name + " " + shape_str(t.values.shape()) +
                              " does not match " + names[i] + " " + shape_str(params[i]->value.shape()));
        }
        params[i]->value = t.values.template cast<T>();
    }
    return model;
}

template <typename T>
Tensor<T> make_batch(std::span<const float> rows, size_t feature_length) {
    if (feature_length == 0 || rows.size() % feature_length != 0) {
        throw ShapeError("batch buffer is not a whole number of feature rows");
    }
    std::vector<T> data(rows.begin(), rows.end());
    return Tensor<T>({rows.size() / feature_length, feature_length}, std::move(data));
}

template class Model<float>;
template class Model<double>;
template uint16_t argmax_label<float>(std::span<const float>);
template uint16_t argmax_label<double>(std::span<const double>);
template Tensor<float> make_batch<float>(std::span<const float>, size_t);
template Tensor<double> make_batch<double>(std::span<const float>, size_t);

}  // namespace entclass
