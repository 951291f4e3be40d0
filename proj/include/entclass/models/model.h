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

#ifndef ENTCLASS_MODELS_MODEL_H
#define ENTCLASS_MODELS_MODEL_H

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "entclass/nn/checkpoint.h"
#include "entclass/nn/layer.h"
#include "entclass/nn/lstm.h"
#include "json.hpp"

namespace entclass {

enum class Architecture { kArchi1, kArchi2, kCnn, kBiLstm, kMlp };

/// "ARCHI1", "ARCHI2", "CNN", "BILSTM", "MLP"
std::string to_string(Architecture arch);
/// Case-insensitive inverse of to_string; throws DomainError.
Architecture parse_architecture(const std::string &text);

/// One convolution stage: Conv1d(out_channels, kernel, stride) -> LeakyReLU
/// -> MaxPool1d(pool_window, pool_stride). pool_window == 0 skips the pool.
struct ConvStage {
    size_t out_channels = 0;
    size_t kernel = 0;
    size_t stride = 1;
    size_t pool_window = 2;
    size_t pool_stride = 2;
    bool operator==(const ConvStage &) const = default;
};

struct ModelConfig {
    Architecture architecture = Architecture::kArchi2;
    /// Input feature length M.
    size_t feature_length = 216;
    /// Number of classes K.
    size_t n_classes = 6;
    std::vector<ConvStage> conv = {{16, 5, 1, 2, 2}, {32, 3, 1, 2, 2}};
    double leaky_slope = 0.01;
    size_t lstm_hidden = 64;
    /// Hidden dense widths (each followed by LeakyReLU) for the CNN and MLP
    /// baselines. The recurrent models go straight from the BiLSTM to dense(K).
    std::vector<size_t> dense_hidden;
    /// ARCHI1 dense projection width; 0 means the conv channel count F.
    size_t archi1_projection = 0;
    /// ARCHI1 sequence length the projection is split into.
    size_t archi1_segments = 1;
    nn::SummaryMode summary = nn::SummaryMode::kLast;
    uint64_t init_seed = 0;

    /// Pinned defaults for an architecture and problem size.
    static ModelConfig defaults(Architecture arch, size_t feature_length, size_t n_classes);

    /// Throws SchemaError on a malformed configuration.
    void validate() const;
    /// (channels F, length N) after the conv stack.
    std::pair<size_t, size_t> conv_output() const;

    nlohmann::json to_json() const;
    /// Missing keys keep their defaults; throws SchemaError on bad values.
    static ModelConfig from_json(const nlohmann::json &j);
    bool operator==(const ModelConfig &) const = default;
};

struct ShapeTraceEntry {
    std::string layer;
    Shape input;
    Shape output;
    size_t parameters = 0;
};

/// A built network: (B, M) features -> (B, K) logits.
///
/// forward()/logits() cache activations for backward(), so one instance
/// serves one thread at a time; copy the model for concurrent inference.
template <typename T>
class Model {
   public:
    /// Builds and initializes from config.init_seed.
    explicit Model(const ModelConfig &config);
    Model(const Model &other);
    Model &operator=(const Model &other);
    Model(Model &&) noexcept = default;
    Model &operator=(Model &&) noexcept = default;

    const ModelConfig &config() const { return config_; }
    /// Per-sample (batch 1) shapes through every layer.
    const std::vector<ShapeTraceEntry> &shape_trace() const { return trace_; }
    const std::vector<std::unique_ptr<nn::Layer<T>>> &layers() const { return layers_; }

    /// (B, M) -> (B, K) raw scores.
    Tensor<T> logits(const Tensor<T> &batch);
    /// (B, M) -> (B, K) class probabilities.
    Tensor<T> forward(const Tensor<T> &batch);
    /// Probabilities for one feature vector.
    std::vector<T> forward(std::span<const float> features);
    /// Backpropagates d loss / d logits from the last logits() call, accumulating
    /// parameter gradients.
    void backward(const Tensor<T> &grad_logits);

    /// argmax of the probabilities, ties to the lowest label.
    std::vector<uint16_t> predict(const Tensor<T> &batch);
    uint16_t predict(std::span<const float> features);

    /// Parameters in a fixed order; names are "<layer index>.<layer kind>.<tensor>".
    std::vector<nn::Parameter<T> *> parameters();
    std::vector<std::string> parameter_names() const;
    void zero_grad();
    size_t param_count() const;

    nn::Checkpoint to_checkpoint() const;
    /// Rebuilds from the embedded config and loads the stored values.
    static Model from_checkpoint(const nn::Checkpoint &checkpoint);

   private:
    void build();

    ModelConfig config_;
    std::vector<std::unique_ptr<nn::Layer<T>>> layers_;
    std::vector<ShapeTraceEntry> trace_;
};

/// Index of the largest entry, the lowest index on ties.
template <typename T>
uint16_t argmax_label(std::span<const T> probabilities);

/// (n, M) tensor from dataset rows [begin, begin + n) of a row-major float buffer.
template <typename T>
Tensor<T> make_batch(std::span<const float> rows, size_t feature_length);

}  // namespace entclass

#endif
