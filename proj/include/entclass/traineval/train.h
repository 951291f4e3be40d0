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

#ifndef ENTCLASS_TRAINEVAL_TRAIN_H
#define ENTCLASS_TRAINEVAL_TRAIN_H

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entclass/dataset/dataset.h"
#include "entclass/models/model.h"
#include "json.hpp"

namespace entclass {

struct TrainConfig {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    /// 0 means min(32, training-set size).
    size_t batch_size = 0;
    size_t epochs = 100;
    uint64_t seed = 0;
    /// Evaluate on the test set every this many epochs (and after the last); 0 disables.
    size_t eval_every = 0;
    /// Multiply the learning rate by lr_decay_factor every lr_decay_every epochs; 0 disables.
    size_t lr_decay_every = 0;
    double lr_decay_factor = 1.0;

    size_t resolved_batch_size(size_t n_train) const;
    /// Throws SchemaError.
    void validate() const;
    nlohmann::json to_json() const;
    static TrainConfig from_json(const nlohmann::json &j);
    bool operator==(const TrainConfig &) const = default;
};

/// First and second moment estimates for one parameter tensor.
template <typename T>
struct AdamMoments {
    std::vector<T> m;
    std::vector<T> v;
};

/// One bias-corrected Adam update at step t >= 1:
///   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2
///   theta <- theta - lr * m_hat / (sqrt(v_hat) + eps)
/// Throws ShapeError on size mismatch and DomainError for t == 0.
template <typename T>
void adam_step(std::span<T> theta, std::span<const T> grad, AdamMoments<T> &state, uint64_t t,
               const TrainConfig &config, double learning_rate);

/// Adam over a fixed parameter list.
template <typename T>
class AdamOptimizer {
   public:
    AdamOptimizer(std::vector<nn::Parameter<T> *> params, const TrainConfig &config);
    void step(double learning_rate);
    uint64_t steps() const { return t_; }

   private:
    std::vector<nn::Parameter<T> *> params_;
    std::vector<AdamMoments<T>> moments_;
    TrainConfig config_;
    uint64_t t_ = 0;
};

struct LossHistory {
    /// Sample-weighted mean training cross-entropy of each epoch.
    std::vector<double> mean_loss;
    /// Test accuracy for the epochs it was evaluated at.
    std::vector<std::optional<double>> test_accuracy;
    /// Wall-clock seconds spent in each epoch's training pass.
    std::vector<double> epoch_seconds;

    size_t epochs() const { return mean_loss.size(); }
    /// Columns: epoch, mean_loss, test_accuracy (blank when not evaluated).
    std::string to_csv() const;
};

/// Mini-batch training: each epoch draws a permutation from
/// derive_stream(seed, epoch), walks it in fixed-size batches (the last one
/// may be short), and applies one Adam step per batch. Throws NumericError if
/// an epoch loss is non-finite or exceeds 1e3.
template <typename T>
LossHistory train(Model<T> &model, const Dataset &train_set, const Dataset *test_set, const TrainConfig &config);

/// Checks that a dataset matches the model's feature length and class count.
void check_compatible(const ModelConfig &model, const Dataset &data, const std::string &what);

}  // namespace entclass

#endif
