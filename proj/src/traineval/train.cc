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

#include "entclass/traineval/train.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "entclass/core/error.h"
#include "entclass/nn/loss.h"
#include "entclass/traineval/metrics.h"

namespace entclass {

size_t TrainConfig::resolved_batch_size(size_t n_train) const {
    if (batch_size != 0) {
        return batch_size;
    }
    return std::max<size_t>(1, std::min<size_t>(32, n_train));
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw SchemaError("learning_rate must be > 0");
    }
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
        throw SchemaError("Adam betas must lie in (0, 1)");
    }
    if (!(adam_epsilon > 0.0)) {
        throw SchemaError("adam_epsilon must be > 0");
    }
    if (!(lr_decay_factor > 0.0)) {
        throw SchemaError("lr_decay_factor must be > 0");
    }
}

nlohmann::json TrainConfig::to_json() const {
    return {{"learning_rate", learning_rate}, {"beta1", beta1},
            {"beta2", beta2},                 {"adam_epsilon", adam_epsilon},
            {"batch_size", batch_size},       {"epochs", epochs},
            {"seed", seed},                   {"eval_every", eval_every},
            {"lr_decay_every", lr_decay_every}, {"lr_decay_factor", lr_decay_factor}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw SchemaError("train config must be a JSON object");
    }
    static const std::vector<std::string> known = {
        "learning_rate", "beta1",     "beta2",          "adam_epsilon",    "batch_size", "epochs",
        "seed",          "eval_every", "lr_decay_every", "lr_decay_factor", "config_version", "comment"};
    for (const auto &item : j.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            throw SchemaError("train config: unknown key '" + item.key() + "'");
        }
    }
    TrainConfig c;
    try {
        c.learning_rate = j.value("learning_rate", c.learning_rate);
        c.beta1 = j.value("beta1", c.beta1);
        c.beta2 = j.value("beta2", c.beta2);
        c.adam_epsilon = j.value("adam_epsilon", c.adam_epsilon);
        c.batch_size = j.value("batch_size", c.batch_size);
        c.epochs = j.value("epochs", c.epochs);
        c.seed = j.value("seed", c.seed);
        c.eval_every = j.value("eval_every", c.eval_every);
        c.lr_decay_every = j.value("lr_decay_every", c.lr_decay_every);
        c.lr_decay_factor = j.value("lr_decay_factor", c.lr_decay_factor);
    } catch (const nlohmann::json::exception &e) {
        throw SchemaError(std::string("train config: ") + e.what());
    }
    c.validate();
    return c;
}

// ---------------------------------------------------------------- Adam

template <typename T>
void adam_step(std::span<T> theta, std::span<const T> grad, AdamMoments<T> &state, uint64_t t,
               const TrainConfig &config, double learning_rate) {
    if (t == 0) {
        throw DomainError("adam_step: step index starts at 1");
    }
    if (state.m.empty() && state.v.empty()) {
        state.m.assign(theta.size(), T{0});
        state.v.assign(theta.size(), T{0});
    }
    if (grad.size() != theta.size() || state.m.size() != theta.size() || state.v.size() != theta.size()) {
        throw ShapeError("adam_step: parameter, gradient and moment sizes differ");
    }
    const double b1 = config.beta1;
    const double b2 = config.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
    const double eps = config.adam_epsilon;
    for (size_t i = 0; i < theta.size(); ++i) {
        const double g = grad[i];
        const double m = b1 * state.m[i] + (1.0 - b1) * g;
        const double v = b2 * state.v[i] + (1.0 - b2) * g * g;
        state.m[i] = static_cast<T>(m);
        state.v[i] = static_cast<T>(v);
        theta[i] = static_cast<T>(theta[i] - learning_rate * (m / c1) / (std::sqrt(v / c2) + eps));
    }
}

template <typename T>
AdamOptimizer<T>::AdamOptimizer(std::vector<nn::Parameter<T> *> params, const TrainConfig &config)
    : params_(std::move(params)), moments_(params_.size()), config_(config) {}

template <typename T>
void AdamOptimizer<T>::step(double learning_rate) {
    ++t_;
    for (size_t i = 0; i < params_.size(); ++i) {
        adam_step<T>(params_[i]->value.values(), params_[i]->grad.values(), moments_[i], t_, config_,
                     learning_rate);
    }
}

// ---------------------------------------------------------------- training

std::string LossHistory::to_csv() const {
    std::ostringstream out;
    out.precision(10);
    out << "epoch,mean_loss,test_accuracy\n";
    for (size_t e = 0; e < mean_loss.size(); ++e) {
        out << (e + 1) << ',' << mean_loss[e] << ',';
        if (e < test_accuracy.size() && test_accuracy[e]) {
            out << *test_accuracy[e];
        }
        out << '\n';
    }
    return out.str();
}

void check_compatible(const ModelConfig &model, const Dataset &data, const std::string &what) {
    if (data.feature_length() != model.feature_length) {
        throw SchemaError(what + " has feature length " + std::to_string(data.feature_length()) +
                          " but the model expects M = " + std::to_string(model.feature_length));
    }
    if (static_cast<size_t>(data.n_classes()) != model.n_classes) {
        throw SchemaError(what + " has " + std::to_string(data.n_classes()) + " classes but the model expects K = " +
                          std::to_string(model.n_classes));
    }
    for (uint16_t label : data.labels()) {
        if (label >= model.n_classes) {
            throw SchemaError(what + " contains label " + std::to_string(label) + " >= K");
        }
    }
}

template <typename T>
LossHistory train(Model<T> &model, const Dataset &train_set, const Dataset *test_set, const TrainConfig &config) {
    config.validate();
    check_compatible(model.config(), train_set, "training set");
    if (test_set != nullptr) {
        check_compatible(model.config(), *test_set, "test set");
    }
    LossHistory history;
    if (config.epochs == 0) {
        return history;
    }
    if (train_set.size() == 0) {
        throw DomainError("training set is empty");
    }

    const size_t n = train_set.size();
    const size_t m = train_set.feature_length();
    const size_t batch = config.resolved_batch_size(n);
    AdamOptimizer<T> adam(model.parameters(), config);
    std::vector<T> buffer;
    std::vector<uint16_t> labels;
    double lr = config.learning_rate;

    for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.lr_decay_every > 0 && epoch > 0 && epoch % config.lr_decay_every == 0) {
            lr *= config.lr_decay_factor;
        }
        auto started = std::chrono::steady_clock::now();
        std::vector<size_t> order(n);
        std::iota(order.begin(), order.end(), size_t{0});
        RngStream rng = derive_stream(config.seed, epoch);
        shuffle(order, rng);

        double loss_sum = 0;
        for (size_t begin = 0; begin < n; begin += batch) {
            const size_t b = std::min(batch, n - begin);
            buffer.resize(b * m);
            labels.resize(b);
            for (size_t i = 0; i < b; ++i) {
                std::span<const float> row = train_set.features(order[begin + i]);
                std::copy(row.begin(), row.end(), buffer.begin() + i * m);
                labels[i] = train_set.label(order[begin + i]);
            }
            Tensor<T> x({b, m}, buffer);
            model.zero_grad();
            nn::LossAndGrad<T> lg = nn::softmax_cross_entropy(model.logits(x), labels);
            if (!std::isfinite(lg.loss)) {
                throw NumericError("training diverged: non-finite loss in epoch " + std::to_string(epoch + 1));
            }
            model.backward(lg.grad);
            adam.step(lr);
            loss_sum += lg.loss * static_cast<double>(b);
        }
        const double mean = loss_sum / static_cast<double>(n);
        history.epoch_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
        history.mean_loss.push_back(mean);
        if (!std::isfinite(mean) || mean > 1e3) {
            throw NumericError("training diverged: epoch " + std::to_string(epoch + 1) + " mean loss " +
                               std::to_string(mean));
        }
        const bool last = epoch + 1 == config.epochs;
        if (test_set != nullptr && config.eval_every > 0 && ((epoch + 1) % config.eval_every == 0 || last)) {
            history.test_accuracy.push_back(evaluate(model, *test_set).accuracy);
        } else {
            history.test_accuracy.push_back(std::nullopt);
        }
    }
    return history;
}

template void adam_step<float>(std::span<float>, std::span<const float>, AdamMoments<float> &, uint64_t,
                               const TrainConfig &, double);
template void adam_step<double>(std::span<double>, std::span<const double>, AdamMoments<double> &, uint64_t,
                                const TrainConfig &, double);
template class AdamOptimizer<float>;
template class AdamOptimizer<double>;
template LossHistory train<float>(Model<float> &, const Dataset &, const Dataset *, const TrainConfig &);
template LossHistory train<double>(Model<double> &, const Dataset &, const Dataset *, const TrainConfig &);

}  // namespace entclass
