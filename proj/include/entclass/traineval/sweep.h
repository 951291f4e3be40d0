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

#ifndef ENTCLASS_TRAINEVAL_SWEEP_H
#define ENTCLASS_TRAINEVAL_SWEEP_H

#include <cstdint>
#include <string>
#include <vector>

#include "entclass/dataset/dataset.h"
#include "entclass/models/model.h"
#include "entclass/traineval/train.h"
#include "json.hpp"

namespace entclass {

struct SweepRow {
    std::string architecture;
    size_t train_size = 0;
    /// Noise setting of the sweep point.
    NoiseConfig noise;
    size_t repeat = 0;
    uint64_t subsample_seed = 0;
    uint64_t init_seed = 0;
    uint64_t train_seed = 0;
    double accuracy = 0;
    double macro_f1 = 0;
    std::vector<double> f1;
    double final_loss = 0;
    double mean_epoch_seconds = 0;
};

struct SweepTable {
    size_t n_classes = 0;
    std::vector<SweepRow> rows;

    /// Columns: architecture, train_size, epsilon, shots (-1 = EXACT), repeat, subsample_seed,
    /// init_seed, train_seed, accuracy, macro_f1, final_loss,
    /// mean_epoch_seconds, f1_0 .. f1_{K-1}.
    std::string to_csv() const;
    static std::string csv_header(size_t n_classes);
    /// Mean and (sample) standard deviation of accuracy and per-class F1 per
    /// (architecture, noise, train_size) group.
    nlohmann::json summary() const;
};

struct SweepOptions {
    std::vector<size_t> sizes;
    std::vector<ModelConfig> models;
    TrainConfig train;
    size_t repeats = 1;
    /// Seeds subsamples; repeat r trains with init_seed + r and train.seed + r.
    uint64_t seed = 0;
    /// Concurrent sweep points; results do not depend on it.
    unsigned workers = 1;
    /// Use 64-bit arithmetic for training.
    bool float64 = false;
};

/// For every (model, size, repeat): stratified subsample of the base set
/// (the same subsample for every model), fresh model, train, evaluate on test.
/// Rows are ordered by model, then size, then repeat.
SweepTable sweep_sample_size(const Dataset &base_train, const Dataset &test, const SweepOptions &options);

/// Which datasets a noise point applies to; the other keeps the base noise.
struct NoisePlacement {
    bool train = true;
    bool test = true;
};

/// Regenerates train (max size) and test data under each noise setting, from
/// the same root seeds so states are paired across settings, then runs
/// sweep_sample_size on each.
SweepTable sweep_noise(const std::vector<NoiseConfig> &noises, const GenerationConfig &train_generation,
                       const GenerationConfig &test_generation, const SweepOptions &options,
                       NoisePlacement placement = {});

}  // namespace entclass

#endif
