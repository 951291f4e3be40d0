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

#ifndef ENTCLASS_TRAINEVAL_METRICS_H
#define ENTCLASS_TRAINEVAL_METRICS_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entclass/dataset/dataset.h"
#include "entclass/models/model.h"
#include "json.hpp"

namespace entclass {

struct Metrics {
    size_t n_classes = 0;
    size_t total = 0;
    /// confusion[true * K + predicted]
    std::vector<uint64_t> confusion;
    double accuracy = 0;
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    std::vector<double> tpr;
    std::vector<double> fpr;
    std::vector<uint64_t> support;

    uint64_t count(size_t truth, size_t predicted) const { return confusion[truth * n_classes + predicted]; }
    double macro_f1() const;
    nlohmann::json to_json(const std::vector<std::string> &class_names = {}) const;
    /// K x K grid with a header row of predicted labels and a leading true-label column.
    std::string confusion_csv(const std::vector<std::string> &class_names = {}) const;
};

/// Metrics from paired label lists. Any ratio with a zero denominator is 0.
Metrics compute_metrics(std::span<const uint16_t> truth, std::span<const uint16_t> predicted, size_t n_classes);

/// Predicts every sample in batches. Throws DomainError on an empty dataset.
template <typename T>
std::vector<uint16_t> predict_all(Model<T> &model, const Dataset &data, size_t batch_size = 256);

template <typename T>
Metrics evaluate(Model<T> &model, const Dataset &data, size_t batch_size = 256);

}  // namespace entclass

#endif
