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

#ifndef ENTCLASS_DATASET_DATASET_H
#define ENTCLASS_DATASET_DATASET_H

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "entclass/qsim/families.h"
#include "entclass/qsim/measurement.h"
#include "json.hpp"

namespace entclass {

inline constexpr const char *kCreatorVersion = "entclass 1.0.0";

struct DatasetMetadata {
    int n_qubits = 0;
    int n_classes = 0;
    size_t feature_length = 0;
    MeasurementScheme scheme = MeasurementScheme::kLocalPauli;
    std::vector<std::string> roster;
    NoiseConfig noise;
    LocalUnitaryMode local_unitaries = LocalUnitaryMode::kNone;
    uint64_t root_seed = 0;
    std::string creator_version = kCreatorVersion;

    nlohmann::json to_json() const;
    static DatasetMetadata from_json(const nlohmann::json &j);
    bool operator==(const DatasetMetadata &) const = default;
};

/// Labeled measurement feature vectors. Features are stored as 32-bit floats,
/// row-major (sample, feature).
class Dataset {
   public:
    Dataset() = default;
    explicit Dataset(DatasetMetadata metadata) : metadata_(std::move(metadata)) {}

    const DatasetMetadata &metadata() const { return metadata_; }
    DatasetMetadata &metadata() { return metadata_; }

    size_t size() const { return labels_.size(); }
    size_t feature_length() const { return metadata_.feature_length; }
    int n_classes() const { return metadata_.n_classes; }

    std::span<const float> features(size_t i) const {
        return {features_.data() + i * feature_length(), feature_length()};
    }
    uint16_t label(size_t i) const { return labels_[i]; }
    const std::vector<float> &all_features() const { return features_; }
    const std::vector<uint16_t> &labels() const { return labels_; }

    void append(std::span<const float> features, uint16_t label);
    void reserve(size_t n);

    std::vector<size_t> class_counts() const;
    /// New dataset with the given samples, in the given order.
    Dataset select(const std::vector<size_t> &indices) const;

    bool operator==(const Dataset &) const = default;

   private:
    DatasetMetadata metadata_;
    std::vector<float> features_;
    std::vector<uint16_t> labels_;
};

struct GenerationConfig {
    size_t n_samples = 0;
    Roster roster;
    BasisSet bases;
    NoiseConfig noise;
    LocalUnitaryMode local_unitaries = LocalUnitaryMode::kNone;
    uint64_t root_seed = 0;
    /// Worker threads; output does not depend on this.
    unsigned workers = 1;
};

/// Stream id reserved for the label shuffle; sample i uses stream i.
inline constexpr uint64_t kLabelShuffleStream = ~uint64_t{0};

/// Balanced dataset: labels cycle round-robin over the roster, are shuffled
/// with the reserved stream, then sample i is drawn from derive_stream(seed, i).
Dataset generate(const GenerationConfig &config);

/// Class-stratified subset of n samples: quota floor(n/K) per class, the
/// remainder going to the lowest class ids. Deterministic in seed.
Dataset subsample(const Dataset &dataset, size_t n, uint64_t seed);

/// Stratified disjoint split. fractions must be two non-negative values summing to 1.
std::pair<Dataset, Dataset> split(const Dataset &dataset, const std::vector<double> &fractions, uint64_t seed);

}  // namespace entclass

#endif
