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

#include "entclass/dataset/dataset.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include "entclass/core/error.h"

namespace entclass {

nlohmann::json DatasetMetadata::to_json() const {
    nlohmann::json j;
    j["n_qubits"] = n_qubits;
    j["n_classes"] = n_classes;
    j["feature_length"] = feature_length;
    j["scheme"] = to_string(scheme);
    j["roster"] = roster;
    j["dephasing_epsilon"] = noise.dephasing_epsilon;
    j["shots"] = noise.shots_code();
    j["local_unitaries"] = to_string(local_unitaries);
    j["root_seed"] = root_seed;
    j["creator_version"] = creator_version;
    return j;
}

DatasetMetadata DatasetMetadata::from_json(const nlohmann::json &j) {
    DatasetMetadata m;
    try {
        m.n_qubits = j.at("n_qubits").get<int>();
        m.n_classes = j.at("n_classes").get<int>();
        m.scheme = parse_scheme(j.at("scheme").get<std::string>());
        m.roster = j.at("roster").get<std::vector<std::string>>();
        m.noise = NoiseConfig::from_codes(j.at("dephasing_epsilon").get<double>(), j.at("shots").get<int64_t>());
        m.root_seed = j.at("root_seed").get<uint64_t>();
        m.creator_version = j.at("creator_version").get<std::string>();
        // Optional keys: older writers omitted them.
        m.local_unitaries = parse_local_unitary_mode(j.value("local_unitaries", std::string("none")));
        m.feature_length = j.value("feature_length", size_t{0});
    } catch (const nlohmann::json::exception &e) {
        throw SchemaError(std::string("dataset metadata: ") + e.what());
    }
    if (static_cast<size_t>(m.n_classes) != m.roster.size()) {
        throw SchemaError("dataset metadata: n_classes does not match roster length");
    }
    return m;
}

void Dataset::append(std::span<const float> features, uint16_t label) {
    if (features.size() != feature_length()) {
        throw ShapeError("sample has " + std::to_string(features.size()) + " features, dataset expects " +
                         std::to_string(feature_length()));
    }
    if (label >= metadata_.n_classes) {
        throw DomainError("label " + std::to_string(label) + " out of range for " +
                          std::to_string(metadata_.n_classes) + " classes");
    }
    features_.insert(features_.end(), features.begin(), features.end());
    labels_.push_back(label);
}

void Dataset::reserve(size_t n) {
    features_.reserve(n * feature_length());
    labels_.reserve(n);
}

std::vector<size_t> Dataset::class_counts() const {
    std::vector<size_t> counts(static_cast<size_t>(n_classes()), 0);
    for (uint16_t l : labels_) {
        ++counts[l];
    }
    return counts;
}

Dataset Dataset::select(const std::vector<size_t> &indices) const {
    Dataset out(metadata_);
    out.reserve(indices.size());
    for (size_t i : indices) {
        out.append(features(i), label(i));
    }
    return out;
}

Dataset generate(const GenerationConfig &config) {
    const size_t k = config.roster.size();
    if (k == 0) {
        throw RosterError("generate: empty roster");
    }
    if (config.n_samples < k) {
        throw DomainError("generate: need at least one sample per class (" + std::to_string(k) + ")");
    }
    if (config.bases.n_qubits != config.roster.front().n_qubits) {
        throw ShapeError("generate: basis set and roster disagree on n_qubits");
    }

    DatasetMetadata meta;
    meta.n_qubits = config.bases.n_qubits;
    meta.n_classes = static_cast<int>(k);
    meta.feature_length = config.bases.feature_length();
    meta.scheme = config.bases.scheme;
    meta.roster = roster_names(config.roster);
    meta.noise = config.noise;
    meta.local_unitaries = config.local_unitaries;
    meta.root_seed = config.root_seed;

    std::vector<uint16_t> labels(config.n_samples);
    for (size_t i = 0; i < labels.size(); ++i) {
        labels[i] = static_cast<uint16_t>(i % k);
    }
    RngStream label_rng = derive_stream(config.root_seed, kLabelShuffleStream);
    shuffle(labels, label_rng);

    const size_t m = meta.feature_length;
    std::vector<float> features(config.n_samples * m);
    auto work = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            RngStream rng = derive_stream(config.root_seed, i);
            QuantumState state = sample_state(config.roster[labels[i]], rng, config.local_unitaries);
            std::vector<double> f = encode_features(to_density(state), config.bases, config.noise, rng);
            for (size_t j = 0; j < m; ++j) {
                features[i * m + j] = static_cast<float>(f[j]);
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(config.n_samples)));
    if (workers == 1) {
        work(0, config.n_samples);
    } else {
        std::vector<std::thread> threads;
        const size_t chunk = (config.n_samples + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            size_t begin = w * chunk;
            size_t end = std::min(config.n_samples, begin + chunk);
            if (begin < end) {
                threads.emplace_back(work, begin, end);
            }
        }
        for (auto &t : threads) {
            t.join();
        }
    }

    Dataset out(meta);
    out.reserve(config.n_samples);
    for (size_t i = 0; i < config.n_samples; ++i) {
        out.append({features.data() + i * m, m}, labels[i]);
    }
    return out;
}

namespace {

std::vector<std::vector<size_t>> indices_by_class(const Dataset &dataset) {
    std::vector<std::vector<size_t>> by_class(static_cast<size_t>(dataset.n_classes()));
    for (size_t i = 0; i < dataset.size(); ++i) {
        by_class[dataset.label(i)].push_back(i);
    }
    return by_class;
}

// Takes quota[c] shuffled members of each class; returns (chosen, rest).
std::pair<std::vector<size_t>, std::vector<size_t>> take_quotas(std::vector<std::vector<size_t>> by_class,
                                                                 const std::vector<size_t> &quota, RngStream &rng) {
    std::vector<size_t> chosen, rest;
    for (size_t c = 0; c < by_class.size(); ++c) {
        shuffle(by_class[c], rng);
        chosen.insert(chosen.end(), by_class[c].begin(), by_class[c].begin() + quota[c]);
        rest.insert(rest.end(), by_class[c].begin() + quota[c], by_class[c].end());
    }
    shuffle(chosen, rng);
    shuffle(rest, rng);
    return {chosen, rest};
}

}  // namespace

Dataset subsample(const Dataset &dataset, size_t n, uint64_t seed) {
    if (n > dataset.size()) {
        throw DomainError("subsample: requested " + std::to_string(n) + " samples from a dataset of " +
                          std::to_string(dataset.size()));
    }
    auto by_class = indices_by_class(dataset);
    const size_t k = by_class.size();
    std::vector<size_t> quota(k);
    for (size_t c = 0; c < k; ++c) {
        quota[c] = n / k + (c < n % k ? 1 : 0);
    }
    // Classes that cannot fill their quota pass the shortfall on, lowest id first.
    size_t shortfall = 0;
    for (size_t c = 0; c < k; ++c) {
        if (quota[c] > by_class[c].size()) {
            shortfall += quota[c] - by_class[c].size();
            quota[c] = by_class[c].size();
        }
    }
    for (size_t c = 0; c < k && shortfall > 0; ++c) {
        size_t extra = std::min(shortfall, by_class[c].size() - quota[c]);
        quota[c] += extra;
        shortfall -= extra;
    }
    RngStream rng = derive_stream(seed, 0);
    return dataset.select(take_quotas(std::move(by_class), quota, rng).first);
}

std::pair<Dataset, Dataset> split(const Dataset &dataset, const std::vector<double> &fractions, uint64_t seed) {
    if (fractions.size() != 2 || fractions[0] < 0 || fractions[1] < 0 ||
        std::abs(fractions[0] + fractions[1] - 1.0) > 1e-9) {
        throw DomainError("split: fractions must be two non-negative values summing to 1");
    }
    auto by_class = indices_by_class(dataset);
    const size_t k = by_class.size();
    const size_t first_total = static_cast<size_t>(std::llround(fractions[0] * static_cast<double>(dataset.size())));

    // Proportional per-class quotas; leftover slots go to the largest
    // fractional remainders, ties to the lowest class id.
    std::vector<size_t> quota(k);
    std::vector<std::pair<double, size_t>> remainders;
    size_t assigned = 0;
    for (size_t c = 0; c < k; ++c) {
        double exact = fractions[0] * static_cast<double>(by_class[c].size());
        quota[c] = static_cast<size_t>(std::floor(exact));
        assigned += quota[c];
        remainders.emplace_back(exact - std::floor(exact), c);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto &a, const auto &b) { return a.first > b.first; });
    for (const auto &[frac, c] : remainders) {
        if (assigned >= first_total) {
            break;
        }
        if (quota[c] < by_class[c].size()) {
            ++quota[c];
            ++assigned;
        }
    }
    RngStream rng = derive_stream(seed, 0);
    auto [first, second] = take_quotas(std::move(by_class), quota, rng);
    return {dataset.select(first), dataset.select(second)};
}

}  // namespace entclass
