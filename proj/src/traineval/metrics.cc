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

#include "entclass/traineval/metrics.h"

#include <sstream>

#include "entclass/core/error.h"

namespace entclass {

namespace {

double ratio(uint64_t num, uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string class_name(const std::vector<std::string> &names, size_t k) {
    return k < names.size() ? names[k] : std::to_string(k);
}

}  // namespace

Metrics compute_metrics(std::span<const uint16_t> truth, std::span<const uint16_t> predicted, size_t n_classes) {
    if (truth.size() != predicted.size()) {
        throw ShapeError("compute_metrics: label lists differ in length");
    }
    if (truth.empty()) {
        throw DomainError("compute_metrics: no samples");
    }
    const size_t k = n_classes;
    Metrics out;
    out.n_classes = k;
    out.total = truth.size();
    out.confusion.assign(k * k, 0);
    for (size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= k || predicted[i] >= k) {
            throw DomainError("compute_metrics: label out of range");
        }
        ++out.confusion[truth[i] * k + predicted[i]];
    }
    uint64_t correct = 0;
    for (size_t c = 0; c < k; ++c) {
        correct += out.count(c, c);
    }
    out.accuracy = ratio(correct, out.total);
    for (size_t c = 0; c < k; ++c) {
        uint64_t tp = out.count(c, c);
        uint64_t support = 0;
        uint64_t predicted_c = 0;
        for (size_t j = 0; j < k; ++j) {
            support += out.count(c, j);
            predicted_c += out.count(j, c);
        }
        uint64_t fp = predicted_c - tp;
        uint64_t fn = support - tp;
        uint64_t tn = out.total - tp - fp - fn;
        double p = ratio(tp, tp + fp);
        double r = ratio(tp, tp + fn);
        out.support.push_back(support);
        out.precision.push_back(p);
        out.recall.push_back(r);
        out.tpr.push_back(r);
        out.fpr.push_back(ratio(fp, fp + tn));
        out.f1.push_back(p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r));
    }
    return out;
}

double Metrics::macro_f1() const {
    double s = 0;
    for (double v : f1) {
        s += v;
    }
    return f1.empty() ? 0.0 : s / static_cast<double>(f1.size());
}

nlohmann::json Metrics::to_json(const std::vector<std::string> &class_names) const {
    nlohmann::json per_class = nlohmann::json::array();
    for (size_t c = 0; c < n_classes; ++c) {
        per_class.push_back({{"label", c},
                             {"name", class_name(class_names, c)},
                             {"support", support[c]},
                             {"precision", precision[c]},
                             {"recall", recall[c]},
                             {"f1", f1[c]},
                             {"tpr", tpr[c]},
                             {"fpr", fpr[c]}});
    }
    nlohmann::json matrix = nlohmann::json::array();
    for (size_t i = 0; i < n_classes; ++i) {
        matrix.push_back(std::vector<uint64_t>(confusion.begin() + i * n_classes,
                                               confusion.begin() + (i + 1) * n_classes));
    }
    return {{"total", total},         {"accuracy", accuracy}, {"macro_f1", macro_f1()},
            {"per_class", per_class}, {"confusion", matrix}};
}

std::string Metrics::confusion_csv(const std::vector<std::string> &class_names) const {
    std::ostringstream out;
    out << "true\\predicted";
    for (size_t j = 0; j < n_classes; ++j) {
        out << ',' << class_name(class_names, j);
    }
    out << '\n';
    for (size_t i = 0; i < n_classes; ++i) {
        out << class_name(class_names, i);
        for (size_t j = 0; j < n_classes; ++j) {
            out << ',' << count(i, j);
        }
        out << '\n';
    }
    return out.str();
}

template <typename T>
std::vector<uint16_t> predict_all(Model<T> &model, const Dataset &data, size_t batch_size) {
    if (data.size() == 0) {
        throw DomainError("cannot evaluate an empty dataset");
    }
    if (data.feature_length() != model.config().feature_length) {
        throw SchemaError("dataset feature length does not match the model");
    }
    batch_size = std::max<size_t>(1, batch_size);
    const size_t m = data.feature_length();
    std::vector<uint16_t> out;
    out.reserve(data.size());
    const std::vector<float> &all = data.all_features();
    for (size_t begin = 0; begin < data.size(); begin += batch_size) {
        size_t b = std::min(batch_size, data.size() - begin);
        std::span<const float> rows(all.data() + begin * m, b * m);
        for (uint16_t p : model.predict(make_batch<T>(rows, m))) {
            out.push_back(p);
        }
    }
    return out;
}

template <typename T>
Metrics evaluate(Model<T> &model, const Dataset &data, size_t batch_size) {
    std::vector<uint16_t> predicted = predict_all(model, data, batch_size);
    return compute_metrics(data.labels(), predicted, model.config().n_classes);
}

template std::vector<uint16_t> predict_all<float>(Model<float> &, const Dataset &, size_t);
template std::vector<uint16_t> predict_all<double>(Model<double> &, const Dataset &, size_t);
template Metrics evaluate<float>(Model<float> &, const Dataset &, size_t);
template Metrics evaluate<double>(Model<double> &, const Dataset &, size_t);

}  // namespace entclass
