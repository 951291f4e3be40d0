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

#include "entclass/traineval/sweep.h"

#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "entclass/core/error.h"
#include "entclass/traineval/metrics.h"

namespace entclass {

namespace {

template <typename T>
SweepRow run_point(const ModelConfig &base_config, const Dataset &train_set, const Dataset &test,
                   const TrainConfig &base_train, size_t repeat) {
    ModelConfig mc = base_config;
    mc.init_seed += repeat;
    TrainConfig tc = base_train;
    tc.seed += repeat;
    Model<T> model(mc);
    LossHistory history = train(model, train_set, nullptr, tc);
    Metrics metrics = evaluate(model, test);

    SweepRow row;
    row.architecture = to_string(mc.architecture);
    row.train_size = train_set.size();
    row.noise = train_set.metadata().noise;
    row.repeat = repeat;
    row.init_seed = mc.init_seed;
    row.train_seed = tc.seed;
    row.accuracy = metrics.accuracy;
    row.macro_f1 = metrics.macro_f1();
    row.f1 = metrics.f1;
    row.final_loss = history.mean_loss.empty() ? std::nan("") : history.mean_loss.back();
    double total = 0;
    for (double s : history.epoch_seconds) {
        total += s;
    }
    row.mean_epoch_seconds = history.epoch_seconds.empty() ? 0.0 : total / history.epoch_seconds.size();
    return row;
}

/// Runs job(i) for i in [0, n) on up to `workers` threads; rethrows the first failure.
template <typename Job>
void parallel_for(size_t n, unsigned workers, Job job) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (size_t i = next++; i < n; i = next++) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = n;
            }
        }
    };
    std::vector<std::thread> threads;
    for (unsigned w = 1; w < workers; ++w) {
        threads.emplace_back(worker);
    }
    worker();
    for (auto &t : threads) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

double mean_of(const std::vector<double> &v) {
    double s = 0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double> &v) {
    if (v.size() < 2) {
        return 0.0;
    }
    double m = mean_of(v);
    double s = 0;
    for (double x : v) {
        s += (x - m) * (x - m);
    }
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

std::string SweepTable::csv_header(size_t n_classes) {
    std::string h =
        "architecture,train_size,epsilon,shots,repeat,subsample_seed,init_seed,train_seed,accuracy,macro_f1,final_loss,"
        "mean_epoch_seconds";
    for (size_t k = 0; k < n_classes; ++k) {
        h += ",f1_" + std::to_string(k);
    }
    return h;
}

std::string SweepTable::to_csv() const {
    std::ostringstream out;
    out.precision(10);
    out << csv_header(n_classes) << '\n';
    for (const SweepRow &r : rows) {
        out << r.architecture << ',' << r.train_size << ',' << r.noise.dephasing_epsilon << ',' << r.noise.shots_code() << ',' << r.repeat << ',' << r.subsample_seed
            << ',' << r.init_seed << ',' << r.train_seed << ',' << r.accuracy << ',' << r.macro_f1 << ','
            << r.final_loss << ',' << r.mean_epoch_seconds;
        for (double f : r.f1) {
            out << ',' << f;
        }
        out << '\n';
    }
    return out.str();
}

nlohmann::json SweepTable::summary() const {
    // Groups keep first-appearance order.
    std::vector<std::tuple<std::string, std::string, size_t>> keys;
    std::map<std::tuple<std::string, std::string, size_t>, std::vector<const SweepRow *>> groups;
    for (const SweepRow &r : rows) {
        auto key = std::make_tuple(r.architecture, r.noise.describe(), r.train_size);
        if (!groups.count(key)) {
            keys.push_back(key);
        }
        groups[key].push_back(&r);
    }
    nlohmann::json out = nlohmann::json::array();
    for (const auto &key : keys) {
        const auto &members = groups[key];
        std::vector<double> acc;
        std::vector<std::vector<double>> f1(n_classes);
        for (const SweepRow *r : members) {
            acc.push_back(r->accuracy);
            for (size_t k = 0; k < n_classes && k < r->f1.size(); ++k) {
                f1[k].push_back(r->f1[k]);
            }
        }
        nlohmann::json f1_mean = nlohmann::json::array();
        nlohmann::json f1_std = nlohmann::json::array();
        for (const auto &v : f1) {
            f1_mean.push_back(v.empty() ? 0.0 : mean_of(v));
            f1_std.push_back(std_of(v));
        }
        const NoiseConfig &noise = members.front()->noise;
        out.push_back({{"architecture", std::get<0>(key)},
                       {"epsilon", noise.dephasing_epsilon},
                       {"shots", noise.shots_code()},
                       {"train_size", std::get<2>(key)},
                       {"repeats", members.size()},
                       {"accuracy_mean", mean_of(acc)},
                       {"accuracy_std", std_of(acc)},
                       {"f1_mean", f1_mean},
                       {"f1_std", f1_std}});
    }
    return out;
}

SweepTable sweep_sample_size(const Dataset &base_train, const Dataset &test, const SweepOptions &options) {
    if (options.sizes.empty() || options.models.empty() || options.repeats == 0) {
        throw DomainError("sweep needs at least one size, one model and one repeat");
    }
    for (size_t s : options.sizes) {
        if (s == 0 || s > base_train.size()) {
            throw DomainError("sweep size " + std::to_string(s) + " is outside [1, " +
                              std::to_string(base_train.size()) + "]");
        }
    }
    for (const ModelConfig &mc : options.models) {
        check_compatible(mc, base_train, "sweep training set");
        check_compatible(mc, test, "sweep test set");
    }
    options.train.validate();

    const size_t n_sizes = options.sizes.size();
    const size_t n_models = options.models.size();
    const size_t reps = options.repeats;

    // Subsamples are drawn once per (size, repeat) and shared by every model.
    std::vector<Dataset> subsets(n_sizes * reps);
    std::vector<uint64_t> subset_seeds(n_sizes * reps);
    for (size_t s = 0; s < n_sizes; ++s) {
        for (size_t r = 0; r < reps; ++r) {
            uint64_t seed = derive_stream(options.seed, (static_cast<uint64_t>(r) << 32) | s).next_u64();
            subset_seeds[s * reps + r] = seed;
            subsets[s * reps + r] = options.sizes[s] == base_train.size() && reps == 1
                                        ? base_train
                                        : subsample(base_train, options.sizes[s], seed);
        }
    }

    SweepTable table;
    table.n_classes = static_cast<size_t>(base_train.n_classes());
    table.rows.resize(n_models * n_sizes * reps);
    parallel_for(table.rows.size(), options.workers, [&](size_t i) {
        size_t m = i / (n_sizes * reps);
        size_t sr = i % (n_sizes * reps);
        size_t r = sr % reps;
        SweepRow row = options.float64
                           ? run_point<double>(options.models[m], subsets[sr], test, options.train, r)
                           : run_point<float>(options.models[m], subsets[sr], test, options.train, r);
        row.subsample_seed = subset_seeds[sr];
        table.rows[i] = std::move(row);
    });
    return table;
}

SweepTable sweep_noise(const std::vector<NoiseConfig> &noises, const GenerationConfig &train_generation,
                       const GenerationConfig &test_generation, const SweepOptions &options,
                       NoisePlacement placement) {
    if (noises.empty()) {
        throw DomainError("noise sweep needs at least one noise setting");
    }
    size_t max_size = 0;
    for (size_t s : options.sizes) {
        max_size = std::max(max_size, s);
    }
    SweepTable out;
    for (const NoiseConfig &noise : noises) {
        GenerationConfig tg = train_generation;
        tg.n_samples = std::max(tg.n_samples, max_size);
        if (placement.train) {
            tg.noise = noise;
        }
        GenerationConfig eg = test_generation;
        if (placement.test) {
            eg.noise = noise;
        }
        Dataset train_set = generate(tg);
        Dataset test_set = generate(eg);
        SweepTable part = sweep_sample_size(train_set, test_set, options);
        out.n_classes = part.n_classes;
        for (SweepRow &r : part.rows) {
            // Label rows by the swept setting even when it only reached the test set.
            r.noise = noise;
            out.rows.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace entclass
