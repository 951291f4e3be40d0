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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "entclass/core/error.h"
#include "entclass/core/rng.h"
#include "entclass/dataset/dataset.h"
#include "entclass/nn/checkpoint.h"
#include "entclass/traineval/metrics.h"
#include "entclass/traineval/sweep.h"
#include "entclass/traineval/train.h"

using namespace entclass;

namespace {

GenerationConfig gen(size_t n, uint64_t seed, NoiseConfig noise = {}) {
    GenerationConfig g;
    g.n_samples = n;
    g.roster = default_roster(3);
    g.bases = build_basis_set(3);
    g.root_seed = seed;
    g.noise = noise;
    g.workers = 4;
    return g;
}

const Dataset &train_pool() {
    static const Dataset d = generate(gen(1200, 1));
    return d;
}

const Dataset &test_pool() {
    static const Dataset d = generate(gen(2000, 2));
    return d;
}

ModelConfig tiny_mlp() {
    ModelConfig c = ModelConfig::defaults(Architecture::kMlp, 216, 6);
    c.dense_hidden = {16};
    return c;
}

TrainConfig quick(size_t epochs) {
    TrainConfig t;
    t.epochs = epochs;
    return t;
}

double mean(const std::vector<double> &v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double stddev(const std::vector<double> &v) {
    double m = mean(v), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1));
}

std::vector<double> accuracies(const SweepTable &t, size_t size, double epsilon = -1, int64_t shots = 0) {
    std::vector<double> out;
    for (const auto &r : t.rows) {
        if (r.train_size != size) continue;
        if (epsilon >= 0 && r.noise.dephasing_epsilon != epsilon) continue;
        if (shots != 0 && r.noise.shots_code() != shots) continue;
        out.push_back(r.accuracy);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- Adam

TEST(Adam, ZeroGradientLeavesParameters) {
    std::vector<double> theta = {0.3, -1.2, 5.0}, grad(3, 0.0);
    auto before = theta;
    AdamMoments<double> m;
    TrainConfig cfg;
    for (uint64_t t = 1; t <= 5; ++t) adam_step<double>(theta, grad, m, t, cfg, cfg.learning_rate);
    EXPECT_EQ(theta, before);
}

TEST(Adam, FirstStepHandValue) {
    std::vector<double> theta = {0.0}, grad = {1.0};
    AdamMoments<double> m;
    TrainConfig cfg;
    adam_step<double>(theta, grad, m, 1, cfg, 0.01);
    EXPECT_NEAR(theta[0], -0.01 / (1 + 1e-8), 1e-15);
    EXPECT_NEAR(m.m[0], 0.1, 1e-15);
    EXPECT_NEAR(m.v[0], 0.001, 1e-15);
}

TEST(Adam, SecondStepHandValue) {
    std::vector<double> theta = {0.0}, g1 = {1.0}, g2 = {-2.0};
    AdamMoments<double> m;
    TrainConfig cfg;
    adam_step<double>(theta, g1, m, 1, cfg, 0.01);
    adam_step<double>(theta, g2, m, 2, cfg, 0.01);
    double m2 = 0.9 * 0.1 + 0.1 * -2.0, v2 = 0.999 * 0.001 + 0.001 * 4.0;
    double mhat = m2 / (1 - 0.81), vhat = v2 / (1 - 0.999 * 0.999);
    EXPECT_NEAR(theta[0], -0.01 / (1 + 1e-8) - 0.01 * mhat / (std::sqrt(vhat) + 1e-8), 1e-15);
}

TEST(Adam, ZeroLearningRateIsIdentity) {
    RngStream rng(1, 1);
    std::vector<float> theta(50), grad(50);
    for (size_t i = 0; i < 50; ++i) {
        theta[i] = static_cast<float>(rng.normal());
        grad[i] = static_cast<float>(rng.normal());
    }
    auto before = theta;
    AdamMoments<float> m;
    TrainConfig cfg;
    for (uint64_t t = 1; t <= 3; ++t) adam_step<float>(theta, grad, m, t, cfg, 0.0);
    EXPECT_EQ(theta, before);
}

TEST(Adam, Errors) {
    std::vector<double> theta = {0.0}, grad = {1.0, 2.0};
    AdamMoments<double> m;
    TrainConfig cfg;
    EXPECT_THROW(adam_step<double>(theta, grad, m, 1, cfg, 0.01), ShapeError);
    grad.pop_back();
    EXPECT_THROW(adam_step<double>(theta, grad, m, 0, cfg, 0.01), DomainError);
}

// ---------------------------------------------------------------- training

TEST(Train, ZeroEpochsLeavesModelUnchanged) {
    Model<float> m(tiny_mlp());
    auto before = nn::encode_checkpoint(m.to_checkpoint());
    LossHistory h = train(m, subsample(train_pool(), 60, 0), nullptr, quick(0));
    EXPECT_EQ(h.epochs(), 0u);
    EXPECT_EQ(nn::encode_checkpoint(m.to_checkpoint()), before);
}

TEST(Train, BitDeterministic) {
    Dataset d = subsample(train_pool(), 100, 3);
    ModelConfig c = ModelConfig::defaults(Architecture::kArchi2, 216, 6);
    c.lstm_hidden = 16;
    Model<float> a(c), b(c);
    TrainConfig t = quick(5);
    LossHistory ha = train(a, d, nullptr, t), hb = train(b, d, nullptr, t);
    EXPECT_EQ(ha.mean_loss, hb.mean_loss);
    EXPECT_EQ(nn::encode_checkpoint(a.to_checkpoint()), nn::encode_checkpoint(b.to_checkpoint()));
    Model<float> c2(c);
    t.seed = 1;
    train(c2, d, nullptr, t);
    EXPECT_NE(nn::encode_checkpoint(c2.to_checkpoint()), nn::encode_checkpoint(a.to_checkpoint()));
}

TEST(Train, DefaultArchi2ReducesLossOnHundredSamples) {
    Dataset d = subsample(train_pool(), 100, 0);
    Model<float> m(ModelConfig::defaults(Architecture::kArchi2, 216, 6));
    LossHistory h = train(m, d, nullptr, quick(100));
    ASSERT_EQ(h.epochs(), 100u);
    for (double l : h.mean_loss) EXPECT_TRUE(std::isfinite(l));
    EXPECT_LT(h.mean_loss.back(), 0.25 * h.mean_loss.front());
}

TEST(Train, MemorizesSingleSample) {
    Dataset one = train_pool().select({0});
    Model<float> m(ModelConfig::defaults(Architecture::kArchi2, 216, 6));
    LossHistory h = train(m, one, nullptr, quick(200));
    EXPECT_LT(h.mean_loss.back(), 0.01);
}

TEST(Train, RecordsTestAccuracyAtCadence) {
    TrainConfig t = quick(6);
    t.eval_every = 3;
    Model<float> m(tiny_mlp());
    LossHistory h = train(m, subsample(train_pool(), 60, 0), &test_pool(), t);
    ASSERT_EQ(h.test_accuracy.size(), 6u);
    EXPECT_FALSE(h.test_accuracy[0].has_value());
    EXPECT_TRUE(h.test_accuracy[2].has_value());
    EXPECT_TRUE(h.test_accuracy[5].has_value());
    std::string csv = h.to_csv();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "epoch,mean_loss,test_accuracy");
}

TEST(Train, NonFiniteLossAborts) {
    Dataset d = subsample(train_pool(), 12, 0);
    Dataset bad(d.metadata());
    for (size_t i = 0; i < d.size(); ++i) {
        std::vector<float> f(d.features(i).begin(), d.features(i).end());
        if (i == 5) f[3] = std::numeric_limits<float>::quiet_NaN();
        bad.append(f, d.label(i));
    }
    Model<float> m(tiny_mlp());
    EXPECT_THROW(train(m, bad, nullptr, quick(2)), NumericError);
}

TEST(Train, ExplodingLossAborts) {
    TrainConfig t = quick(20);
    t.learning_rate = 1e6;
    Model<double> m(tiny_mlp());
    EXPECT_THROW(train(m, subsample(train_pool(), 60, 0), nullptr, t), NumericError);
}

TEST(Train, MismatchedDatasetRejected) {
    ModelConfig c = tiny_mlp();
    c.feature_length = 1296;
    EXPECT_THROW(check_compatible(c, train_pool(), "train"), SchemaError);
    c = tiny_mlp();
    c.n_classes = 10;
    EXPECT_THROW(check_compatible(c, train_pool(), "train"), SchemaError);
}

TEST(Train, ConfigJsonAndDefaults) {
    TrainConfig t;
    EXPECT_EQ(t.resolved_batch_size(100), 32u);
    EXPECT_EQ(t.resolved_batch_size(10), 10u);
    EXPECT_EQ(TrainConfig::from_json(t.to_json()), t);
    std::ifstream in(std::string(ENTCLASS_CONFIG_DIR) + "/default_train.json");
    EXPECT_EQ(TrainConfig::from_json(nlohmann::json::parse(in)), t);
    auto j = t.to_json();
    j["learning_rat"] = 0.1;
    EXPECT_THROW(TrainConfig::from_json(j), SchemaError);
    t.learning_rate = -1;
    EXPECT_THROW(t.validate(), SchemaError);
}

// ---------------------------------------------------------------- metrics

TEST(Metrics, AllCorrect) {
    std::vector<uint16_t> y = {0, 1, 2, 2, 1, 0};
    Metrics m = compute_metrics(y, y, 3);
    EXPECT_EQ(m.accuracy, 1.0);
    for (size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(m.f1[i], 1.0);
        for (size_t j = 0; j < 3; ++j) EXPECT_EQ(m.count(i, j), i == j ? 2u : 0u);
    }
}

TEST(Metrics, AllPredictZeroOnBalancedPair) {
    std::vector<uint16_t> truth = {0, 1, 0, 1, 0, 1}, pred(6, 0);
    Metrics m = compute_metrics(truth, pred, 2);
    EXPECT_DOUBLE_EQ(m.accuracy, 0.5);
    EXPECT_DOUBLE_EQ(m.f1[0], 2.0 / 3.0);
    EXPECT_EQ(m.f1[1], 0.0);
    EXPECT_EQ(m.precision[1], 0.0);
    EXPECT_DOUBLE_EQ(m.fpr[0], 1.0);
    EXPECT_EQ(m.fpr[1], 0.0);
}

TEST(Metrics, RandomPredictionsNearChance) {
    for (size_t k : {2u, 6u, 10u}) {
        RngStream rng(k, 0);
        std::vector<uint16_t> truth(10000), pred(10000);
        for (size_t i = 0; i < truth.size(); ++i) {
            truth[i] = static_cast<uint16_t>(i % k);
            pred[i] = static_cast<uint16_t>(rng.uniform_index(k));
        }
        Metrics m = compute_metrics(truth, pred, k);
        EXPECT_NEAR(m.accuracy, 1.0 / k, 0.03);
    }
}

TEST(Metrics, IdentitiesOnRandomConfusions) {
    for (uint64_t s = 0; s < 20; ++s) {
        RngStream rng(s, 4);
        size_t k = 2 + rng.uniform_index(8), n = 1 + rng.uniform_index(500);
        std::vector<uint16_t> truth(n), pred(n);
        for (size_t i = 0; i < n; ++i) {
            truth[i] = static_cast<uint16_t>(rng.uniform_index(k));
            pred[i] = rng.uniform() < 0.6 ? truth[i] : static_cast<uint16_t>(rng.uniform_index(k));
        }
        Metrics m = compute_metrics(truth, pred, k);
        uint64_t trace = 0;
        for (size_t c = 0; c < k; ++c) {
            uint64_t row = 0;
            for (size_t j = 0; j < k; ++j) row += m.count(c, j);
            EXPECT_EQ(row, m.support[c]);
            trace += m.count(c, c);
            EXPECT_EQ(m.recall[c], m.tpr[c]);
            double p = m.precision[c], r = m.recall[c];
            EXPECT_NEAR(m.f1[c], p + r > 0 ? 2 * p * r / (p + r) : 0.0, 1e-15);
        }
        EXPECT_EQ(m.accuracy, static_cast<double>(trace) / n);
    }
}

TEST(Metrics, ErrorsAndSerialization) {
    EXPECT_THROW(compute_metrics({}, {}, 3), DomainError);
    std::vector<uint16_t> a = {0, 1}, b = {0};
    EXPECT_THROW(compute_metrics(a, b, 2), ShapeError);
    Metrics m = compute_metrics(a, a, 2);
    auto j = m.to_json({"GHZ", "W"});
    EXPECT_EQ(j["accuracy"], 1.0);
    EXPECT_EQ(m.confusion_csv({"GHZ", "W"}).substr(0, 9), "true\\pred");
}

TEST(Metrics, EvaluateMatchesPredictAll) {
    Model<float> m(tiny_mlp());
    Dataset d = subsample(test_pool(), 300, 0);
    auto pred = predict_all(m, d, 64);
    Metrics x = evaluate(m, d, 64);
    EXPECT_EQ(x.accuracy, compute_metrics(d.labels(), pred, 6).accuracy);
    for (size_t i = 0; i < d.size(); i += 37) EXPECT_EQ(pred[i], m.predict(d.features(i)));
}

// ---------------------------------------------------------------- sweeps

TEST(Sweep, RowCountOrderAndHeader) {
    SweepOptions o;
    o.sizes = {12, 24};
    o.models = {tiny_mlp(), ModelConfig::defaults(Architecture::kCnn, 216, 6)};
    o.train = quick(2);
    o.repeats = 3;
    o.workers = 3;
    SweepTable t = sweep_sample_size(train_pool(), subsample(test_pool(), 120, 0), o);
    ASSERT_EQ(t.rows.size(), 2u * 2 * 3);
    EXPECT_EQ(t.rows[0].architecture, "MLP");
    EXPECT_EQ(t.rows[0].train_size, 12u);
    EXPECT_EQ(t.rows[3].train_size, 24u);
    EXPECT_EQ(t.rows[6].architecture, "CNN");
    EXPECT_EQ(t.rows[2].repeat, 2u);
    EXPECT_EQ(t.rows[0].subsample_seed, t.rows[6].subsample_seed);
    std::string csv = t.to_csv();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), SweepTable::csv_header(6));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);
    auto s = t.summary();
    EXPECT_EQ(s.size(), 4u);
}

TEST(Sweep, WorkerCountDoesNotChangeResults) {
    SweepOptions o;
    o.sizes = {30};
    o.models = {tiny_mlp()};
    o.train = quick(3);
    o.repeats = 3;
    o.workers = 1;
    SweepTable a = sweep_sample_size(train_pool(), subsample(test_pool(), 120, 0), o);
    o.workers = 3;
    SweepTable b = sweep_sample_size(train_pool(), subsample(test_pool(), 120, 0), o);
    for (size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].accuracy, b.rows[i].accuracy);
        EXPECT_EQ(a.rows[i].final_loss, b.rows[i].final_loss);
    }
}

TEST(Sweep, FullSizeSingleRepeatEqualsPlainRun) {
    Dataset base = subsample(train_pool(), 60, 9);
    Dataset test = subsample(test_pool(), 300, 0);
    SweepOptions o;
    o.sizes = {base.size()};
    o.models = {tiny_mlp()};
    o.models[0].init_seed = 5;
    o.train = quick(4);
    o.train.seed = 8;
    SweepTable t = sweep_sample_size(base, test, o);
    ASSERT_EQ(t.rows.size(), 1u);

    Model<float> m(o.models[0]);
    LossHistory h = train(m, base, nullptr, o.train);
    Metrics x = evaluate(m, test);
    EXPECT_EQ(t.rows[0].accuracy, x.accuracy);
    EXPECT_EQ(t.rows[0].final_loss, h.mean_loss.back());
}

TEST(Sweep, NoiselessNoiseSweepEqualsPlainSweep) {
    SweepOptions o;
    o.sizes = {30, 60};
    o.models = {tiny_mlp()};
    o.train = quick(3);
    o.repeats = 2;
    GenerationConfig tg = gen(60, 21), eg = gen(120, 22);
    SweepTable noisy = sweep_noise({NoiseConfig{}}, tg, eg, o);
    SweepTable plain = sweep_sample_size(generate(tg), generate(eg), o);
    ASSERT_EQ(noisy.rows.size(), plain.rows.size());
    for (size_t i = 0; i < plain.rows.size(); ++i) EXPECT_EQ(noisy.rows[i].accuracy, plain.rows[i].accuracy);
}

TEST(Sweep, NoiseOnlyOnTestKeepsTrainingClean) {
    SweepOptions o;
    o.sizes = {30};
    o.models = {tiny_mlp()};
    o.train = quick(3);
    GenerationConfig tg = gen(30, 21), eg = gen(120, 22);
    NoiseConfig n = NoiseConfig::from_codes(0.5, 10);
    SweepTable test_only = sweep_noise({n}, tg, eg, o, NoisePlacement{false, true});
    SweepTable clean = sweep_noise({NoiseConfig{}}, tg, eg, o);
    EXPECT_EQ(test_only.rows[0].final_loss, clean.rows[0].final_loss);
    EXPECT_EQ(test_only.rows[0].noise, n);
}

// Statistical sweep properties; these train a few dozen models.

TEST(SweepProperty, AccuracyGrowsWithTrainingSize) {
    static const Dataset big = generate(gen(10000, 31));
    SweepOptions o;
    o.sizes = {100, 1000, 10000};
    o.models = {ModelConfig::defaults(Architecture::kMlp, 216, 6)};
    o.train = quick(30);
    o.repeats = 3;
    o.workers = 3;
    SweepTable t = sweep_sample_size(big, test_pool(), o);
    std::vector<double> means, stds;
    for (size_t s : o.sizes) {
        means.push_back(mean(accuracies(t, s)));
        stds.push_back(stddev(accuracies(t, s)));
        std::printf("size %zu accuracy %.4f +- %.4f\n", s, means.back(), stds.back());
    }
    int inversions = 0;
    for (size_t i = 1; i < means.size(); ++i) {
        if (means[i] < means[i - 1]) {
            ++inversions;
            EXPECT_LE(means[i - 1] - means[i], stds[i - 1] + stds[i]);
        }
    }
    EXPECT_LE(inversions, 1);
}

TEST(SweepProperty, DephasingDoesNotHelp) {
    SweepOptions o;
    o.sizes = {100, 1000};
    o.models = {ModelConfig::defaults(Architecture::kMlp, 216, 6)};
    o.train = quick(50);
    o.repeats = 3;
    o.workers = 3;
    SweepTable t = sweep_noise({NoiseConfig{}, NoiseConfig::from_codes(0.1, -1)}, gen(1000, 41), gen(2000, 42), o);
    for (size_t s : o.sizes) {
        double clean = mean(accuracies(t, s, 0.0)), noisy = mean(accuracies(t, s, 0.1));
        std::printf("size %zu eps=0 %.4f eps=0.1 %.4f\n", s, clean, noisy);
        EXPECT_LE(noisy, clean + 0.02) << "size " << s;
    }
}

TEST(SweepProperty, ExactShotsNotWorseThanHundredShots) {
    SweepOptions o;
    o.sizes = {100};
    o.models = {ModelConfig::defaults(Architecture::kArchi2, 216, 6)};
    o.train = quick(100);
    o.repeats = 3;
    o.workers = 3;
    SweepTable t =
        sweep_noise({NoiseConfig{}, NoiseConfig::from_codes(0.0, 100)}, gen(1000, 51), gen(2000, 52), o);
    double exact = mean(accuracies(t, 100, -1, -1)), shots = mean(accuracies(t, 100, -1, 100));
    std::printf("EXACT %.4f shots=100 %.4f\n", exact, shots);
    EXPECT_GE(exact, shots - 0.02);
}
