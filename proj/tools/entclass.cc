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

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "entclass/core/binary_io.h"
#include "entclass/core/error.h"
#include "entclass/dataset/dataset.h"
#include "entclass/dataset/io.h"
#include "entclass/models/model.h"
#include "entclass/nn/checkpoint.h"
#include "entclass/nn/grad_check.h"
#include "entclass/traineval/metrics.h"
#include "entclass/traineval/sweep.h"
#include "entclass/traineval/train.h"
#include "json.hpp"

using namespace entclass;
using nlohmann::json;

namespace {

enum ExitCode : int {
    kOk = 0,
    kOther = 1,
    kUsage = 2,
    kSchema = 3,
    kNumeric = 4,
    kIo = 5,
};

bool float64_mode() {
    const char *v = std::getenv("ENTCLASS_FLOAT64");
    return v != nullptr && std::string(v) == "1";
}

std::string utc_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw SchemaError(path + ": " + e.what());
    }
}

void write_json(const std::string &path, const json &j) { write_text_atomic(path, j.dump(2) + "\n"); }

/// Provenance record written next to an output artifact.
struct Manifest {
    Manifest(std::string cmd, std::vector<std::string> args) : command(std::move(cmd)), argv(std::move(args)) {}

    std::string command;
    std::vector<std::string> argv;
    std::string started_at = utc_now();
    json config = json::object();
    json seeds = json::object();
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    void write(const std::string &artifact) const {
        json j = {{"command", command},
                  {"argv", argv},
                  {"tool_version", kCreatorVersion},
                  {"float64", float64_mode()},
                  {"config", config},
                  {"seeds", seeds},
                  {"inputs", inputs},
                  {"outputs", outputs},
                  {"started_at", started_at},
                  {"finished_at", utc_now()}};
        write_json(artifact + ".manifest.json", j);
    }
};

template <typename V>
void take_from(const json &file, const char *key, V &target, const CLI::Option *flag) {
    if (flag->count() == 0 && file.contains(key)) {
        try {
            target = file.at(key).get<V>();
        } catch (const json::exception &e) {
            throw SchemaError(std::string("config key '") + key + "': " + e.what());
        }
    }
}

// ---------------------------------------------------------------- gen

struct GenArgs {
    std::string config;
    int qubits = 3;
    std::vector<std::string> roster;
    size_t samples = 600;
    std::string scheme = "LOCAL_PAULI";
    double epsilon = 0.0;
    int64_t shots = -1;
    uint64_t seed = 0;
    std::string local_unitaries = "none";
    unsigned workers = 1;
    std::string out;
    std::string csv;
};

GenerationConfig resolve_generation(int qubits, const std::vector<std::string> &roster, size_t samples,
                                    const std::string &scheme, double epsilon, int64_t shots, uint64_t seed,
                                    const std::string &local_unitaries, unsigned workers) {
    GenerationConfig g;
    g.roster = roster.empty() ? default_roster(qubits) : roster_from_names(qubits, roster);
    g.bases = build_basis_set(qubits, parse_scheme(scheme));
    g.noise = NoiseConfig::from_codes(epsilon, shots);
    g.local_unitaries = parse_local_unitary_mode(local_unitaries);
    g.n_samples = samples;
    g.root_seed = seed;
    g.workers = workers;
    return g;
}

void add_gen(CLI::App &app, std::vector<std::string> argv) {
    auto args = std::make_shared<GenArgs>();
    CLI::App *cmd = app.add_subcommand("gen", "Generate a labeled measurement dataset (.entd)");
    cmd->add_option("--config", args->config, "JSON file with any of the flag names below as keys");
    auto *o_q = cmd->add_option("--qubits", args->qubits, "Number of qubits (3 or 4)");
    auto *o_r = cmd->add_option("--roster", args->roster, "Comma-separated family names (default: full roster)")
                    ->delimiter(',');
    auto *o_n = cmd->add_option("--samples", args->samples, "Number of samples");
    auto *o_s = cmd->add_option("--scheme", args->scheme, "Measurement scheme");
    auto *o_e = cmd->add_option("--epsilon", args->epsilon, "Dephasing strength in [0, 1]");
    auto *o_sh = cmd->add_option("--shots", args->shots, "Shots per setting, -1 for exact probabilities");
    auto *o_seed = cmd->add_option("--seed", args->seed, "Root seed");
    auto *o_lu = cmd->add_option("--local-unitaries", args->local_unitaries, "none | haar");
    auto *o_w = cmd->add_option("--workers", args->workers, "Worker threads (output does not depend on it)");
    cmd->add_option("--out", args->out, "Output .entd path")->required();
    cmd->add_option("--csv", args->csv, "Also write the samples as CSV");
    cmd->callback([args, argv, o_q, o_r, o_n, o_s, o_e, o_sh, o_seed, o_lu, o_w] {
        if (!args->config.empty()) {
            json file = read_json_file(args->config);
            take_from(file, "qubits", args->qubits, o_q);
            take_from(file, "roster", args->roster, o_r);
            take_from(file, "samples", args->samples, o_n);
            take_from(file, "scheme", args->scheme, o_s);
            take_from(file, "epsilon", args->epsilon, o_e);
            take_from(file, "shots", args->shots, o_sh);
            take_from(file, "seed", args->seed, o_seed);
            take_from(file, "local_unitaries", args->local_unitaries, o_lu);
            take_from(file, "workers", args->workers, o_w);
        }
        if (args->samples == 0) {
            throw DomainError("--samples must be >= 1");
        }
        Manifest manifest{"gen", argv};
        GenerationConfig g = resolve_generation(args->qubits, args->roster, args->samples, args->scheme,
                                                args->epsilon, args->shots, args->seed, args->local_unitaries,
                                                args->workers);
        Dataset d = generate(g);
        write_dataset(d, args->out);
        manifest.outputs.push_back(args->out);
        if (!args->csv.empty()) {
            write_dataset_csv(d, args->csv);
            manifest.outputs.push_back(args->csv);
        }
        manifest.config = {{"qubits", args->qubits},
                           {"roster", roster_names(g.roster)},
                           {"samples", args->samples},
                           {"scheme", to_string(g.bases.scheme)},
                           {"epsilon", g.noise.dephasing_epsilon},
                           {"shots", g.noise.shots_code()},
                           {"seed", args->seed},
                           {"local_unitaries", to_string(g.local_unitaries)},
                           {"workers", args->workers}};
        manifest.seeds = {{"root_seed", args->seed}};
        manifest.write(args->out);
        std::cout << "wrote " << d.size() << " samples (M = " << d.feature_length() << ", K = " << d.n_classes()
                  << ") to " << args->out << "\n";
    });
}

// ---------------------------------------------------------------- model / train config resolution

struct ModelArgs {
    std::string model_config;
    std::string train_config;
    std::string arch;
    int64_t init_seed = -1;
    int64_t epochs = -1;
    double lr = 0;
    int64_t batch_size = -1;
    int64_t train_seed = -1;
    int64_t eval_every = -1;
};

void add_model_flags(CLI::App *cmd, ModelArgs &a, bool with_arch) {
    cmd->add_option("--model-config", a.model_config, "Model config JSON (see configs/default_model.json)");
    cmd->add_option("--train-config", a.train_config, "Train config JSON (see configs/default_train.json)");
    if (with_arch) {
        cmd->add_option("--arch", a.arch, "ARCHI1 | ARCHI2 | CNN | BILSTM | MLP (default ARCHI2)");
    }
    cmd->add_option("--init-seed", a.init_seed, "Model initialization seed");
    cmd->add_option("--epochs", a.epochs, "Training epochs");
    cmd->add_option("--lr", a.lr, "Adam learning rate");
    cmd->add_option("--batch-size", a.batch_size, "Mini-batch size (0 = min(32, n))");
    cmd->add_option("--train-seed", a.train_seed, "Shuffling seed");
    cmd->add_option("--eval-every", a.eval_every, "Evaluate the test set every n epochs (0 = never)");
}

/// Model config from file, then flags, then M and K from the data when absent.
ModelConfig resolve_model(const ModelArgs &a, const std::string &arch, const Dataset &data) {
    json j = a.model_config.empty() ? json::object() : read_json_file(a.model_config);
    if (!j.is_object()) {
        throw SchemaError("model config must be a JSON object");
    }
    if (!arch.empty()) {
        j["architecture"] = arch;
    }
    if (a.init_seed >= 0) {
        j["init_seed"] = a.init_seed;
    }
    if (!j.contains("feature_length")) {
        j["feature_length"] = data.feature_length();
    }
    if (!j.contains("n_classes")) {
        j["n_classes"] = data.n_classes();
    }
    return ModelConfig::from_json(j);
}

TrainConfig resolve_train(const ModelArgs &a) {
    json j = a.train_config.empty() ? json::object() : read_json_file(a.train_config);
    if (!j.is_object()) {
        throw SchemaError("train config must be a JSON object");
    }
    if (a.epochs >= 0) j["epochs"] = a.epochs;
    if (a.lr != 0) j["learning_rate"] = a.lr;
    if (a.batch_size >= 0) j["batch_size"] = a.batch_size;
    if (a.train_seed >= 0) j["seed"] = a.train_seed;
    if (a.eval_every >= 0) j["eval_every"] = a.eval_every;
    return TrainConfig::from_json(j);
}

/// Train and test files must describe the same measurement problem.
void check_same_problem(const Dataset &a, const Dataset &b) {
    const DatasetMetadata &x = a.metadata();
    const DatasetMetadata &y = b.metadata();
    if (x.n_qubits != y.n_qubits || x.feature_length != y.feature_length || x.scheme != y.scheme ||
        x.roster != y.roster) {
        throw SchemaError("training and test files differ in qubits, scheme, roster or feature length");
    }
}

template <typename T>
json train_and_report(const ModelConfig &mc, const TrainConfig &tc, const Dataset &train_set,
                      const Dataset *test_set, const std::string &out, const std::string &loss_out,
                      const std::string &confusion_out) {
    Model<T> model(mc);
    auto started = std::chrono::steady_clock::now();
    LossHistory history = train(model, train_set, test_set, tc);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    nn::write_checkpoint(model.to_checkpoint(), out);
    write_text_atomic(loss_out, history.to_csv());

    const Dataset &eval_set = test_set != nullptr ? *test_set : train_set;
    Metrics metrics = evaluate(model, eval_set);
    const std::vector<std::string> &names = train_set.metadata().roster;
    write_text_atomic(confusion_out, metrics.confusion_csv(names));
    double epoch_total = 0;
    for (double s : history.epoch_seconds) {
        epoch_total += s;
    }
    return {{"architecture", to_string(mc.architecture)},
            {"model_config", mc.to_json()},
            {"train_config", tc.to_json()},
            {"float64", std::is_same_v<T, double>},
            {"param_count", model.param_count()},
            {"train_samples", train_set.size()},
            {"evaluated_on", test_set != nullptr ? "test" : "train"},
            {"epochs_run", history.epochs()},
            {"final_loss", history.mean_loss.empty() ? json(nullptr) : json(history.mean_loss.back())},
            {"metrics", metrics.to_json(names)},
            {"timing",
             {{"train_seconds", seconds},
              {"mean_epoch_seconds", history.epochs() ? epoch_total / history.epochs() : 0.0}}}};
}

// ---------------------------------------------------------------- train

void add_train(CLI::App &app, std::vector<std::string> argv) {
    struct Args {
        ModelArgs model;
        std::string data, test_data, out, metrics_out, loss_out, confusion_out;
    };
    auto args = std::make_shared<Args>();
    CLI::App *cmd = app.add_subcommand("train", "Train a model and write a checkpoint, loss history and metrics");
    cmd->add_option("--data", args->data, "Training .entd file")->required();
    cmd->add_option("--test-data", args->test_data, "Held-out .entd file for metrics");
    add_model_flags(cmd, args->model, true);
    cmd->add_option("--out", args->out, "Output checkpoint path")->required();
    cmd->add_option("--metrics-out", args->metrics_out, "Metrics JSON (default <out>.metrics.json)");
    cmd->add_option("--loss-out", args->loss_out, "Loss history CSV (default <out>.loss.csv)");
    cmd->add_option("--confusion-out", args->confusion_out, "Confusion matrix CSV (default <out>.confusion.csv)");
    cmd->callback([args, argv] {
        Manifest manifest{"train", argv};
        Dataset train_set = read_dataset(args->data);
        manifest.inputs.push_back(args->data);
        std::optional<Dataset> test_set;
        if (!args->test_data.empty()) {
            test_set = read_dataset(args->test_data);
            check_same_problem(train_set, *test_set);
            manifest.inputs.push_back(args->test_data);
        }
        ModelConfig mc = resolve_model(args->model, args->model.arch, train_set);
        TrainConfig tc = resolve_train(args->model);
        check_compatible(mc, train_set, "training data");

        std::string metrics_out = args->metrics_out.empty() ? args->out + ".metrics.json" : args->metrics_out;
        std::string loss_out = args->loss_out.empty() ? args->out + ".loss.csv" : args->loss_out;
        std::string confusion_out =
            args->confusion_out.empty() ? args->out + ".confusion.csv" : args->confusion_out;
        const Dataset *test_ptr = test_set ? &*test_set : nullptr;
        json report = float64_mode()
                          ? train_and_report<double>(mc, tc, train_set, test_ptr, args->out, loss_out, confusion_out)
                          : train_and_report<float>(mc, tc, train_set, test_ptr, args->out, loss_out, confusion_out);
        report["train_data"] = args->data;
        report["test_data"] = args->test_data;
        write_json(metrics_out, report);

        manifest.outputs = {args->out, metrics_out, loss_out, confusion_out};
        manifest.config = {{"model", mc.to_json()}, {"train", tc.to_json()}};
        manifest.seeds = {{"init_seed", mc.init_seed}, {"train_seed", tc.seed}};
        manifest.write(args->out);
        std::cout << to_string(mc.architecture) << ": accuracy " << report["metrics"]["accuracy"].get<double>()
                  << " on " << report["evaluated_on"].get<std::string>() << " data, final loss "
                  << report["final_loss"].dump() << "\n";
    });
}

// ---------------------------------------------------------------- eval

template <typename T>
Metrics evaluate_checkpoint(const nn::Checkpoint &ck, const Dataset &data) {
    Model<T> model = Model<T>::from_checkpoint(ck);
    check_compatible(model.config(), data, "evaluation data");
    return evaluate(model, data);
}

void add_eval(CLI::App &app, std::vector<std::string> argv) {
    struct Args {
        std::string checkpoint, data, metrics_out, confusion_out;
    };
    auto args = std::make_shared<Args>();
    CLI::App *cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
    cmd->add_option("--checkpoint", args->checkpoint, "ENTP checkpoint")->required();
    cmd->add_option("--data", args->data, ".entd file")->required();
    cmd->add_option("--metrics-out", args->metrics_out, "Metrics JSON (default <checkpoint>.eval.json)");
    cmd->add_option("--confusion-out", args->confusion_out, "Confusion matrix CSV");
    cmd->callback([args, argv] {
        Manifest manifest{"eval", argv};
        nn::Checkpoint ck = nn::read_checkpoint(args->checkpoint);
        Dataset data = read_dataset(args->data);
        Metrics metrics =
            float64_mode() ? evaluate_checkpoint<double>(ck, data) : evaluate_checkpoint<float>(ck, data);
        const std::vector<std::string> &names = data.metadata().roster;
        std::string metrics_out =
            args->metrics_out.empty() ? args->checkpoint + ".eval.json" : args->metrics_out;
        write_json(metrics_out, {{"checkpoint", args->checkpoint},
                                 {"data", args->data},
                                 {"model_config", ck.config},
                                 {"metrics", metrics.to_json(names)}});
        manifest.outputs.push_back(metrics_out);
        if (!args->confusion_out.empty()) {
            write_text_atomic(args->confusion_out, metrics.confusion_csv(names));
            manifest.outputs.push_back(args->confusion_out);
        }
        manifest.inputs = {args->checkpoint, args->data};
        manifest.config = {{"model", ck.config}};
        manifest.write(metrics_out);
        std::cout << "accuracy " << metrics.accuracy << " (" << metrics.total << " samples), macro F1 "
                  << metrics.macro_f1() << "\n";
        for (size_t c = 0; c < metrics.n_classes; ++c) {
            std::cout << "  " << std::setw(16) << std::left << (c < names.size() ? names[c] : std::to_string(c))
                      << " F1 " << std::fixed << std::setprecision(4) << metrics.f1[c] << "  TPR " << metrics.tpr[c]
                      << "  FPR " << metrics.fpr[c] << "\n";
        }
    });
}

// ---------------------------------------------------------------- sweeps

struct SweepArgs {
    ModelArgs model;
    std::vector<size_t> sizes;
    std::vector<std::string> archs = {"archi1", "archi2"};
    size_t repeats = 1;
    uint64_t seed = 0;
    unsigned workers = 1;
    std::string out;
};

void add_sweep_flags(CLI::App *cmd, SweepArgs &a) {
    add_model_flags(cmd, a.model, false);
    cmd->add_option("--sizes", a.sizes, "Comma-separated training-set sizes")->delimiter(',');
    cmd->add_option("--archs", a.archs, "Comma-separated architectures")->delimiter(',');
    cmd->add_option("--repeats", a.repeats, "Repeats per point");
    cmd->add_option("--seed", a.seed, "Subsampling seed");
    cmd->add_option("--workers", a.workers, "Concurrent sweep points (results do not depend on it)");
    cmd->add_option("--out", a.out, "Output CSV")->required();
}

SweepOptions resolve_sweep(const SweepArgs &a, const Dataset &train_set) {
    SweepOptions o;
    o.sizes = a.sizes.empty() ? std::vector<size_t>{train_set.size()} : a.sizes;
    for (const std::string &arch : a.archs) {
        o.models.push_back(resolve_model(a.model, arch, train_set));
    }
    o.train = resolve_train(a.model);
    o.repeats = a.repeats;
    o.seed = a.seed;
    o.workers = a.workers;
    o.float64 = float64_mode();
    return o;
}

void write_sweep(const SweepTable &table, const SweepOptions &o, const std::string &out, Manifest &manifest,
                 json extra_config) {
    write_text_atomic(out, table.to_csv());
    std::string summary_path = out + ".summary.json";
    json models = json::array();
    for (const ModelConfig &mc : o.models) {
        models.push_back(mc.to_json());
    }
    extra_config["models"] = models;
    extra_config["train"] = o.train.to_json();
    extra_config["sizes"] = o.sizes;
    extra_config["repeats"] = o.repeats;
    extra_config["seed"] = o.seed;
    write_json(summary_path, {{"config", extra_config}, {"groups", table.summary()}});
    manifest.outputs = {out, summary_path};
    manifest.config = extra_config;
    manifest.seeds = {{"subsample_seed", o.seed}, {"train_seed", o.train.seed}};
    manifest.write(out);
    for (const auto &g : table.summary()) {
        std::cout << std::setw(8) << std::left << g["architecture"].get<std::string>() << " n=" << std::setw(7)
                  << g["train_size"].get<size_t>() << " eps=" << std::defaultfloat << g["epsilon"].get<double>()
                  << " shots=" << g["shots"].get<int64_t>() << "  accuracy " << std::fixed << std::setprecision(4)
                  << g["accuracy_mean"].get<double>() << " +- " << g["accuracy_std"].get<double>() << "\n";
    }
}

void add_sweep(CLI::App &app, std::vector<std::string> argv) {
    struct Args {
        SweepArgs sweep;
        std::string data, test_data;
    };
    auto args = std::make_shared<Args>();
    CLI::App *cmd = app.add_subcommand("sweep", "Accuracy against training-set size");
    cmd->add_option("--data", args->data, "Base training .entd file")->required();
    cmd->add_option("--test-data", args->test_data, "Test .entd file")->required();
    add_sweep_flags(cmd, args->sweep);
    cmd->callback([args, argv] {
        Manifest manifest{"sweep", argv};
        Dataset train_set = read_dataset(args->data);
        Dataset test_set = read_dataset(args->test_data);
        check_same_problem(train_set, test_set);
        manifest.inputs = {args->data, args->test_data};
        SweepOptions o = resolve_sweep(args->sweep, train_set);
        SweepTable table = sweep_sample_size(train_set, test_set, o);
        write_sweep(table, o, args->sweep.out, manifest, {{"data", args->data}, {"test_data", args->test_data}});
    });
}

NoiseConfig parse_noise_point(const std::string &text) {
    auto colon = text.find(':');
    try {
        double eps = std::stod(text.substr(0, colon));
        int64_t shots = colon == std::string::npos ? -1 : std::stoll(text.substr(colon + 1));
        return NoiseConfig::from_codes(eps, shots);
    } catch (const std::logic_error &) {
        throw DomainError("bad noise point '" + text + "' (expected EPS[:SHOTS], SHOTS = -1 for exact)");
    }
}

void add_noise_sweep(CLI::App &app, std::vector<std::string> argv) {
    struct Args {
        SweepArgs sweep;
        int qubits = 3;
        std::vector<std::string> roster;
        std::string local_unitaries = "none";
        size_t train_samples = 0;
        size_t test_samples = 2000;
        uint64_t train_data_seed = 1;
        uint64_t test_data_seed = 2;
        std::vector<std::string> noise = {"0:-1", "0.05:-1", "0.1:-1"};
        std::string noise_on = "both";
    };
    auto args = std::make_shared<Args>();
    CLI::App *cmd = app.add_subcommand("noise-sweep", "Accuracy against dephasing and shot noise");
    cmd->add_option("--qubits", args->qubits, "Number of qubits (3 or 4)");
    cmd->add_option("--roster", args->roster, "Comma-separated family names")->delimiter(',');
    cmd->add_option("--local-unitaries", args->local_unitaries, "none | haar");
    cmd->add_option("--train-samples", args->train_samples, "Generated training pool (default: largest size)");
    cmd->add_option("--test-samples", args->test_samples, "Generated test set size");
    cmd->add_option("--train-data-seed", args->train_data_seed, "Root seed of the training pool");
    cmd->add_option("--test-data-seed", args->test_data_seed, "Root seed of the test set");
    cmd->add_option("--noise", args->noise, "Comma-separated EPS:SHOTS points, SHOTS = -1 for exact")
        ->delimiter(',');
    cmd->add_option("--noise-on", args->noise_on, "both | train | test")
        ->check(CLI::IsMember({"both", "train", "test"}));
    add_sweep_flags(cmd, args->sweep);
    cmd->callback([args, argv] {
        Manifest manifest{"noise-sweep", argv};
        std::vector<NoiseConfig> noises;
        for (const std::string &n : args->noise) {
            noises.push_back(parse_noise_point(n));
        }
        if (args->sweep.sizes.empty()) {
            args->sweep.sizes = {100};
        }
        size_t max_size = *std::max_element(args->sweep.sizes.begin(), args->sweep.sizes.end());
        GenerationConfig train_gen = resolve_generation(
            args->qubits, args->roster, std::max(args->train_samples, max_size), "LOCAL_PAULI", 0.0, -1,
            args->train_data_seed, args->local_unitaries, args->sweep.workers);
        GenerationConfig test_gen = train_gen;
        test_gen.n_samples = args->test_samples;
        test_gen.root_seed = args->test_data_seed;
        NoisePlacement placement{args->noise_on != "test", args->noise_on != "train"};

        // A tiny stand-in so model resolution sees M and K.
        DatasetMetadata probe_meta;
        probe_meta.n_qubits = args->qubits;
        probe_meta.n_classes = static_cast<int>(train_gen.roster.size());
        probe_meta.feature_length = train_gen.bases.feature_length();
        Dataset shape_probe(probe_meta);
        SweepOptions o = resolve_sweep(args->sweep, shape_probe);
        o.sizes = args->sweep.sizes;
        SweepTable table = sweep_noise(noises, train_gen, test_gen, o, placement);
        write_sweep(table, o, args->sweep.out, manifest,
                    {{"qubits", args->qubits},
                     {"roster", roster_names(train_gen.roster)},
                     {"local_unitaries", args->local_unitaries},
                     {"train_samples", train_gen.n_samples},
                     {"test_samples", test_gen.n_samples},
                     {"train_data_seed", args->train_data_seed},
                     {"test_data_seed", args->test_data_seed},
                     {"noise", args->noise},
                     {"noise_on", args->noise_on}});
    });
}

// ---------------------------------------------------------------- gradcheck

void add_gradcheck(CLI::App &app, std::vector<std::string> argv, int &exit_code) {
    struct Args {
        size_t seeds = 20;
        uint64_t seed = 0;
        bool inject_fault = false;
        std::string json_out;
    };
    auto args = std::make_shared<Args>();
    CLI::App *cmd = app.add_subcommand("gradcheck", "Finite-difference check of every layer's gradients");
    cmd->add_option("--seeds", args->seeds, "Random shapes/inputs per layer");
    cmd->add_option("--seed", args->seed, "First seed");
    cmd->add_flag("--inject-fault", args->inject_fault, "Add a deliberately broken layer (harness self-test)");
    cmd->add_option("--json", args->json_out, "Write the report as JSON");
    cmd->callback([args, argv, &exit_code] {
        std::vector<nn::GradCheckReport> reports =
            nn::grad_check_battery(args->seeds, args->seed, args->inject_fault);
        bool all = true;
        json j = json::array();
        for (const auto &r : reports) {
            all = all && r.passed();
            std::cout << (r.passed() ? "PASS " : "FAIL ") << std::setw(38) << std::left << r.layer
                      << " max rel err " << std::scientific << std::setprecision(3) << r.max_rel_error
                      << "  (tol " << r.tolerance << ", " << r.checked << " entries)";
            if (!r.passed()) {
                std::cout << "  worst " << r.worst.tensor << "[" << r.worst.index << "] analytic "
                          << r.worst.analytic << " numeric " << r.worst.numeric;
            }
            std::cout << "\n";
            j.push_back({{"layer", r.layer},
                         {"passed", r.passed()},
                         {"max_rel_error", r.max_rel_error},
                         {"tolerance", r.tolerance},
                         {"checked", r.checked},
                         {"worst", {{"tensor", r.worst.tensor},
                                    {"index", r.worst.index},
                                    {"analytic", r.worst.analytic},
                                    {"numeric", r.worst.numeric}}}});
        }
        if (!args->json_out.empty()) {
            write_json(args->json_out, {{"seeds", args->seeds}, {"first_seed", args->seed}, {"layers", j}});
            Manifest manifest{"gradcheck", argv};
            manifest.config = {{"seeds", args->seeds}, {"inject_fault", args->inject_fault}};
            manifest.seeds = {{"first_seed", args->seed}};
            manifest.outputs = {args->json_out};
            manifest.write(args->json_out);
        }
        std::cout << (all ? "all layers pass\n" : "gradient check FAILED\n");
        exit_code = all ? kOk : kNumeric;
    });
}

// ---------------------------------------------------------------- inspect

json inspect_dataset(const Dataset &d) {
    const DatasetMetadata &m = d.metadata();
    const size_t block = size_t{1} << m.n_qubits;
    size_t out_of_range = 0;
    size_t bad_sums = 0;
    float lo = std::numeric_limits<float>::infinity();
    float hi = -lo;
    for (size_t i = 0; i < d.size(); ++i) {
        std::span<const float> f = d.features(i);
        bool range_ok = true;
        bool sums_ok = true;
        for (size_t b = 0; b + block <= f.size(); b += block) {
            double s = 0;
            for (size_t k = b; k < b + block; ++k) {
                float v = f[k];
                if (!(v >= 0.0f && v <= 1.0f)) {
                    range_ok = false;
                }
                lo = std::min(lo, v);
                hi = std::max(hi, v);
                s += v;
            }
            if (!(std::abs(s - 1.0) <= 1e-4)) {
                sums_ok = false;
            }
        }
        out_of_range += range_ok ? 0 : 1;
        bad_sums += sums_ok ? 0 : 1;
    }
    // label order, not name order
    json hist = json::array();
    std::vector<size_t> counts = d.class_counts();
    for (size_t c = 0; c < counts.size(); ++c) {
        hist.push_back({{"label", c}, {"family", c < m.roster.size() ? m.roster[c] : std::to_string(c)},
                        {"count", counts[c]}});
    }
    json warnings = json::array();
    if (out_of_range > 0) {
        warnings.push_back(std::to_string(out_of_range) + " samples have features outside [0, 1]");
    }
    if (bad_sums > 0) {
        warnings.push_back(std::to_string(bad_sums) + " samples have an outcome block not summing to 1");
    }
    return {{"type", "dataset"},
            {"metadata", m.to_json()},
            {"samples", d.size()},
            {"class_histogram", hist},
            {"feature_min", d.size() ? json(lo) : json(nullptr)},
            {"feature_max", d.size() ? json(hi) : json(nullptr)},
            {"warnings", warnings}};
}

json inspect_checkpoint(const nn::Checkpoint &ck) {
    json tensors = json::array();
    size_t total = 0;
    size_t non_finite = 0;
    for (const auto &t : ck.tensors) {
        double sq = 0;
        for (float v : t.values.values()) {
            if (!std::isfinite(v)) {
                ++non_finite;
            } else {
                sq += static_cast<double>(v) * v;
            }
        }
        total += t.values.size();
        tensors.push_back({{"name", t.name}, {"shape", t.values.shape()}, {"rms", std::sqrt(sq / t.values.size())}});
    }
    json warnings = json::array();
    if (non_finite > 0) {
        warnings.push_back(std::to_string(non_finite) + " non-finite parameter values");
    }
    return {{"type", "checkpoint"},
            {"config", ck.config},
            {"parameters", total},
            {"tensors", tensors},
            {"warnings", warnings}};
}

void add_inspect(CLI::App &app, int &exit_code) {
    struct Args {
        std::string path;
        bool json_out = false;
    };
    auto args = std::make_shared<Args>();
    CLI::App *cmd = app.add_subcommand("inspect", "Summarize a dataset or checkpoint");
    cmd->add_option("path", args->path, ".entd or ENTP file")->required();
    cmd->add_flag("--json", args->json_out, "Print JSON instead of text");
    cmd->callback([args, &exit_code] {
        std::vector<uint8_t> bytes = read_file(args->path);
        std::string magic(bytes.begin(), bytes.begin() + std::min<size_t>(4, bytes.size()));
        json report;
        if (magic == std::string(kDatasetMagic, 4)) {
            report = inspect_dataset(decode_dataset(bytes));
        } else if (magic == std::string(nn::kCheckpointMagic, 4)) {
            report = inspect_checkpoint(nn::decode_checkpoint(bytes));
        } else {
            throw FormatError(FormatError::Kind::kBadMagic, args->path + " is neither a dataset nor a checkpoint");
        }
        report["path"] = args->path;
        if (args->json_out) {
            std::cout << report.dump(2) << "\n";
        } else if (report["type"] == "dataset") {
            const json &m = report["metadata"];
            std::cout << args->path << ": dataset, " << report["samples"] << " samples, " << m["n_qubits"]
                      << " qubits, M = " << m["feature_length"] << ", scheme " << m["scheme"].get<std::string>()
                      << ", epsilon " << m["dephasing_epsilon"] << ", shots " << m["shots"] << ", seed "
                      << m["root_seed"] << "\n  class histogram:";
            for (const auto &item : report["class_histogram"]) {
                std::cout << " " << item["family"].get<std::string>() << "=" << item["count"];
            }
            std::cout << "\n  feature range [" << report["feature_min"] << ", " << report["feature_max"] << "]\n";
        } else {
            std::cout << args->path << ": checkpoint, " << report["config"]["architecture"].get<std::string>()
                      << ", " << report["parameters"] << " parameters in " << report["tensors"].size()
                      << " tensors\n";
        }
        for (const auto &w : report["warnings"]) {
            std::cerr << "warning: " << w.get<std::string>() << "\n";
        }
        exit_code = kOk;
    });
}

}  // namespace

int main(int argc, char **argv) {
    std::vector<std::string> args(argv, argv + argc);
    CLI::App app{"Entanglement-family classification from local measurement statistics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kCreatorVersion);
    int exit_code = kOk;
    add_gen(app, args);
    add_train(app, args);
    add_eval(app, args);
    add_sweep(app, args);
    add_noise_sweep(app, args);
    add_gradcheck(app, args, exit_code);
    add_inspect(app, exit_code);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    } catch (const SchemaError &e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kSchema;
    } catch (const NumericError &e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumeric;
    } catch (const FormatError &e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kIo;
    } catch (const IoError &e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIo;
    } catch (const std::invalid_argument &e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOther;
    }
    return exit_code;
}
