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

#include "entclass/nn/grad_check.h"

#include <algorithm>
#include <cmath>

#include "entclass/core/error.h"
#include "entclass/nn/layers.h"
#include "entclass/nn/loss.h"
#include "entclass/nn/lstm.h"

namespace entclass::nn {

double relative_error(double analytic, double numeric) {
    double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    return std::abs(analytic - numeric) / scale;
}

void GradCheckReport::merge(const GradCheckReport &other) {
    if (other.checked == 0) {
        return;
    }
    if (checked == 0 || other.max_rel_error > max_rel_error) {
        max_rel_error = other.max_rel_error;
        worst = other.worst;
    }
    checked += other.checked;
}

namespace {

void record(GradCheckReport &report, const std::string &tensor, size_t index, double analytic, double numeric) {
    double err = relative_error(analytic, numeric);
    ++report.checked;
    if (err > report.max_rel_error || report.checked == 1) {
        report.max_rel_error = std::max(report.max_rel_error, err);
        report.worst = {tensor, index, analytic, numeric, err};
    }
}

/// f(x+h) - f(x-h) for f = sum(r * y). Differencing each output before the
/// projection is the same quantity in exact arithmetic, but outputs the
/// perturbation does not reach cancel exactly instead of adding rounding noise.
template <typename R>
double projected_difference(const Tensor<R> &plus, const Tensor<R> &minus, const Tensor<double> &projection) {
    R total = 0;
    for (size_t i = 0; i < plus.size(); ++i) {
        total += static_cast<R>(projection[i]) * (plus[i] - minus[i]);
    }
    return static_cast<double>(total);
}

Tensor<double> random_projection(const Shape &shape, uint64_t seed) {
    RngStream rng = derive_stream(seed, 0x9c);
    Tensor<double> projection(shape);
    for (double &r : projection.storage()) {
        // Magnitudes in [0.5, 1.5] with random sign keep every output in play.
        r = rng.uniform(0.5, 1.5) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    }
    return projection;
}

/// Central differences of sum(r * reference(x)) w.r.t. every parameter and
/// input entry, compared with the analytic gradients already accumulated.
template <typename R>
void compare_with_differences(GradCheckReport &report, Layer<R> &reference, const Tensor<R> &input,
                              const Tensor<double> &projection, const std::vector<Parameter<double> *> &analytic,
                              const Tensor<double> &grad_input, double h) {
    const R step = static_cast<R>(h);
    std::vector<Parameter<R> *> params = reference.parameters();
    for (size_t j = 0; j < params.size(); ++j) {
        Parameter<R> *p = params[j];
        for (size_t i = 0; i < p->value.size(); ++i) {
            const R saved = p->value[i];
            p->value[i] = saved + step;
            Tensor<R> plus = reference.forward(input);
            p->value[i] = saved - step;
            Tensor<R> minus = reference.forward(input);
            p->value[i] = saved;
            record(report, p->name, i, analytic[j]->grad[i], projected_difference(plus, minus, projection) / (2 * h));
        }
    }
    Tensor<R> x = input;
    for (size_t i = 0; i < x.size(); ++i) {
        const R saved = x[i];
        x[i] = saved + step;
        Tensor<R> plus = reference.forward(x);
        x[i] = saved - step;
        Tensor<R> minus = reference.forward(x);
        x[i] = saved;
        record(report, "input", i, grad_input[i], projected_difference(plus, minus, projection) / (2 * h));
    }
}

}  // namespace

GradCheckReport grad_check(Layer<double> &layer, const Tensor<double> &input, double h, double tolerance,
                           uint64_t seed) {
    GradCheckReport report;
    report.layer = layer.kind();
    report.tolerance = tolerance;
    Tensor<double> projection = random_projection(layer.output_shape(input.shape()), seed);
    layer.zero_grad();
    layer.forward(input);
    Tensor<double> grad_input = layer.backward(projection);
    compare_with_differences<double>(report, layer, input, projection, layer.parameters(), grad_input, h);
    return report;
}

GradCheckReport grad_check(Layer<double> &layer, Layer<long double> &reference, const Tensor<double> &input,
                           double h, double tolerance, uint64_t seed) {
    GradCheckReport report;
    report.layer = layer.kind();
    report.tolerance = tolerance;
    std::vector<Parameter<double> *> params = layer.parameters();
    std::vector<Parameter<long double> *> ref_params = reference.parameters();
    if (params.size() != ref_params.size()) {
        throw ShapeError("grad_check: reference layer has a different parameter list");
    }
    for (size_t j = 0; j < params.size(); ++j) {
        if (params[j]->value.shape() != ref_params[j]->value.shape()) {
            throw ShapeError("grad_check: reference parameter " + ref_params[j]->name + " has a different shape");
        }
        ref_params[j]->value = params[j]->value.cast<long double>();
    }
    Tensor<double> projection = random_projection(layer.output_shape(input.shape()), seed);
    layer.zero_grad();
    layer.forward(input);
    Tensor<double> grad_input = layer.backward(projection);
    compare_with_differences<long double>(report, reference, input.cast<long double>(), projection, params,
                                          grad_input, h);
    return report;
}

GradCheckReport grad_check_softmax_cross_entropy(const Tensor<double> &logits, std::span<const uint16_t> labels,
                                                 double h, double tolerance) {
    GradCheckReport report;
    report.layer = "softmax_cross_entropy";
    report.tolerance = tolerance;
    auto analytic = softmax_cross_entropy(logits, labels);
    Tensor<double> z = logits;
    for (size_t i = 0; i < z.size(); ++i) {
        const double saved = z[i];
        z[i] = saved + h;
        double plus = softmax_cross_entropy(z, labels).loss;
        z[i] = saved - h;
        double minus = softmax_cross_entropy(z, labels).loss;
        z[i] = saved;
        record(report, "logits", i, analytic.grad[i], (plus - minus) / (2 * h));
    }
    return report;
}

namespace {

constexpr double kStep = 1e-5;

/// Entries with magnitude in [0.5, 1.5] and random sign: no entry sits near
/// a LeakyReLU kink and no product underflows the relative-error floor.
Tensor<double> signed_input(const Shape &shape, RngStream &rng) {
    Tensor<double> t(shape);
    for (double &v : t.storage()) {
        v = rng.uniform(0.5, 1.5) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    }
    return t;
}

size_t pick(RngStream &rng, size_t lo, size_t hi) { return lo + rng.uniform_index(hi - lo + 1); }

/// Dense layer whose weight gradient comes out with the wrong sign.
class SignFlippedDense final : public Layer<double> {
   public:
    SignFlippedDense(size_t in, size_t out) : inner_(in, out) {}
    std::string kind() const override { return "dense_sign_flipped"; }
    Shape output_shape(const Shape &input) const override { return inner_.output_shape(input); }
    Tensor<double> forward(const Tensor<double> &input) override { return inner_.forward(input); }
    Tensor<double> backward(const Tensor<double> &grad_output) override {
        Tensor<double> before = inner_.weight().grad;
        Tensor<double> g = inner_.backward(grad_output);
        for (size_t i = 0; i < before.size(); ++i) {
            double delta = inner_.weight().grad[i] - before[i];
            inner_.weight().grad[i] = before[i] - delta;
        }
        return g;
    }
    std::vector<Parameter<double> *> parameters() override { return inner_.parameters(); }
    std::unique_ptr<Layer<double>> clone() const override { return std::make_unique<SignFlippedDense>(*this); }
    Dense<double> &inner() { return inner_; }

   private:
    Dense<double> inner_;
};

}  // namespace

std::vector<GradCheckReport> grad_check_battery(size_t seeds, uint64_t base_seed, bool inject_fault) {
    std::vector<GradCheckReport> reports;
    auto run = [&](const std::string &name, double tol, auto &&one_seed) {
        GradCheckReport merged;
        merged.layer = name;
        merged.tolerance = tol;
        for (size_t s = 0; s < seeds; ++s) {
            uint64_t seed = base_seed + s;
            RngStream rng = derive_stream(seed, 0x6c);
            merged.merge(one_seed(rng, seed, tol));
        }
        reports.push_back(merged);
    };

    run("dense", 1e-7, [](RngStream &rng, uint64_t seed, double tol) {
        size_t in = pick(rng, 1, 8), out = pick(rng, 1, 6);
        Dense<double> layer(in, out);
        Dense<long double> reference(in, out);
        layer.initialize(rng, 0.01);
        fill_uniform(layer.bias().value, 0.5, rng);
        return grad_check(layer, reference, signed_input({pick(rng, 1, 3), in}, rng), kStep, tol, seed);
    });
    run("softmax_cross_entropy", 1e-7, [](RngStream &rng, uint64_t, double tol) {
        size_t batch = pick(rng, 1, 4);
        size_t k = pick(rng, 2, 10);
        Tensor<double> logits = signed_input({batch, k}, rng);
        std::vector<uint16_t> labels(batch);
        for (uint16_t &l : labels) {
            l = static_cast<uint16_t>(rng.uniform_index(k));
        }
        return grad_check_softmax_cross_entropy(logits, labels, kStep, tol);
    });
    run("conv1d", 1e-6, [](RngStream &rng, uint64_t seed, double tol) {
        size_t k = pick(rng, 1, 5);
        size_t in = pick(rng, 1, 3), out = pick(rng, 1, 4), stride = pick(rng, 1, 2);
        Conv1d<double> layer(in, out, k, stride);
        Conv1d<long double> reference(in, out, k, stride);
        layer.initialize(rng, 0.01);
        fill_uniform(layer.bias().value, 0.5, rng);
        Shape shape = {pick(rng, 1, 2), in, k + pick(rng, 0, 10)};
        return grad_check(layer, reference, signed_input(shape, rng), kStep, tol, seed);
    });
    run("maxpool1d", 1e-6, [](RngStream &rng, uint64_t seed, double tol) {
        size_t window = pick(rng, 1, 3), stride = pick(rng, 1, 3);
        MaxPool1d<double> layer(window, stride);
        MaxPool1d<long double> reference(window, stride);
        Shape shape = {pick(rng, 1, 2), pick(rng, 1, 3), window + pick(rng, 0, 10)};
        // Distinct values 0.1 apart so no perturbation changes an argmax.
        Tensor<double> x(shape);
        std::vector<size_t> order(x.size());
        for (size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        shuffle(order, rng);
        for (size_t i = 0; i < x.size(); ++i) {
            x[i] = 0.1 * static_cast<double>(order[i]) - 1.0;
        }
        return grad_check(layer, reference, x, kStep, tol, seed);
    });
    run("leaky_relu", 1e-8, [](RngStream &rng, uint64_t seed, double tol) {
        LeakyReLU<double> layer(0.01);
        LeakyReLU<long double> reference(0.01);
        return grad_check(layer, reference, signed_input({pick(rng, 1, 3), pick(rng, 1, 4), pick(rng, 1, 8)}, rng), kStep,
                          tol, seed);
    });
    run("flatten", 1e-8, [](RngStream &rng, uint64_t seed, double tol) {
        Flatten<double> layer;
        Flatten<long double> reference;
        return grad_check(layer, reference, signed_input({pick(rng, 1, 3), pick(rng, 1, 4), pick(rng, 1, 6)}, rng), kStep,
                          tol, seed);
    });
    run("map_to_sequence", 1e-8, [](RngStream &rng, uint64_t seed, double tol) {
        MapToSequence<double> layer;
        MapToSequence<long double> reference;
        return grad_check(layer, reference, signed_input({pick(rng, 1, 3), pick(rng, 1, 4), pick(rng, 1, 6)}, rng), kStep,
                          tol, seed);
    });
    run("vector_to_sequence", 1e-8, [](RngStream &rng, uint64_t seed, double tol) {
        size_t segments = pick(rng, 1, 4);
        VectorToSequence<double> layer(segments);
        VectorToSequence<long double> reference(segments);
        return grad_check(layer, reference, signed_input({pick(rng, 1, 3), segments * pick(rng, 1, 3)}, rng), kStep, tol,
                          seed);
    });
    run("lstm (T=5)", 1e-5, [](RngStream &rng, uint64_t seed, double tol) {
        size_t in = pick(rng, 1, 4), hidden = pick(rng, 1, 4);
        BiLstm<double> layer(in, hidden, SummaryMode::kLast);
        BiLstm<long double> reference(in, hidden, SummaryMode::kLast);
        layer.initialize(rng);
        Shape shape = {5, pick(rng, 1, 2), in};
        return grad_check(layer, reference, signed_input(shape, rng), kStep, tol, seed);
    });
    run("bilstm (T=4)", 1e-5, [](RngStream &rng, uint64_t seed, double tol) {
        size_t in = pick(rng, 1, 4);
        BiLstm<double> layer(in, 3, SummaryMode::kLast);
        BiLstm<long double> reference(in, 3, SummaryMode::kLast);
        layer.initialize(rng);
        Shape shape = {4, pick(rng, 1, 2), in};
        return grad_check(layer, reference, signed_input(shape, rng), kStep, tol, seed);
    });
    run("bilstm_mean (T=4)", 1e-5, [](RngStream &rng, uint64_t seed, double tol) {
        size_t in = pick(rng, 1, 4);
        BiLstm<double> layer(in, 3, SummaryMode::kMean);
        BiLstm<long double> reference(in, 3, SummaryMode::kMean);
        layer.initialize(rng);
        Shape shape = {4, pick(rng, 1, 2), in};
        return grad_check(layer, reference, signed_input(shape, rng), kStep, tol, seed);
    });
    if (inject_fault) {
        run("dense_sign_flipped (injected fault)", 1e-7, [](RngStream &rng, uint64_t seed, double tol) {
            size_t in = pick(rng, 1, 8), out = pick(rng, 1, 6);
            SignFlippedDense layer(in, out);
            Dense<long double> reference(in, out);
            layer.inner().initialize(rng, 0.01);
            return grad_check(layer, reference, signed_input({pick(rng, 1, 3), in}, rng), kStep, tol, seed);
        });
    }
    return reports;
}

}  // namespace entclass::nn
