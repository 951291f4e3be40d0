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

#ifndef ENTCLASS_NN_GRAD_CHECK_H
#define ENTCLASS_NN_GRAD_CHECK_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entclass/nn/layer.h"

namespace entclass::nn {

/// |a - n| / max(|a|, |n|, 1e-8)
double relative_error(double analytic, double numeric);

struct GradCheckEntry {
    std::string tensor;
    size_t index = 0;
    double analytic = 0;
    double numeric = 0;
    double rel_error = 0;
};

struct GradCheckReport {
    std::string layer;
    double tolerance = 0;
    double max_rel_error = 0;
    size_t checked = 0;
    GradCheckEntry worst;

    bool passed() const { return max_rel_error < tolerance; }
    void merge(const GradCheckReport &other);
};

/// Compares analytic gradients of the scalar loss sum(r * layer(input)), r a
/// fixed random projection drawn from `seed`, against central differences
/// (f(x + h) - f(x - h)) / 2h for every parameter entry and every input entry.
GradCheckReport grad_check(Layer<double> &layer, const Tensor<double> &input, double h, double tolerance,
                           uint64_t seed);

/// As above, but the central differences are taken on `reference`, the same
/// function evaluated in extended precision. Its parameters are overwritten
/// with the layer's. The analytic side stays 64-bit; only the
/// finite-difference rounding floor drops, which matters for entries whose
/// true gradient is tiny.
GradCheckReport grad_check(Layer<double> &layer, Layer<long double> &reference, const Tensor<double> &input,
                           double h, double tolerance, uint64_t seed);

/// Same comparison for softmax cross-entropy w.r.t. the logits.
GradCheckReport grad_check_softmax_cross_entropy(const Tensor<double> &logits, std::span<const uint16_t> labels,
                                                 double h, double tolerance);

/// Runs every layer kind through grad_check over `seeds` random shapes and
/// inputs in 64-bit mode and returns one merged report per layer:
///   dense, softmax_cross_entropy   < 1e-7
///   conv1d, maxpool1d              < 1e-6
///   leaky_relu, reshapes           < 1e-8
///   lstm (T=5), bilstm (T=4)       < 1e-5
/// inject_fault appends a dense layer whose weight gradient has its sign
/// flipped, which must be reported as failing.
std::vector<GradCheckReport> grad_check_battery(size_t seeds, uint64_t base_seed = 0, bool inject_fault = false);

}  // namespace entclass::nn

#endif
