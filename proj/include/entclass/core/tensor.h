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

#ifndef ENTCLASS_CORE_TENSOR_H
#define ENTCLASS_CORE_TENSOR_H

#include <algorithm>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <new>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "entclass/core/error.h"

namespace entclass {

using Shape = std::vector<size_t>;

inline size_t shape_size(const Shape &shape) {
    return std::accumulate(shape.begin(), shape.end(), size_t{1}, std::multiplies<>());
}

std::string shape_str(const Shape &shape);

/// Cache-line aligned allocation. Eigen peels unaligned heads off its
/// vectorized reductions, so the summation order (and the float result)
/// would otherwise depend on where malloc happened to put a buffer.
template <typename T>
struct AlignedAllocator {
    using value_type = T;
    static constexpr std::align_val_t kAlignment{64};

    AlignedAllocator() = default;
    template <typename U>
    AlignedAllocator(const AlignedAllocator<U> &) {}

    T *allocate(size_t n) { return static_cast<T *>(::operator new(n * sizeof(T), kAlignment)); }
    void deallocate(T *p, size_t) { ::operator delete(p, kAlignment); }

    template <typename U>
    bool operator==(const AlignedAllocator<U> &) const {
        return true;
    }
};

template <typename T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

/// Dense row-major n-dimensional array of real scalars.
///
/// Invariants: every dimension is >= 1 and size() == product(shape).
template <typename T>
class Tensor {
   public:
    using value_type = T;

    Tensor() = default;
    explicit Tensor(Shape shape, T fill = T{0}) : shape_(std::move(shape)) {
        check_shape(shape_);
        data_.assign(shape_size(shape_), fill);
    }
    Tensor(Shape shape, std::initializer_list<T> data) : Tensor(std::move(shape), AlignedVector<T>(data)) {}
    Tensor(Shape shape, const std::vector<T> &data)
        : Tensor(std::move(shape), AlignedVector<T>(data.begin(), data.end())) {}
    Tensor(Shape shape, AlignedVector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
        check_shape(shape_);
        if (data_.size() != shape_size(shape_)) {
            throw ShapeError("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                             shape_str(shape_));
        }
    }

    static Tensor zeros(Shape shape) { return Tensor(std::move(shape)); }

    const Shape &shape() const { return shape_; }
    size_t rank() const { return shape_.size(); }
    size_t dim(size_t axis) const { return shape_.at(axis); }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T *data() { return data_.data(); }
    const T *data() const { return data_.data(); }
    std::span<T> values() { return data_; }
    std::span<const T> values() const { return data_; }
    AlignedVector<T> &storage() { return data_; }
    const AlignedVector<T> &storage() const { return data_; }
    std::vector<T> to_vector() const { return {data_.begin(), data_.end()}; }

    T &operator[](size_t i) { return data_[i]; }
    const T &operator[](size_t i) const { return data_[i]; }

    T &at(size_t i, size_t j) { return data_[i * shape_[1] + j]; }
    const T &at(size_t i, size_t j) const { return data_[i * shape_[1] + j]; }
    T &at(size_t i, size_t j, size_t k) { return data_[(i * shape_[1] + j) * shape_[2] + k]; }
    const T &at(size_t i, size_t j, size_t k) const { return data_[(i * shape_[1] + j) * shape_[2] + k]; }

    /// Same data, new shape. Element count must match.
    Tensor reshaped(Shape shape) const {
        if (shape_size(shape) != data_.size()) {
            throw ShapeError("cannot reshape " + shape_str(shape_) + " to " + shape_str(shape));
        }
        return Tensor(std::move(shape), data_);
    }

    void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

    template <typename U>
    Tensor<U> cast() const {
        return Tensor<U>(shape_, AlignedVector<U>(data_.begin(), data_.end()));
    }

    bool operator==(const Tensor &other) const = default;

   private:
    static void check_shape(const Shape &shape) {
        if (shape.empty()) {
            throw ShapeError("tensor shape must have at least one dimension");
        }
        for (size_t d : shape) {
            if (d == 0) {
                throw ShapeError("tensor dimensions must be >= 1, got " + shape_str(shape));
            }
        }
    }

    Shape shape_;
    AlignedVector<T> data_;
};

}  // namespace entclass

#endif
