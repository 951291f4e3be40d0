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

#ifndef ENTCLASS_CORE_ERROR_H
#define ENTCLASS_CORE_ERROR_H

#include <stdexcept>
#include <string>

namespace entclass {

/// Argument outside the mathematical domain of an operation (e.g. epsilon > 1).
class DomainError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Tensor / matrix / feature-vector dimensions do not agree.
class ShapeError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Unknown SLOCC family name or inconsistent roster.
class RosterError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Metadata of two artifacts (dataset, model config) disagree.
class SchemaError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or diverging values during training.
class NumericError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Binary file failed to parse. The kind distinguishes the failure mode.
class FormatError : public std::runtime_error {
   public:
    enum class Kind { kBadMagic, kVersionMismatch, kTruncated, kChecksum, kMalformed };

    FormatError(Kind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

   private:
    Kind kind_;
};

}  // namespace entclass

#endif
