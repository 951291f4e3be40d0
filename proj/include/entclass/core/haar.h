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

#ifndef ENTCLASS_CORE_HAAR_H
#define ENTCLASS_CORE_HAAR_H

#include <cstddef>

#include "entclass/core/cmatrix.h"
#include "entclass/core/rng.h"

namespace entclass {

/// Haar-distributed dim x dim unitary.
///
/// Draws a complex Ginibre matrix (entries (a + ib)/sqrt(2), a,b ~ N(0,1)),
/// orthonormalizes its columns by modified Gram-Schmidt. Gram-Schmidt yields the
/// QR factor whose R has a positive real diagonal, which is the phase
/// convention that makes Q exactly Haar distributed.
CMatrix haar_unitary(size_t dim, RngStream &rng);

}  // namespace entclass

#endif
