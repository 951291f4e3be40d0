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

#ifndef ENTCLASS_CORE_RNG_H
#define ENTCLASS_CORE_RNG_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace entclass {

using std::size_t;

/// Counter-based random stream (Philox4x32-10).
///
/// The key is the root seed; the 128-bit counter holds the stream id in its
/// upper half and a block index in its lower half. Two streams with the same
/// (root_seed, stream_id) produce the same sequence, regardless of what other
/// streams were derived before them.
///
/// Satisfies UniformRandomBitGenerator, but the helpers below are preferred
/// over <random> distributions since those are not portable across standard
/// libraries.
class RngStream {
   public:
    using result_type = uint64_t;

    RngStream(uint64_t root_seed, uint64_t stream_id) : root_seed_(root_seed), stream_id_(stream_id) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next_u64(); }

    uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n). n must be > 0.
    uint64_t uniform_index(uint64_t n);
    /// Standard normal via Box-Muller.
    double normal();

    uint64_t root_seed() const { return root_seed_; }
    uint64_t stream_id() const { return stream_id_; }

   private:
    uint64_t root_seed_;
    uint64_t stream_id_;
    uint64_t block_ = 0;
    std::array<uint32_t, 4> buffer_{};
    int buffered_ = 0;
    bool has_spare_normal_ = false;
    double spare_normal_ = 0;
};

inline RngStream derive_stream(uint64_t root_seed, uint64_t stream_id) { return RngStream(root_seed, stream_id); }

/// Raw Philox4x32-10 block function, exposed for known-answer tests.
std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> counter, std::array<uint32_t, 2> key);

/// In-place Fisher-Yates shuffle driven by a stream.
template <typename Container>
void shuffle(Container &items, RngStream &rng) {
    for (size_t i = items.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.uniform_index(i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

}  // namespace entclass

#endif
