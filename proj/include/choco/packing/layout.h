/*
 * Copyright 2026 The CHOCO Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CHOCO_PACKING_LAYOUT_H_
#define CHOCO_PACKING_LAYOUT_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "choco/bfv/ciphertext.h"
#include "choco/bfv/evaluator.h"
#include "choco/bfv/keys.h"

namespace choco::packing {

// Channel c owns slots [c*slot, (c+1)*slot) of the first batching row:
//
//   | left margin | window            | right margin | zero pad |
//     d[W-m..W-1]   d[0..W-1]           d[0..m-1]
//
// so a whole-row rotation by any |r| <= margin rotates every window
// cyclically.
struct PackingLayout {
  std::size_t channel_count = 0;
  std::size_t window = 0;
  std::size_t margin = 0;
  std::size_t slot = 0;

  std::size_t total() const { return channel_count * slot; }
  // Offset of channel c's first window element.
  std::size_t window_start(std::size_t c) const { return c * slot + margin; }

  std::string ToJson() const;
  static PackingLayout FromJson(const std::string& json);

  friend bool operator==(const PackingLayout&, const PackingLayout&) = default;
};

std::size_t NextPowerOfTwo(std::size_t x);

// Minimal layout: slot = next power of two >= window + 2 * max_rotation.
// Throws "does not fit" when channel_count * slot > n / 2.
PackingLayout PlanLayout(std::size_t channel_count, std::size_t window, std::size_t max_rotation,
                         std::size_t n);

// One batching row (n / 2 slots). When the channel block divides the row it
// is tiled across it, so channel rotations wrap cyclically.
std::vector<uint64_t> Pack(const std::vector<std::vector<uint64_t>>& channels,
                           const PackingLayout& layout, std::size_t n);
// Reads each channel's window span; margins and padding are never read.
std::vector<std::vector<uint64_t>> Unpack(std::span<const uint64_t> slots,
                                          const PackingLayout& layout);

// A packed ciphertext and the rotation already spent from its margins.
struct PackedCiphertext {
  bfv::Ciphertext ct;
  PackingLayout layout;
  int64_t rotation = 0;
};

// One bfv rotation by r, no multiplies. Throws "insufficient redundancy" if
// the cumulative rotation would exceed the margin.
PackedCiphertext WindowedRotate(const PackedCiphertext& in, int64_t r,
                                const bfv::Evaluator& evaluator, const bfv::GaloisKeys& keys);

// One bfv rotation by channel_steps * slot: channel c takes channel
// c + channel_steps's data.
PackedCiphertext ChannelRotate(const PackedCiphertext& in, int64_t channel_steps,
                               const bfv::Evaluator& evaluator, const bfv::GaloisKeys& keys);

inline constexpr std::size_t kDontCare = std::numeric_limits<std::size_t>::max();

// Gather over the first row: output slot i receives input slot perm[i]
// (kDontCare outputs are zeroed). Computed as the sum over distinct offsets
// d = perm[i] - i of MulPlain(Rotate(ct, d), mask_d).
bfv::Ciphertext MaskedPermute(const bfv::Ciphertext& ct, std::span<const std::size_t> perm,
                              const bfv::Evaluator& evaluator, const bfv::GaloisKeys& keys);

// The windowed rotation by r written as a gather: window slots move, every
// other slot is don't-care. Length n / 2.
std::vector<std::size_t> WindowedRotationPermutation(const PackingLayout& layout, int64_t r,
                                                     std::size_t n);

}  // namespace choco::packing

#endif  // CHOCO_PACKING_LAYOUT_H_
