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

#ifndef CHOCO_RING_SAMPLER_H_
#define CHOCO_RING_SAMPLER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "choco/ring/rns.h"

namespace choco::ring {

using Seed = std::array<uint8_t, 32>;

// Deterministic randomness expanded from a 32-byte seed. Block i of the
// stream is BLAKE2b-512 keyed with the seed over the little-endian block
// counter i; the byte at stream offset `position` is therefore a pure
// function of (seed, position).
class SeededSampler {
 public:
  // Recorded in serialized parameter sets so peers agree on the expansion.
  static constexpr std::string_view kPrimitive = "blake2b-512-ctr";
  static constexpr std::size_t kBlockBytes = 64;

  explicit SeededSampler(const Seed& seed, uint64_t position = 0);

  const Seed& seed() const { return seed_; }
  uint64_t position() const { return position_; }

  void Fill(std::span<uint8_t> out);
  uint8_t NextByte();
  uint64_t NextU64();
  // Uniform in [0, bound) by rejection on the minimal bit mask.
  uint64_t UniformBelow(uint64_t bound);

 private:
  void LoadBlock(uint64_t index);

  Seed seed_;
  uint64_t position_;
  uint64_t loaded_block_;
  std::array<uint8_t, kBlockBytes> block_{};
};

// Seed for a named sub-stream, so independent uses of one master seed never
// share bytes.
Seed DeriveSeed(const Seed& parent, std::string_view label, uint64_t index = 0);
// Convenience for command-line and test seeds.
Seed SeedFromInteger(uint64_t value);

// Uniform over {-1, 0, 1}; -1 is stored as p - 1 in every residue.
RnsPoly SampleTernary(SeededSampler& sampler, const RnsBase& base, std::size_t n);
// Centered binomial with eta = round(2 sigma^2), rejected outside
// [-6 sigma, 6 sigma]. Variance is eta / 2, i.e. sigma^2 up to rounding.
RnsPoly SampleError(SeededSampler& sampler, const RnsBase& base, std::size_t n, double sigma);
// Uniform over Z_q, residue by residue.
RnsPoly SampleUniform(SeededSampler& sampler, const RnsBase& base, std::size_t n);

// Signed draws behind the polynomial samplers, exposed for statistics.
std::vector<int64_t> DrawTernary(SeededSampler& sampler, std::size_t count);
std::vector<int64_t> DrawError(SeededSampler& sampler, std::size_t count, double sigma);

// Lifts small signed integers into every residue of `base`.
RnsPoly LiftSigned(std::span<const int64_t> values, const RnsBase& base, std::size_t residues);

}  // namespace choco::ring

#endif  // CHOCO_RING_SAMPLER_H_
