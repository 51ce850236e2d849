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

#include "choco/ring/sampler.h"

#include <sodium.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "choco/common/error.h"

namespace choco::ring {

namespace {

void EnsureSodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw Error("libsodium initialization failed");
}

}  // namespace

SeededSampler::SeededSampler(const Seed& seed, uint64_t position)
    : seed_(seed), position_(position), loaded_block_(std::numeric_limits<uint64_t>::max()) {
  EnsureSodium();
}

void SeededSampler::LoadBlock(uint64_t index) {
  uint8_t counter[8];
  for (int i = 0; i < 8; ++i) counter[i] = static_cast<uint8_t>(index >> (8 * i));
  crypto_generichash_blake2b(block_.data(), block_.size(), counter, sizeof(counter),
                             seed_.data(), seed_.size());
  loaded_block_ = index;
}

uint8_t SeededSampler::NextByte() {
  const uint64_t index = position_ / kBlockBytes;
  if (index != loaded_block_) LoadBlock(index);
  const uint8_t out = block_[position_ % kBlockBytes];
  ++position_;
  return out;
}

void SeededSampler::Fill(std::span<uint8_t> out) {
  for (auto& b : out) b = NextByte();
}

uint64_t SeededSampler::NextU64() {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(NextByte()) << (8 * i);
  return v;
}

uint64_t SeededSampler::UniformBelow(uint64_t bound) {
  if (bound == 0) throw InvalidArgument("empty range");
  if (bound == 1) return 0;
  const int bits = std::bit_width(bound - 1);
  const uint64_t mask = bits == 64 ? ~uint64_t{0} : (uint64_t{1} << bits) - 1;
  while (true) {
    const uint64_t v = NextU64() & mask;
    if (v < bound) return v;
  }
}

Seed DeriveSeed(const Seed& parent, std::string_view label, uint64_t index) {
  EnsureSodium();
  std::vector<uint8_t> message(label.begin(), label.end());
  message.push_back(0);
  for (int i = 0; i < 8; ++i) message.push_back(static_cast<uint8_t>(index >> (8 * i)));
  Seed out;
  crypto_generichash_blake2b(out.data(), out.size(), message.data(), message.size(),
                             parent.data(), parent.size());
  return out;
}

Seed SeedFromInteger(uint64_t value) {
  Seed zero{};
  return DeriveSeed(zero, "integer-seed", value);
}

std::vector<int64_t> DrawTernary(SeededSampler& sampler, std::size_t count) {
  std::vector<int64_t> out(count);
  for (auto& v : out) {
    uint8_t b;
    do {
      b = sampler.NextByte();
    } while (b >= 255);
    const int r = b % 3;
    v = r == 2 ? -1 : r;
  }
  return out;
}

std::vector<int64_t> DrawError(SeededSampler& sampler, std::size_t count, double sigma) {
  if (!(sigma > 0)) throw InvalidArgument("sigma must be positive");
  const int eta = std::max(1, static_cast<int>(std::lround(2 * sigma * sigma)));
  const int64_t bound = static_cast<int64_t>(std::floor(6 * sigma));
  std::vector<int64_t> out(count);
  for (auto& v : out) {
    while (true) {
      int64_t x = 0;
      int remaining = eta;
      while (remaining > 0) {
        const int take = std::min(remaining, 32);
        const uint64_t word = sampler.NextU64();
        const uint64_t mask = (uint64_t{1} << take) - 1;
        x += std::popcount(word & mask) - std::popcount((word >> 32) & mask);
        remaining -= take;
      }
      if (x >= -bound && x <= bound) {
        v = x;
        break;
      }
    }
  }
  return out;
}

RnsPoly LiftSigned(std::span<const int64_t> values, const RnsBase& base, std::size_t residues) {
  RnsPoly out(base.n(), residues);
  for (std::size_t i = 0; i < residues; ++i) {
    const Modulus& m = base.modulus(i);
    auto row = out.residue(i);
    for (std::size_t j = 0; j < values.size(); ++j) row[j] = m.FromSigned(values[j]);
  }
  return out;
}

RnsPoly SampleTernary(SeededSampler& sampler, const RnsBase& base, std::size_t n) {
  const auto values = DrawTernary(sampler, n);
  return LiftSigned(values, base, base.size());
}

RnsPoly SampleError(SeededSampler& sampler, const RnsBase& base, std::size_t n, double sigma) {
  const auto values = DrawError(sampler, n, sigma);
  return LiftSigned(values, base, base.size());
}

RnsPoly SampleUniform(SeededSampler& sampler, const RnsBase& base, std::size_t n) {
  RnsPoly out(n, base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const uint64_t q = base.modulus(i).value();
    for (auto& x : out.residue(i)) x = sampler.UniformBelow(q);
  }
  return out;
}

}  // namespace choco::ring
