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

#include "choco/packing/layout.h"

#include <cstdlib>
#include <map>

#include <json.hpp>

#include "choco/common/error.h"

namespace choco::packing {

std::size_t NextPowerOfTwo(std::size_t x) {
  std::size_t p = 1;
  while (p < x) p <<= 1;
  return p;
}

std::string PackingLayout::ToJson() const {
  nlohmann::json j = {
      {"channel_count", channel_count}, {"window", window}, {"margin", margin}, {"slot", slot}};
  return j.dump();
}

PackingLayout PackingLayout::FromJson(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    PackingLayout l;
    l.channel_count = j.at("channel_count").get<std::size_t>();
    l.window = j.at("window").get<std::size_t>();
    l.margin = j.at("margin").get<std::size_t>();
    l.slot = j.at("slot").get<std::size_t>();
    if (l.slot < l.window + 2 * l.margin) throw FormatError("layout slot too small");
    return l;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad layout json: ") + e.what());
  }
}

PackingLayout PlanLayout(std::size_t channel_count, std::size_t window, std::size_t max_rotation,
                         std::size_t n) {
  if (channel_count == 0 || window == 0) throw InvalidArgument("empty layout");
  PackingLayout l;
  l.channel_count = channel_count;
  l.window = window;
  l.margin = max_rotation;
  l.slot = NextPowerOfTwo(window + 2 * max_rotation);
  if (l.total() > n / 2) throw InvalidArgument("does not fit");
  return l;
}

std::vector<uint64_t> Pack(const std::vector<std::vector<uint64_t>>& channels,
                           const PackingLayout& layout, std::size_t n) {
  const std::size_t row = n / 2;
  if (channels.size() != layout.channel_count) throw InvalidArgument("wrong channel count");
  if (layout.total() > row) throw InvalidArgument("does not fit");
  const std::size_t w = layout.window, m = layout.margin;
  std::vector<uint64_t> out(row, 0);
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const auto& d = channels[c];
    if (d.size() != w) throw InvalidArgument("wrong channel length");
    uint64_t* base = out.data() + c * layout.slot;
    for (std::size_t i = 0; i < m; ++i) base[i] = d[(w - (m - i) % w) % w];
    for (std::size_t j = 0; j < w; ++j) base[m + j] = d[j];
    for (std::size_t i = 0; i < m; ++i) base[m + w + i] = d[i % w];
  }
  const std::size_t block = layout.total();
  if (row % block == 0) {
    for (std::size_t at = block; at < row; at += block) {
      std::copy(out.begin(), out.begin() + block, out.begin() + at);
    }
  }
  return out;
}

std::vector<std::vector<uint64_t>> Unpack(std::span<const uint64_t> slots,
                                          const PackingLayout& layout) {
  if (slots.size() < layout.total()) throw InvalidArgument("too few slots");
  std::vector<std::vector<uint64_t>> out(layout.channel_count);
  for (std::size_t c = 0; c < layout.channel_count; ++c) {
    const auto start = slots.begin() + layout.window_start(c);
    out[c].assign(start, start + layout.window);
  }
  return out;
}

PackedCiphertext WindowedRotate(const PackedCiphertext& in, int64_t r,
                                const bfv::Evaluator& evaluator, const bfv::GaloisKeys& keys) {
  const int64_t spent = in.rotation + r;
  if (std::llabs(spent) > static_cast<int64_t>(in.layout.margin)) {
    throw InvalidArgument("insufficient redundancy");
  }
  PackedCiphertext out{evaluator.Rotate(in.ct, r, keys), in.layout, spent};
  return out;
}

PackedCiphertext ChannelRotate(const PackedCiphertext& in, int64_t channel_steps,
                               const bfv::Evaluator& evaluator, const bfv::GaloisKeys& keys) {
  const int64_t step = channel_steps * static_cast<int64_t>(in.layout.slot);
  return PackedCiphertext{evaluator.Rotate(in.ct, step, keys), in.layout, in.rotation};
}

bfv::Ciphertext MaskedPermute(const bfv::Ciphertext& ct, std::span<const std::size_t> perm,
                              const bfv::Evaluator& evaluator, const bfv::GaloisKeys& keys) {
  const std::size_t n = evaluator.context().n();
  const std::size_t row = n / 2;
  if (perm.size() > row) throw InvalidArgument("permutation longer than a row");
  // Offsets in sorted order keep the accumulation order, and so the result,
  // deterministic.
  std::map<int64_t, std::vector<uint64_t>> masks;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] == kDontCare) continue;
    if (perm[i] >= row) throw InvalidArgument("permutation index out of range");
    const int64_t d = static_cast<int64_t>(perm[i]) - static_cast<int64_t>(i);
    auto& mask = masks[d];
    if (mask.empty()) mask.assign(n, 0);
    mask[i] = 1;
  }
  if (masks.empty()) throw InvalidArgument("empty permutation");
  bfv::Ciphertext acc;
  bool first = true;
  for (const auto& [d, mask] : masks) {
    const bfv::Ciphertext rotated = d == 0 ? ct : evaluator.Rotate(ct, d, keys);
    bfv::Ciphertext term = evaluator.MulPlain(rotated, bfv::Plaintext{mask});
    if (first) {
      acc = std::move(term);
      first = false;
    } else {
      evaluator.AddInPlace(acc, term);
    }
  }
  return acc;
}

std::vector<std::size_t> WindowedRotationPermutation(const PackingLayout& layout, int64_t r,
                                                     std::size_t n) {
  std::vector<std::size_t> perm(n / 2, kDontCare);
  const int64_t w = static_cast<int64_t>(layout.window);
  for (std::size_t c = 0; c < layout.channel_count; ++c) {
    const std::size_t start = layout.window_start(c);
    for (int64_t j = 0; j < w; ++j) {
      perm[start + j] = start + static_cast<std::size_t>((((j + r) % w) + w) % w);
    }
  }
  return perm;
}

}  // namespace choco::packing
