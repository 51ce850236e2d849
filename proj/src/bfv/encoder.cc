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

#include "choco/bfv/encoder.h"

#include <bit>

#include "choco/common/error.h"

namespace choco::bfv {

BatchEncoder::BatchEncoder(std::size_t n, uint64_t t) : n_(n), t_(t), ntt_(n, t_), index_map_(n) {
  const std::size_t row = n / 2;
  const uint64_t two_n = 2 * n;
  const int log_n = std::countr_zero(n);
  uint64_t pos = 1;
  for (std::size_t i = 0; i < row; ++i) {
    const uint64_t first = (pos - 1) / 2;
    const uint64_t second = (two_n - pos - 1) / 2;
    index_map_[i] = ring::ReverseBits(first, log_n);
    index_map_[row + i] = ring::ReverseBits(second, log_n);
    pos = (pos * 3) % two_n;
  }
}

std::vector<uint64_t> BatchEncoder::Encode(std::span<const uint64_t> slots) const {
  if (slots.size() > n_) throw InvalidArgument("message too long");
  std::vector<uint64_t> out(n_, 0);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] >= t_.value()) throw InvalidArgument("plaintext value not below t");
    out[index_map_[i]] = slots[i];
  }
  ntt_.Inverse(out);
  return out;
}

std::vector<uint64_t> BatchEncoder::Decode(std::span<const uint64_t> coeffs) const {
  if (coeffs.size() != n_) throw InvalidArgument("expected N coefficients");
  std::vector<uint64_t> eval(coeffs.begin(), coeffs.end());
  ntt_.Forward(eval);
  std::vector<uint64_t> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = eval[index_map_[i]];
  return out;
}

std::vector<uint64_t> BatchEncoder::ToCoefficients(const Plaintext& pt) const {
  if (pt.encoding == Encoding::kSlot) return Encode(pt.values);
  if (pt.values.size() > n_) throw InvalidArgument("message too long");
  std::vector<uint64_t> out(n_, 0);
  for (std::size_t i = 0; i < pt.values.size(); ++i) {
    if (pt.values[i] >= t_.value()) throw InvalidArgument("plaintext value not below t");
    out[i] = pt.values[i];
  }
  return out;
}

}  // namespace choco::bfv
