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

#ifndef CHOCO_BFV_ENCODER_H_
#define CHOCO_BFV_ENCODER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "choco/ring/modulus.h"
#include "choco/ring/ntt.h"

namespace choco::bfv {

enum class Encoding : uint8_t { kSlot = 0, kCoefficient = 1 };

// Integers mod t. Slot-encoded values are laid out as two rows of N/2; a
// shorter vector is zero-padded.
struct Plaintext {
  std::vector<uint64_t> values;
  Encoding encoding = Encoding::kSlot;

  friend bool operator==(const Plaintext&, const Plaintext&) = default;
};

// CRT batching over Z_t[X]/(X^N + 1). Slot i of row 0 is the evaluation at
// psi^(3^i), row 1 at psi^(-3^i), so the Galois element 3^r rotates each row
// left by r and 2N - 1 swaps the rows.
class BatchEncoder {
 public:
  BatchEncoder(std::size_t n, uint64_t t);

  std::size_t slot_count() const { return n_; }
  std::size_t row_size() const { return n_ / 2; }
  uint64_t t() const { return t_.value(); }

  // Slot values (at most N, each < t) to N coefficients.
  std::vector<uint64_t> Encode(std::span<const uint64_t> slots) const;
  std::vector<uint64_t> Decode(std::span<const uint64_t> coeffs) const;

  // Coefficient form of any plaintext, length N. Throws "message too long"
  // or on entries >= t.
  std::vector<uint64_t> ToCoefficients(const Plaintext& pt) const;

 private:
  std::size_t n_;
  ring::Modulus t_;
  ring::NttTables ntt_;
  std::vector<std::size_t> index_map_;
};

}  // namespace choco::bfv

#endif  // CHOCO_BFV_ENCODER_H_
