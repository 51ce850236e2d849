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

#ifndef CHOCO_RING_NTT_H_
#define CHOCO_RING_NTT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "choco/ring/modulus.h"

namespace choco::ring {

// Precomputed tables for the negacyclic NTT over Z_p[X]/(X^N + 1).
//
// Forward is an in-place Cooley-Tukey transform taking natural-order
// coefficients to bit-reversed evaluations: output index j holds a(psi^(2 *
// bitrev(j) + 1)) where psi is the minimal primitive 2N-th root of unity.
// Inverse is the matching Gentleman-Sande transform including the 1/N factor.
class NttTables {
 public:
  NttTables(std::size_t n, const Modulus& modulus);

  std::size_t n() const { return n_; }
  const Modulus& modulus() const { return modulus_; }
  uint64_t root() const { return root_; }

  void Forward(std::span<uint64_t> values) const;
  void Inverse(std::span<uint64_t> values) const;

 private:
  std::size_t n_;
  int log_n_;
  Modulus modulus_;
  uint64_t root_;
  std::vector<uint64_t> root_powers_;
  std::vector<uint64_t> root_powers_shoup_;
  std::vector<uint64_t> inv_root_powers_;
  std::vector<uint64_t> inv_root_powers_shoup_;
  uint64_t n_inv_;
  uint64_t n_inv_shoup_;
};

// Reverses the low `bits` bits of `value`.
inline std::size_t ReverseBits(std::size_t value, int bits) {
  std::size_t out = 0;
  for (int i = 0; i < bits; ++i) {
    out = (out << 1) | ((value >> i) & 1);
  }
  return out;
}

}  // namespace choco::ring

#endif  // CHOCO_RING_NTT_H_
