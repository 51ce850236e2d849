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

#ifndef CHOCO_BFV_CIPHERTEXT_H_
#define CHOCO_BFV_CIPHERTEXT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "choco/bfv/context.h"
#include "choco/bfv/params.h"
#include "choco/common/bytes.h"
#include "choco/ring/rns.h"

namespace choco::bfv {

inline constexpr std::size_t kWordBytes = 8;
// "CHOC" + version + params id + s + residues + domain.
inline constexpr std::size_t kCiphertextHeaderBytes = 4 + 2 + 32 + 1 + 1 + 1;
inline constexpr uint16_t kCiphertextVersion = 1;

// w * N * s * residues.
constexpr std::size_t CiphertextPayloadBytes(std::size_t n, std::size_t s, std::size_t residues) {
  return kWordBytes * n * s * residues;
}
constexpr std::size_t SerializedCiphertextBytes(std::size_t n, std::size_t s,
                                                std::size_t residues) {
  return kCiphertextHeaderBytes + CiphertextPayloadBytes(n, s, residues);
}

// s polynomials sharing residue count and domain. Value semantic.
struct Ciphertext {
  std::vector<ring::RnsPoly> components;
  ParamsId params_id{};
  // Longest chain of plaintext multiplies behind this value. Not serialized.
  uint8_t plain_mul_depth = 0;

  std::size_t size() const { return components.size(); }
  std::size_t residues() const { return components.empty() ? 0 : components[0].residues(); }
  std::size_t n() const { return components.empty() ? 0 : components[0].n(); }
  ring::Domain domain() const {
    return components.empty() ? ring::Domain::kCoefficient : components[0].domain();
  }
  std::size_t payload_bytes() const { return CiphertextPayloadBytes(n(), size(), residues()); }

  // Compares key material only; depth is bookkeeping.
  friend bool operator==(const Ciphertext& a, const Ciphertext& b) {
    return a.components == b.components && a.params_id == b.params_id;
  }
};

void WriteCiphertext(ByteWriter& out, const Ciphertext& ct);
std::vector<uint8_t> SerializeCiphertext(const Ciphertext& ct);
// Rejects foreign params ids, bad shapes and unreduced coefficients.
Ciphertext ReadCiphertext(ByteReader& in, const Context& ctx);
Ciphertext DeserializeCiphertext(std::span<const uint8_t> bytes, const Context& ctx);

}  // namespace choco::bfv

#endif  // CHOCO_BFV_CIPHERTEXT_H_
