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

#ifndef CHOCO_BFV_KEYS_H_
#define CHOCO_BFV_KEYS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "choco/bfv/context.h"
#include "choco/common/bytes.h"
#include "choco/ring/rns.h"
#include "choco/ring/sampler.h"

namespace choco::bfv {

// Ternary secret over all k moduli, kept in both domains.
struct SecretKey {
  ring::RnsPoly coeff;
  ring::RnsPoly ntt;

  friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

// (P0, P1) = (-(a*s + e), a) in NTT form over all k moduli.
struct PublicKey {
  ring::RnsPoly p0;
  ring::RnsPoly p1;

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

// One (b, a) pair per data residue j, NTT form over all k moduli, with
// b = -a*s + e + [i == j] * P * s' in residue i.
struct KeySwitchKey {
  std::vector<std::array<ring::RnsPoly, 2>> digits;

  friend bool operator==(const KeySwitchKey&, const KeySwitchKey&) = default;
};

struct GaloisKeys {
  std::map<uint64_t, KeySwitchKey> keys;

  bool Has(uint64_t element) const { return keys.count(element) != 0; }
  friend bool operator==(const GaloisKeys&, const GaloisKeys&) = default;
};

struct KeyMaterial {
  SecretKey secret;
  PublicKey pub;
  GaloisKeys galois;
};

// 3^step mod 2N: rotates each row left by `step` (negative steps go right).
uint64_t GaloisElementForStep(std::size_t n, int64_t step);
// 2N - 1.
uint64_t RowSwapElement(std::size_t n);
// The registered steps: +-1, +-2, +-4, ..., +-N/4.
std::vector<int64_t> PowerOfTwoSteps(std::size_t n);
// Elements for PowerOfTwoSteps plus the row swap.
std::vector<uint64_t> DefaultGaloisElements(std::size_t n);

// X -> X^g on a coefficient-form polynomial, residue by residue.
ring::RnsPoly ApplyAutomorphism(const ring::RnsPoly& p, uint64_t element,
                                const ring::RnsBase& base);

SecretKey GenerateSecretKey(const Context& ctx, const ring::Seed& seed);
// Self-tests that P0 + P1*s is a small-noise zero; throws Error otherwise.
PublicKey GeneratePublicKey(const Context& ctx, const SecretKey& sk, const ring::Seed& seed);
GaloisKeys GenerateGaloisKeys(const Context& ctx, const SecretKey& sk, const ring::Seed& seed,
                              std::span<const uint64_t> elements);
// Deterministic in `seed`; Galois keys for DefaultGaloisElements.
KeyMaterial GenerateKeys(const Context& ctx, const ring::Seed& seed);

// Key files: "CHOK" + version + params id + kind + body.
std::vector<uint8_t> SerializeSecretKey(const Context& ctx, const SecretKey& sk);
std::vector<uint8_t> SerializePublicKey(const Context& ctx, const PublicKey& pk);
std::vector<uint8_t> SerializeGaloisKeys(const Context& ctx, const GaloisKeys& gk);
void WritePublicKey(ByteWriter& out, const Context& ctx, const PublicKey& pk);
void WriteGaloisKeys(ByteWriter& out, const Context& ctx, const GaloisKeys& gk);
SecretKey DeserializeSecretKey(std::span<const uint8_t> bytes, const Context& ctx);
PublicKey DeserializePublicKey(std::span<const uint8_t> bytes, const Context& ctx);
GaloisKeys DeserializeGaloisKeys(std::span<const uint8_t> bytes, const Context& ctx);
PublicKey ReadPublicKey(ByteReader& in, const Context& ctx);
GaloisKeys ReadGaloisKeys(ByteReader& in, const Context& ctx);

// Serialized sizes, without materializing keys.
std::size_t PublicKeyBytes(const Context& ctx);
// Default element set: one digit per data residue.
std::size_t GaloisKeysBytes(const Context& ctx);

}  // namespace choco::bfv

#endif  // CHOCO_BFV_KEYS_H_
