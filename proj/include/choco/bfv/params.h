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

#ifndef CHOCO_BFV_PARAMS_H_
#define CHOCO_BFV_PARAMS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace choco::bfv {

using ParamsId = std::array<uint8_t, 32>;

enum class SecurityLabel : uint8_t { kA = 0, kB = 1, kCustom = 2 };

std::string LabelName(SecurityLabel label);

// A BFV parameter set. The last modulus is the key prime: it is present in
// keys and during encryption and key switching, never in a ciphertext at rest.
class HEParams {
 public:
  static constexpr double kDefaultSigma = 3.2;

  // Throws InvalidArgument unless N is a power of two in [2^11, 2^15], there
  // are at least two moduli, and t is an NTT-friendly prime distinct from
  // (and smaller than) every modulus.
  HEParams(std::size_t n, std::vector<uint64_t> moduli, uint64_t t,
           double sigma = kDefaultSigma, SecurityLabel label = SecurityLabel::kCustom);

  // Picks the largest unused NTT prime for each requested width, in order.
  static HEParams FromBits(std::size_t n, std::span<const int> modulus_bits, int t_bits,
                           double sigma = kDefaultSigma,
                           SecurityLabel label = SecurityLabel::kCustom);

  // N = 8192, {58, 58, 59}, 23-bit t.
  static HEParams PresetA();
  // N = 4096, {36, 36, 37}, 18-bit t.
  static HEParams PresetB();

  std::size_t n() const { return n_; }
  std::size_t row_size() const { return n_ / 2; }
  // k, including the key prime.
  std::size_t k() const { return moduli_.size(); }
  const std::vector<uint64_t>& moduli() const { return moduli_; }
  uint64_t key_prime() const { return moduli_.back(); }
  uint64_t t() const { return t_; }
  double sigma() const { return sigma_; }
  SecurityLabel label() const { return label_; }

  // Canonical little-endian encoding; includes the sampler primitive name.
  std::vector<uint8_t> Serialize() const;
  static HEParams Deserialize(std::span<const uint8_t> bytes);

  // SHA-256 of Serialize().
  ParamsId Id() const;

  friend bool operator==(const HEParams&, const HEParams&) = default;

 private:
  std::size_t n_;
  std::vector<uint64_t> moduli_;
  uint64_t t_;
  double sigma_;
  SecurityLabel label_;
};

}  // namespace choco::bfv

#endif  // CHOCO_BFV_PARAMS_H_
