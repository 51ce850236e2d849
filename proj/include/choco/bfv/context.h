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

#ifndef CHOCO_BFV_CONTEXT_H_
#define CHOCO_BFV_CONTEXT_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "choco/bfv/encoder.h"
#include "choco/bfv/params.h"
#include "choco/ring/rns.h"

namespace choco::bfv {

// Precomputation shared by every BFV object of one parameter set. Immutable
// once built; share it through shared_ptr.
class Context {
 public:
  explicit Context(HEParams params);
  static std::shared_ptr<const Context> Create(HEParams params) {
    return std::make_shared<const Context>(std::move(params));
  }

  const HEParams& params() const { return params_; }
  const ParamsId& id() const { return id_; }
  std::size_t n() const { return params_.n(); }
  std::size_t k() const { return params_.k(); }
  // Residues in a fresh ciphertext (k - 1).
  std::size_t data_residues() const { return params_.k() - 1; }
  const ring::Modulus& t() const { return t_; }
  const BatchEncoder& encoder() const { return encoder_; }

  // First `residues` moduli; residues == k is the full key base.
  const ring::RnsBase& base(std::size_t residues) const;
  const ring::RnsBase& key_base() const { return bases_.back(); }
  // First `residues` data moduli followed by the key prime.
  const ring::RnsBase& switch_base(std::size_t residues) const;

  // c0 += round(q_r * m / t) where q_r is the product of c0's residues, as
  // floor(q_r / t) * m + floor(((q_r mod t) * m + floor(t / 2)) / t).
  void AddScaled(ring::RnsPoly& c0, std::span<const uint64_t> m) const;

  // Coefficients mod t lifted to (-t/2, t/2] and reduced into each residue.
  ring::RnsPoly LiftCentered(std::span<const uint64_t> m, std::size_t residues) const;

  // Throws unless 1 <= residues <= k - 1 (ciphertext at rest).
  void CheckCiphertextResidues(std::size_t residues) const;

 private:
  HEParams params_;
  ParamsId id_;
  ring::Modulus t_;
  BatchEncoder encoder_;
  std::vector<ring::RnsBase> bases_;         // index r - 1
  std::vector<ring::RnsBase> switch_bases_;  // index r - 1
  // Per residue count r: floor(q_r / t) mod q_i, and q_r mod t.
  std::vector<std::vector<uint64_t>> delta_;
  std::vector<uint64_t> delta_remainder_;
};

}  // namespace choco::bfv

#endif  // CHOCO_BFV_CONTEXT_H_
