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

#ifndef CHOCO_BFV_EVALUATOR_H_
#define CHOCO_BFV_EVALUATOR_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "choco/bfv/ciphertext.h"
#include "choco/bfv/context.h"
#include "choco/bfv/encoder.h"
#include "choco/bfv/keys.h"
#include "choco/bfv/op_log.h"

namespace choco::bfv {

// A plaintext lifted (centered) into a ciphertext's residues and NTT form,
// ready for repeated multiplies.
struct PreparedPlaintext {
  ring::RnsPoly ntt;
};

// Homomorphic operations. Never sees secret material. Every operation
// returns a new ciphertext; inputs may be in either domain except where
// noted.
class Evaluator {
 public:
  explicit Evaluator(std::shared_ptr<const Context> ctx, OpLog* log = nullptr);

  Ciphertext Add(const Ciphertext& a, const Ciphertext& b) const;
  void AddInPlace(Ciphertext& a, const Ciphertext& b) const;
  Ciphertext AddPlain(const Ciphertext& a, const Plaintext& m) const;

  PreparedPlaintext Prepare(const Plaintext& m, std::size_t residues) const;
  Ciphertext MulPlain(const Ciphertext& a, const Plaintext& m) const;
  // Keeps a's domain.
  Ciphertext MulPlain(const Ciphertext& a, const PreparedPlaintext& m) const;

  // Left rotation of both rows by `step` (result[i] = input[i + step]),
  // expanded into the cheaper signed power-of-two decomposition.
  Ciphertext Rotate(const Ciphertext& a, int64_t step, const GaloisKeys& keys) const;
  Ciphertext RotateRows(const Ciphertext& a, const GaloisKeys& keys) const;
  // One automorphism plus one key switch. Coefficient-form output.
  Ciphertext ApplyGalois(const Ciphertext& a, uint64_t element, const GaloisKeys& keys) const;

  // Modulus switch down by the last residue.
  Ciphertext DropResidue(const Ciphertext& a) const;

  Ciphertext ToNtt(Ciphertext a) const;
  Ciphertext FromNtt(Ciphertext a) const;

  // The power-of-two steps Rotate(step) expands into.
  std::vector<int64_t> DecomposeStep(int64_t step) const;

  const Context& context() const { return *ctx_; }
  OpLog* log() const { return log_; }

 private:
  void Check(const Ciphertext& a) const;

  std::shared_ptr<const Context> ctx_;
  OpLog* log_;
};

}  // namespace choco::bfv

#endif  // CHOCO_BFV_EVALUATOR_H_
