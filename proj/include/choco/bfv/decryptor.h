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

#ifndef CHOCO_BFV_DECRYPTOR_H_
#define CHOCO_BFV_DECRYPTOR_H_

#include <memory>

#include "choco/bfv/ciphertext.h"
#include "choco/bfv/context.h"
#include "choco/bfv/encoder.h"
#include "choco/bfv/keys.h"
#include "choco/bfv/op_log.h"

namespace choco::bfv {

struct NoiseReport {
  int budget_bits = 0;
  bool exhausted = true;
};

class Decryptor {
 public:
  Decryptor(std::shared_ptr<const Context> ctx, SecretKey sk, OpLog* log = nullptr);

  // m = round(t * [c0 + c1*s]_q / q) mod t, q the product of the residues
  // the ciphertext carries (any count from 1 to k). Garbage, silently, once
  // the noise budget is gone.
  Plaintext Decrypt(const Ciphertext& ct, Encoding encoding = Encoding::kSlot) const;
  // As Decrypt, but measures first and throws NoiseOverflow at budget 0.
  Plaintext DecryptChecked(const Ciphertext& ct, Encoding encoding = Encoding::kSlot) const;

  // Invariant noise budget: with v = t * [c0 + c1*s]_q centered mod q,
  // max(0, floor(log2(q / (2t)) - log2 |v|_inf)). Positive implies the
  // plaintext is recovered exactly.
  NoiseReport NoiseBudget(const Ciphertext& ct) const;

  const SecretKey& secret_key() const { return sk_; }

 private:
  // [c0 + c1*s]_q residue by residue, in coefficient form.
  ring::RnsPoly Phase(const Ciphertext& ct) const;

  std::shared_ptr<const Context> ctx_;
  SecretKey sk_;
  OpLog* log_;
};

}  // namespace choco::bfv

#endif  // CHOCO_BFV_DECRYPTOR_H_
