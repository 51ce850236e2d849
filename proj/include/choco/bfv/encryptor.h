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

#ifndef CHOCO_BFV_ENCRYPTOR_H_
#define CHOCO_BFV_ENCRYPTOR_H_

#include <cstdint>
#include <memory>

#include "choco/bfv/ciphertext.h"
#include "choco/bfv/context.h"
#include "choco/bfv/encoder.h"
#include "choco/bfv/keys.h"
#include "choco/bfv/op_log.h"
#include "choco/ring/sampler.h"

namespace choco::bfv {

// Public-key encryption:
//   c0 = P0*u + e1, c1 = P1*u + e2 over all k moduli,
//   drop the key prime with rounding, then c0 += round(q' * m / t).
// The i-th call draws (u, e1, e2) from DeriveSeed(seed, "encrypt", i).
class Encryptor {
 public:
  Encryptor(std::shared_ptr<const Context> ctx, PublicKey pk, const ring::Seed& seed,
            OpLog* log = nullptr);

  Ciphertext Encrypt(const Plaintext& pt);
  Ciphertext EncryptZero();
  // Uses `seed` directly and leaves the call counter alone.
  Ciphertext EncryptWithSeed(const Plaintext& pt, const ring::Seed& seed) const;

  const Context& context() const { return *ctx_; }
  uint64_t calls() const { return calls_; }

 private:
  std::shared_ptr<const Context> ctx_;
  PublicKey pk_;
  ring::Seed seed_;
  uint64_t calls_ = 0;
  OpLog* log_;
};

}  // namespace choco::bfv

#endif  // CHOCO_BFV_ENCRYPTOR_H_
