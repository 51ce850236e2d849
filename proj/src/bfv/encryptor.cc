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

#include "choco/bfv/encryptor.h"

#include "choco/common/error.h"

namespace choco::bfv {

Encryptor::Encryptor(std::shared_ptr<const Context> ctx, PublicKey pk, const ring::Seed& seed,
                     OpLog* log)
    : ctx_(std::move(ctx)), pk_(std::move(pk)), seed_(seed), log_(log) {}

Ciphertext Encryptor::Encrypt(const Plaintext& pt) {
  return EncryptWithSeed(pt, ring::DeriveSeed(seed_, "encrypt", calls_++));
}

Ciphertext Encryptor::EncryptZero() { return Encrypt(Plaintext{{}, Encoding::kCoefficient}); }

Ciphertext Encryptor::EncryptWithSeed(const Plaintext& pt, const ring::Seed& seed) const {
  const Context& ctx = *ctx_;
  const auto m = ctx.encoder().ToCoefficients(pt);
  const ring::RnsBase& base = ctx.key_base();
  ring::SeededSampler sampler(seed);
  const ring::RnsPoly u = ring::NttForward(ring::SampleTernary(sampler, base, ctx.n()), base);
  Ciphertext ct;
  ct.params_id = ctx.id();
  for (const ring::RnsPoly* key : {&pk_.p0, &pk_.p1}) {
    ring::RnsPoly c = *key;
    ring::MulPointwiseInPlace(c, u, base);
    ring::NttInverseInPlace(c, base);
    ring::AddInPlace(c, ring::SampleError(sampler, base, ctx.n(), ctx.params().sigma()), base);
    ring::DivideRoundByLast(c, base);
    ct.components.push_back(std::move(c));
  }
  ctx.AddScaled(ct.components[0], m);
  Record(log_, Op::kEncrypt);
  return ct;
}

}  // namespace choco::bfv
