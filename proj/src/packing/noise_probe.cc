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

#include "choco/packing/noise_probe.h"

#include <random>

#include "choco/bfv/context.h"
#include "choco/bfv/decryptor.h"
#include "choco/bfv/encryptor.h"
#include "choco/bfv/evaluator.h"
#include "choco/bfv/keys.h"
#include "choco/packing/layout.h"

namespace choco::packing {

RotationNoise MeasureRotationNoise(const bfv::HEParams& params, uint64_t seed) {
  const auto ctx = bfv::Context::Create(params);
  const auto keys = bfv::GenerateKeys(*ctx, ring::SeedFromInteger(seed));
  bfv::Encryptor encryptor(ctx, keys.pub, ring::DeriveSeed(ring::SeedFromInteger(seed), "encrypt"));
  const bfv::Decryptor decryptor(ctx, keys.secret);
  const bfv::Evaluator evaluator(ctx);

  // A single window: its mask is the least structured, closest to an
  // arbitrary permutation.
  const PackingLayout layout = PlanLayout(1, 16, 1, ctx->n());
  std::mt19937_64 rng(seed);
  std::vector<std::vector<uint64_t>> data(1, std::vector<uint64_t>(16));
  for (auto& x : data[0]) x = rng() % params.t();
  const bfv::Ciphertext ct =
      encryptor.Encrypt(bfv::Plaintext{Pack(data, layout, ctx->n()), bfv::Encoding::kSlot});

  RotationNoise out;
  out.fresh = decryptor.NoiseBudget(ct).budget_bits;
  out.rotate =
      decryptor.NoiseBudget(WindowedRotate({ct, layout, 0}, 1, evaluator, keys.galois).ct).budget_bits;
  out.permute = decryptor
                    .NoiseBudget(MaskedPermute(ct, WindowedRotationPermutation(layout, 1, ctx->n()),
                                               evaluator, keys.galois))
                    .budget_bits;
  return out;
}

}  // namespace choco::packing
