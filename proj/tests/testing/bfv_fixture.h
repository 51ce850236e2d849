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

// Key material and party objects for one parameter set, built once per test
// binary and shared.

#ifndef CHOCO_TESTS_TESTING_BFV_FIXTURE_H_
#define CHOCO_TESTS_TESTING_BFV_FIXTURE_H_

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "choco/bfv/context.h"
#include "choco/bfv/decryptor.h"
#include "choco/bfv/encryptor.h"
#include "choco/bfv/evaluator.h"
#include "choco/bfv/keys.h"
#include "choco/bfv/op_log.h"

namespace choco::testing {

struct BfvParty {
  explicit BfvParty(bfv::HEParams params, uint64_t seed = 1)
      : ctx(bfv::Context::Create(std::move(params))),
        keys(bfv::GenerateKeys(*ctx, ring::SeedFromInteger(seed))),
        encryptor(ctx, keys.pub, ring::SeedFromInteger(seed + 1000), &log),
        decryptor(ctx, keys.secret, &log),
        evaluator(ctx, &log) {}

  uint64_t t() const { return ctx->t().value(); }
  std::size_t n() const { return ctx->n(); }

  std::vector<uint64_t> RandomSlots(std::mt19937_64& rng) const {
    std::vector<uint64_t> v(n());
    for (auto& x : v) x = rng() % t();
    return v;
  }
  bfv::Ciphertext Encrypt(const std::vector<uint64_t>& slots) {
    return encryptor.Encrypt(bfv::Plaintext{slots, bfv::Encoding::kSlot});
  }
  std::vector<uint64_t> Decrypt(const bfv::Ciphertext& ct) const {
    return decryptor.Decrypt(ct).values;
  }
  int Budget(const bfv::Ciphertext& ct) const { return decryptor.NoiseBudget(ct).budget_bits; }

  std::shared_ptr<const bfv::Context> ctx;
  bfv::KeyMaterial keys;
  bfv::OpLog log;
  bfv::Encryptor encryptor;
  bfv::Decryptor decryptor;
  bfv::Evaluator evaluator;
};

inline BfvParty& PresetAParty() {
  static BfvParty* party = new BfvParty(bfv::HEParams::PresetA());
  return *party;
}

inline BfvParty& PresetBParty() {
  static BfvParty* party = new BfvParty(bfv::HEParams::PresetB());
  return *party;
}

}  // namespace choco::testing

#endif  // CHOCO_TESTS_TESTING_BFV_FIXTURE_H_
