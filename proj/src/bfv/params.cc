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

#include "choco/bfv/params.h"

#include <sodium.h>

#include <bit>
#include <cstring>
#include <set>
#include <string_view>

#include "choco/common/bytes.h"
#include "choco/common/error.h"
#include "choco/ring/modulus.h"
#include "choco/ring/sampler.h"

namespace choco::bfv {

namespace {

constexpr std::string_view kParamsMagic = "CHOP";
constexpr uint16_t kParamsVersion = 1;

bool IsPowerOfTwo(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

}  // namespace

std::string LabelName(SecurityLabel label) {
  switch (label) {
    case SecurityLabel::kA:
      return "A";
    case SecurityLabel::kB:
      return "B";
    case SecurityLabel::kCustom:
      return "custom";
  }
  return "custom";
}

HEParams::HEParams(std::size_t n, std::vector<uint64_t> moduli, uint64_t t, double sigma,
                   SecurityLabel label)
    : n_(n), moduli_(std::move(moduli)), t_(t), sigma_(sigma), label_(label) {
  if (!IsPowerOfTwo(n_) || n_ < (1u << 11) || n_ > (1u << 15)) {
    throw InvalidArgument("N must be a power of two in [2^11, 2^15]");
  }
  if (moduli_.size() < 2) throw InvalidArgument("need a data modulus and a key prime");
  if (moduli_.size() > 32) throw InvalidArgument("too many moduli");
  std::set<uint64_t> seen;
  for (uint64_t q : moduli_) {
    if (q >= (uint64_t{1} << ring::kMaxModulusBits) || !ring::IsPrime(q)) {
      throw InvalidArgument("modulus is not a prime below 2^62");
    }
    if ((q - 1) % (2 * n_) != 0) throw InvalidArgument("modulus is not 1 mod 2N");
    if (!seen.insert(q).second) throw InvalidArgument("moduli repeat");
    if (q <= t_) throw InvalidArgument("modulus must exceed t");
  }
  if (t_ < 3 || !ring::IsPrime(t_) || (t_ - 1) % (2 * n_) != 0) {
    throw InvalidArgument("t must be a prime that is 1 mod 2N");
  }
  if (!(sigma_ > 0)) throw InvalidArgument("sigma must be positive");
}

HEParams HEParams::FromBits(std::size_t n, std::span<const int> modulus_bits, int t_bits,
                            double sigma, SecurityLabel label) {
  if (!IsPowerOfTwo(n)) throw InvalidArgument("N must be a power of two");
  std::set<uint64_t> used;
  const uint64_t t = ring::FindNttPrime(t_bits, n);
  used.insert(t);
  std::vector<uint64_t> moduli;
  for (int bits : modulus_bits) {
    const uint64_t q = ring::FindNttPrime(bits, n, used);
    used.insert(q);
    moduli.push_back(q);
  }
  return HEParams(n, std::move(moduli), t, sigma, label);
}

HEParams HEParams::PresetA() {
  const int bits[] = {58, 58, 59};
  return FromBits(8192, bits, 23, kDefaultSigma, SecurityLabel::kA);
}

HEParams HEParams::PresetB() {
  const int bits[] = {36, 36, 37};
  return FromBits(4096, bits, 18, kDefaultSigma, SecurityLabel::kB);
}

std::vector<uint8_t> HEParams::Serialize() const {
  ByteWriter w;
  w.Bytes(kParamsMagic);
  w.U16(kParamsVersion);
  w.U32(static_cast<uint32_t>(n_));
  w.U8(static_cast<uint8_t>(moduli_.size()));
  for (uint64_t q : moduli_) w.U64(q);
  w.U64(t_);
  w.U64(std::bit_cast<uint64_t>(sigma_));
  w.U8(static_cast<uint8_t>(label_));
  w.U8(static_cast<uint8_t>(ring::SeededSampler::kPrimitive.size()));
  w.Bytes(ring::SeededSampler::kPrimitive);
  return w.Take();
}

HEParams HEParams::Deserialize(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.String(kParamsMagic.size()) != kParamsMagic) throw FormatError("bad params magic");
  if (r.U16() != kParamsVersion) throw FormatError("unsupported params version");
  const std::size_t n = r.U32();
  const std::size_t k = r.U8();
  std::vector<uint64_t> moduli(k);
  for (auto& q : moduli) q = r.U64();
  const uint64_t t = r.U64();
  const double sigma = std::bit_cast<double>(r.U64());
  const uint8_t label = r.U8();
  if (label > static_cast<uint8_t>(SecurityLabel::kCustom)) throw FormatError("bad label");
  const std::string primitive = r.String(r.U8());
  if (primitive != ring::SeededSampler::kPrimitive) throw FormatError("unknown sampler primitive");
  r.ExpectEnd();
  return HEParams(n, std::move(moduli), t, sigma, static_cast<SecurityLabel>(label));
}

ParamsId HEParams::Id() const {
  const auto bytes = Serialize();
  ParamsId id;
  crypto_hash_sha256(id.data(), bytes.data(), bytes.size());
  return id;
}

}  // namespace choco::bfv
