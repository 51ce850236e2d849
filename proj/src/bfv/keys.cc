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

#include "choco/bfv/keys.h"

#include <algorithm>

#include <cmath>
#include <string_view>

#include "choco/common/error.h"

namespace choco::bfv {

namespace {

constexpr std::string_view kKeyMagic = "CHOK";
constexpr uint16_t kKeyVersion = 1;
enum class KeyKind : uint8_t { kSecret = 1, kPublic = 2, kGalois = 3 };

uint64_t PowMod(uint64_t base, uint64_t exp, uint64_t mod) {
  uint64_t out = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) out = static_cast<uint64_t>(static_cast<ring::u128>(out) * base % mod);
    base = static_cast<uint64_t>(static_cast<ring::u128>(base) * base % mod);
    exp >>= 1;
  }
  return out;
}

void WriteHeader(ByteWriter& out, const Context& ctx, KeyKind kind) {
  out.Bytes(kKeyMagic);
  out.U16(kKeyVersion);
  out.Bytes(ctx.id());
  out.U8(static_cast<uint8_t>(kind));
}

void ReadHeader(ByteReader& in, const Context& ctx, KeyKind kind) {
  if (in.String(kKeyMagic.size()) != kKeyMagic) throw FormatError("bad key magic");
  if (in.U16() != kKeyVersion) throw FormatError("unsupported key version");
  auto id = in.Bytes(32);
  if (!std::equal(id.begin(), id.end(), ctx.id().begin())) throw FormatError("key params mismatch");
  if (in.U8() != static_cast<uint8_t>(kind)) throw FormatError("unexpected key kind");
}

// Key polynomials always span all k moduli; only the domain is recorded.
void WritePoly(ByteWriter& out, const ring::RnsPoly& p) {
  out.U8(static_cast<uint8_t>(p.domain()));
  out.Words(p.data());
}

ring::RnsPoly ReadPoly(ByteReader& in, const Context& ctx) {
  const uint8_t domain = in.U8();
  if (domain > 1) throw FormatError("bad domain flag");
  ring::RnsPoly p(ctx.n(), ctx.k(), static_cast<ring::Domain>(domain));
  in.Words(p.data());
  for (std::size_t i = 0; i < ctx.k(); ++i) {
    for (uint64_t x : p.residue(i)) {
      if (x >= ctx.key_base().modulus(i).value()) throw FormatError("coefficient out of range");
    }
  }
  return p;
}

template <typename T, typename Fn>
T ReadWhole(std::span<const uint8_t> bytes, Fn fn) {
  ByteReader in(bytes);
  T out = fn(in);
  in.ExpectEnd();
  return out;
}

ring::RnsPoly SampleErrorNtt(ring::SeededSampler& sampler, const Context& ctx) {
  return ring::NttForward(
      ring::SampleError(sampler, ctx.key_base(), ctx.n(), ctx.params().sigma()), ctx.key_base());
}

}  // namespace

uint64_t GaloisElementForStep(std::size_t n, int64_t step) {
  const int64_t row = static_cast<int64_t>(n / 2);
  const int64_t e = ((step % row) + row) % row;
  return PowMod(3, static_cast<uint64_t>(e), 2 * n);
}

uint64_t RowSwapElement(std::size_t n) { return 2 * n - 1; }

std::vector<int64_t> PowerOfTwoSteps(std::size_t n) {
  std::vector<int64_t> out;
  for (int64_t s = 1; s <= static_cast<int64_t>(n / 4); s *= 2) {
    out.push_back(s);
    out.push_back(-s);
  }
  return out;
}

std::vector<uint64_t> DefaultGaloisElements(std::size_t n) {
  std::vector<uint64_t> out;
  for (int64_t s : PowerOfTwoSteps(n)) out.push_back(GaloisElementForStep(n, s));
  out.push_back(RowSwapElement(n));
  // +N/4 and -N/4 land on the same element.
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ring::RnsPoly ApplyAutomorphism(const ring::RnsPoly& p, uint64_t element,
                                const ring::RnsBase& base) {
  if (p.domain() != ring::Domain::kCoefficient) throw InvalidArgument("automorphism needs coefficient form");
  const std::size_t n = p.n();
  const uint64_t two_n = 2 * n;
  if (element % 2 == 0 || element >= two_n) throw InvalidArgument("bad galois element");
  ring::RnsPoly out(n, p.residues());
  for (std::size_t i = 0; i < p.residues(); ++i) {
    const ring::Modulus& m = base.modulus(i);
    auto src = p.residue(i);
    auto dst = out.residue(i);
    uint64_t index = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (index < n) {
        dst[index] = src[j];
      } else {
        dst[index - n] = m.Neg(src[j]);
      }
      index += element;
      if (index >= two_n) index -= two_n;
    }
  }
  return out;
}

SecretKey GenerateSecretKey(const Context& ctx, const ring::Seed& seed) {
  ring::SeededSampler sampler(ring::DeriveSeed(seed, "secret"));
  SecretKey sk;
  sk.coeff = ring::SampleTernary(sampler, ctx.key_base(), ctx.n());
  sk.ntt = ring::NttForward(sk.coeff, ctx.key_base());
  return sk;
}

PublicKey GeneratePublicKey(const Context& ctx, const SecretKey& sk, const ring::Seed& seed) {
  const ring::RnsBase& base = ctx.key_base();
  ring::SeededSampler sampler(ring::DeriveSeed(seed, "public"));
  PublicKey pk;
  pk.p1 = ring::SampleUniform(sampler, base, ctx.n());
  pk.p1.set_domain(ring::Domain::kEvaluation);
  pk.p0 = pk.p1;
  ring::MulPointwiseInPlace(pk.p0, sk.ntt, base);
  ring::AddInPlace(pk.p0, SampleErrorNtt(sampler, ctx), base);
  ring::NegateInPlace(pk.p0, base);

  // P0 + P1*s = -e must be tiny next to q.
  ring::RnsPoly check = pk.p1;
  ring::MulPointwiseInPlace(check, sk.ntt, base);
  ring::AddInPlace(check, pk.p0, base);
  ring::NttInverseInPlace(check, base);
  const auto values = ring::CrtRecombine(check, base);
  const ring::BigInt bound = base.product() >> 10;
  for (const auto& v : values) {
    const ring::BigInt centered = v > base.product() / 2 ? base.product() - v : v;
    if (centered >= bound) throw Error("public key self-test failed");
  }
  return pk;
}

GaloisKeys GenerateGaloisKeys(const Context& ctx, const SecretKey& sk, const ring::Seed& seed,
                              std::span<const uint64_t> elements) {
  const ring::RnsBase& base = ctx.key_base();
  const std::size_t k = ctx.k();
  const ring::Modulus& key_prime = base.modulus(k - 1);
  GaloisKeys gk;
  for (uint64_t g : elements) {
    if (gk.Has(g)) continue;
    const ring::RnsPoly rotated =
        ring::NttForward(ApplyAutomorphism(sk.coeff, g, base), base);
    KeySwitchKey key;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      ring::SeededSampler sampler(ring::DeriveSeed(seed, "galois", g * 64 + j));
      ring::RnsPoly a = ring::SampleUniform(sampler, base, ctx.n());
      a.set_domain(ring::Domain::kEvaluation);
      ring::RnsPoly b = a;
      ring::MulPointwiseInPlace(b, sk.ntt, base);
      ring::NegateInPlace(b, base);
      ring::AddInPlace(b, SampleErrorNtt(sampler, ctx), base);
      const ring::Modulus& qj = base.modulus(j);
      const uint64_t p_mod = qj.Reduce(key_prime.value());
      auto dst = b.residue(j);
      auto src = rotated.residue(j);
      for (std::size_t c = 0; c < ctx.n(); ++c) dst[c] = qj.Add(dst[c], qj.Mul(src[c], p_mod));
      key.digits.push_back({std::move(b), std::move(a)});
    }
    gk.keys.emplace(g, std::move(key));
  }
  return gk;
}

KeyMaterial GenerateKeys(const Context& ctx, const ring::Seed& seed) {
  KeyMaterial km;
  km.secret = GenerateSecretKey(ctx, seed);
  km.pub = GeneratePublicKey(ctx, km.secret, seed);
  km.galois = GenerateGaloisKeys(ctx, km.secret, seed, DefaultGaloisElements(ctx.n()));
  return km;
}

std::vector<uint8_t> SerializeSecretKey(const Context& ctx, const SecretKey& sk) {
  ByteWriter w;
  WriteHeader(w, ctx, KeyKind::kSecret);
  WritePoly(w, sk.coeff);
  return w.Take();
}

void WritePublicKey(ByteWriter& out, const Context& ctx, const PublicKey& pk) {
  WriteHeader(out, ctx, KeyKind::kPublic);
  WritePoly(out, pk.p0);
  WritePoly(out, pk.p1);
}

std::vector<uint8_t> SerializePublicKey(const Context& ctx, const PublicKey& pk) {
  ByteWriter w;
  WritePublicKey(w, ctx, pk);
  return w.Take();
}

void WriteGaloisKeys(ByteWriter& out, const Context& ctx, const GaloisKeys& gk) {
  WriteHeader(out, ctx, KeyKind::kGalois);
  out.U32(static_cast<uint32_t>(gk.keys.size()));
  for (const auto& [element, key] : gk.keys) {
    out.U64(element);
    out.U8(static_cast<uint8_t>(key.digits.size()));
    for (const auto& digit : key.digits) {
      WritePoly(out, digit[0]);
      WritePoly(out, digit[1]);
    }
  }
}

std::vector<uint8_t> SerializeGaloisKeys(const Context& ctx, const GaloisKeys& gk) {
  ByteWriter w;
  WriteGaloisKeys(w, ctx, gk);
  return w.Take();
}

namespace {

constexpr std::size_t kKeyHeaderBytes = 4 + 2 + 32 + 1;

std::size_t PolyBytes(const Context& ctx) { return 1 + ctx.k() * ctx.n() * 8; }

}  // namespace

std::size_t PublicKeyBytes(const Context& ctx) { return kKeyHeaderBytes + 2 * PolyBytes(ctx); }

std::size_t GaloisKeysBytes(const Context& ctx) {
  const std::size_t per_key = 8 + 1 + ctx.data_residues() * 2 * PolyBytes(ctx);
  return kKeyHeaderBytes + 4 + DefaultGaloisElements(ctx.n()).size() * per_key;
}

SecretKey DeserializeSecretKey(std::span<const uint8_t> bytes, const Context& ctx) {
  return ReadWhole<SecretKey>(bytes, [&](ByteReader& in) {
    ReadHeader(in, ctx, KeyKind::kSecret);
    SecretKey sk;
    sk.coeff = ReadPoly(in, ctx);
    if (sk.coeff.domain() != ring::Domain::kCoefficient) throw FormatError("bad secret key");
    sk.ntt = ring::NttForward(sk.coeff, ctx.key_base());
    return sk;
  });
}

PublicKey ReadPublicKey(ByteReader& in, const Context& ctx) {
  ReadHeader(in, ctx, KeyKind::kPublic);
  PublicKey pk;
  pk.p0 = ReadPoly(in, ctx);
  pk.p1 = ReadPoly(in, ctx);
  if (pk.p0.domain() != ring::Domain::kEvaluation || pk.p1.domain() != ring::Domain::kEvaluation) {
    throw FormatError("public key must be in NTT form");
  }
  return pk;
}

PublicKey DeserializePublicKey(std::span<const uint8_t> bytes, const Context& ctx) {
  return ReadWhole<PublicKey>(bytes, [&](ByteReader& in) { return ReadPublicKey(in, ctx); });
}

GaloisKeys ReadGaloisKeys(ByteReader& in, const Context& ctx) {
  ReadHeader(in, ctx, KeyKind::kGalois);
  GaloisKeys gk;
  const uint32_t count = in.U32();
  for (uint32_t e = 0; e < count; ++e) {
    const uint64_t element = in.U64();
    if (element % 2 == 0 || element >= 2 * ctx.n()) throw FormatError("bad galois element");
    const std::size_t digits = in.U8();
    if (digits != ctx.data_residues()) throw FormatError("bad digit count");
    KeySwitchKey key;
    for (std::size_t j = 0; j < digits; ++j) {
      ring::RnsPoly b = ReadPoly(in, ctx);
      ring::RnsPoly a = ReadPoly(in, ctx);
      key.digits.push_back({std::move(b), std::move(a)});
    }
    gk.keys.emplace(element, std::move(key));
  }
  return gk;
}

GaloisKeys DeserializeGaloisKeys(std::span<const uint8_t> bytes, const Context& ctx) {
  return ReadWhole<GaloisKeys>(bytes, [&](ByteReader& in) { return ReadGaloisKeys(in, ctx); });
}

}  // namespace choco::bfv
