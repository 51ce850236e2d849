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

#include "choco/bfv/ciphertext.h"

#include <string_view>

#include "choco/common/error.h"

namespace choco::bfv {

namespace {
constexpr std::string_view kMagic = "CHOC";
}  // namespace

void WriteCiphertext(ByteWriter& out, const Ciphertext& ct) {
  if (ct.size() == 0 || ct.size() > 255 || ct.residues() > 255) {
    throw InvalidArgument("ciphertext shape not serializable");
  }
  out.Bytes(kMagic);
  out.U16(kCiphertextVersion);
  out.Bytes(ct.params_id);
  out.U8(static_cast<uint8_t>(ct.size()));
  out.U8(static_cast<uint8_t>(ct.residues()));
  out.U8(static_cast<uint8_t>(ct.domain()));
  for (const auto& c : ct.components) {
    if (c.residues() != ct.residues() || c.domain() != ct.domain()) {
      throw InvalidArgument("ciphertext components disagree");
    }
    out.Words(c.data());
  }
}

std::vector<uint8_t> SerializeCiphertext(const Ciphertext& ct) {
  ByteWriter w;
  w.buffer().reserve(SerializedCiphertextBytes(ct.n(), ct.size(), ct.residues()));
  WriteCiphertext(w, ct);
  return w.Take();
}

Ciphertext ReadCiphertext(ByteReader& in, const Context& ctx) {
  if (in.String(kMagic.size()) != kMagic) throw FormatError("bad ciphertext magic");
  if (in.U16() != kCiphertextVersion) throw FormatError("unsupported ciphertext version");
  Ciphertext ct;
  auto id = in.Bytes(ct.params_id.size());
  std::copy(id.begin(), id.end(), ct.params_id.begin());
  if (ct.params_id != ctx.id()) throw FormatError("ciphertext params mismatch");
  const std::size_t s = in.U8();
  const std::size_t residues = in.U8();
  const uint8_t domain = in.U8();
  if (s == 0) throw FormatError("empty ciphertext");
  if (residues == 0 || residues > ctx.data_residues()) throw FormatError("bad residue count");
  if (domain > 1) throw FormatError("bad domain flag");
  const ring::RnsBase& base = ctx.base(residues);
  for (std::size_t c = 0; c < s; ++c) {
    ring::RnsPoly p(ctx.n(), residues, static_cast<ring::Domain>(domain));
    in.Words(p.data());
    for (std::size_t i = 0; i < residues; ++i) {
      for (uint64_t x : p.residue(i)) {
        if (x >= base.modulus(i).value()) throw FormatError("coefficient out of range");
      }
    }
    ct.components.push_back(std::move(p));
  }
  return ct;
}

Ciphertext DeserializeCiphertext(std::span<const uint8_t> bytes, const Context& ctx) {
  ByteReader in(bytes);
  Ciphertext ct = ReadCiphertext(in, ctx);
  in.ExpectEnd();
  return ct;
}

}  // namespace choco::bfv
