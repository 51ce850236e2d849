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

#include "choco/protocol/message.h"

#include <algorithm>

#include <json.hpp>

#include "choco/common/bytes.h"
#include "choco/common/frame.h"

namespace choco::protocol {
namespace {

ByteReader Reader(const Message& m) { return ByteReader(m.payload); }

void CheckKind(const Message& m, MessageKind kind) {
  if (m.kind != kind) throw FormatError("expected " + MessageKindName(kind));
}

}  // namespace

std::string MessageKindName(MessageKind kind) {
  switch (kind) {
    case MessageKind::kHello: return "HELLO";
    case MessageKind::kParams: return "PARAMS";
    case MessageKind::kKeys: return "KEYS";
    case MessageKind::kLayerInput: return "LAYER_INPUT";
    case MessageKind::kLayerOutput: return "LAYER_OUTPUT";
    case MessageKind::kResult: return "RESULT";
    case MessageKind::kError: return "ERROR";
  }
  return "UNKNOWN";
}

std::vector<uint8_t> SerializeMessage(const Message& m) {
  ByteWriter w;
  w.Bytes(kFrameMagic);
  w.U8(static_cast<uint8_t>(m.kind));
  w.U64(m.payload.size());
  w.Bytes(m.payload);
  return w.Take();
}

uint64_t PayloadLength(std::span<const uint8_t> header) {
  ByteReader r(header);
  const auto magic = r.Bytes(kFrameMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kFrameMagic.begin())) throw FormatError("bad magic");
  r.U8();
  const uint64_t length = r.U64();
  if (length > kMaxPayloadBytes) throw FormatError("bad length");
  return length;
}

Message DeserializeMessage(std::span<const uint8_t> frame) {
  if (frame.size() < kFrameHeaderBytes) throw FormatError("short read");
  const uint64_t length = PayloadLength(frame.first(kFrameHeaderBytes));
  const uint8_t kind = frame[4];
  if (frame.size() - kFrameHeaderBytes < length) throw FormatError("short read");
  if (frame.size() - kFrameHeaderBytes > length) throw FormatError("bad length");
  if (kind < 1 || kind > 7) throw FormatError("unknown message kind");
  Message m;
  m.kind = static_cast<MessageKind>(kind);
  m.payload.assign(frame.begin() + kFrameHeaderBytes, frame.end());
  return m;
}

std::string SessionPlan::ToJson() const {
  nlohmann::json stages_json = nlohmann::json::array();
  for (const auto& s : stages) stages_json.push_back(s.ToJson());
  return nlohmann::json{{"drop_output_residue", drop_output_residue}, {"stages", stages_json}}.dump();
}

SessionPlan SessionPlan::FromJson(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    SessionPlan p;
    p.drop_output_residue = j.at("drop_output_residue").get<bool>();
    for (const auto& s : j.at("stages")) p.stages.push_back(nn::StageLayout::FromJson(s));
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad session plan: ") + e.what());
  }
}

Message EncodeHello(const Hello& h) {
  ByteWriter w;
  w.U16(h.version);
  w.Str(h.network);
  w.Bytes(h.network_hash);
  w.Bytes(h.params_id);
  return Message{MessageKind::kHello, w.Take()};
}

Hello DecodeHello(const Message& m) {
  CheckKind(m, MessageKind::kHello);
  ByteReader r = Reader(m);
  Hello h;
  h.version = r.U16();
  h.network = r.Str();
  const auto hash = r.Bytes(32);
  std::copy(hash.begin(), hash.end(), h.network_hash.begin());
  const auto id = r.Bytes(32);
  std::copy(id.begin(), id.end(), h.params_id.begin());
  r.ExpectEnd();
  return h;
}

Message EncodeParams(const ParamsMessage& p) {
  ByteWriter w;
  w.U32(static_cast<uint32_t>(p.params.size()));
  w.Bytes(p.params);
  w.Str(p.plan.ToJson());
  return Message{MessageKind::kParams, w.Take()};
}

ParamsMessage DecodeParams(const Message& m) {
  CheckKind(m, MessageKind::kParams);
  ByteReader r = Reader(m);
  ParamsMessage p;
  const auto params = r.Bytes(r.U32());
  p.params.assign(params.begin(), params.end());
  p.plan = SessionPlan::FromJson(r.Str());
  r.ExpectEnd();
  return p;
}

Message EncodeKeys(const bfv::Context& ctx, const bfv::PublicKey& pk, const bfv::GaloisKeys& gk) {
  ByteWriter w;
  bfv::WritePublicKey(w, ctx, pk);
  bfv::WriteGaloisKeys(w, ctx, gk);
  return Message{MessageKind::kKeys, w.Take()};
}

void DecodeKeys(const Message& m, const bfv::Context& ctx, bfv::PublicKey& pk, bfv::GaloisKeys& gk) {
  CheckKind(m, MessageKind::kKeys);
  ByteReader r = Reader(m);
  pk = bfv::ReadPublicKey(r, ctx);
  gk = bfv::ReadGaloisKeys(r, ctx);
  r.ExpectEnd();
}

Message EncodeBatch(MessageKind kind, const Batch& b) {
  ByteWriter w;
  w.U32(b.stage);
  w.U32(static_cast<uint32_t>(b.ciphertexts.size()));
  for (const auto& ct : b.ciphertexts) bfv::WriteCiphertext(w, ct);
  return Message{kind, w.Take()};
}

Batch DecodeBatch(const Message& m, const bfv::Context& ctx) {
  if (m.kind != MessageKind::kLayerInput && m.kind != MessageKind::kLayerOutput) {
    throw FormatError("expected a ciphertext batch");
  }
  ByteReader r = Reader(m);
  Batch b;
  b.stage = r.U32();
  const uint32_t count = r.U32();
  // Each ciphertext is at least a header; reject counts the payload
  // cannot hold before reserving.
  if (count > r.remaining() / bfv::kCiphertextHeaderBytes) throw FormatError("short read");
  b.ciphertexts.reserve(count);
  for (uint32_t i = 0; i < count; ++i) b.ciphertexts.push_back(bfv::ReadCiphertext(r, ctx));
  r.ExpectEnd();
  return b;
}

Message EncodeResult(const ResultMessage& res) {
  ByteWriter w;
  w.Bytes(res.transcript_hash);
  w.U64(res.up_bytes);
  w.U64(res.down_bytes);
  return Message{MessageKind::kResult, w.Take()};
}

ResultMessage DecodeResult(const Message& m) {
  CheckKind(m, MessageKind::kResult);
  ByteReader r = Reader(m);
  ResultMessage res;
  const auto h = r.Bytes(32);
  std::copy(h.begin(), h.end(), res.transcript_hash.begin());
  res.up_bytes = r.U64();
  res.down_bytes = r.U64();
  r.ExpectEnd();
  return res;
}

Message EncodeError(const std::string& what) {
  ByteWriter w;
  w.Str(what);
  return Message{MessageKind::kError, w.Take()};
}

std::string DecodeError(const Message& m) {
  CheckKind(m, MessageKind::kError);
  ByteReader r = Reader(m);
  std::string what = r.Str();
  r.ExpectEnd();
  return what;
}

void Expect(const Message& m, MessageKind want) {
  if (m.kind == want) return;
  if (m.kind == MessageKind::kError) throw PeerError(DecodeError(m));
  throw FormatError("expected " + MessageKindName(want) + ", got " + MessageKindName(m.kind));
}

}  // namespace choco::protocol
