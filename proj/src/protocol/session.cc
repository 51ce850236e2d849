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

#include "choco/protocol/session.h"

#include <sodium.h>

#include <fstream>
#include <iterator>
#include <numeric>

#include <json.hpp>

#include "choco/bfv/context.h"
#include "choco/bfv/keys.h"
#include "choco/common/bytes.h"
#include "choco/common/frame.h"

namespace choco::protocol {
namespace {

std::string Hex(std::span<const uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  for (uint8_t b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 15]);
  }
  return s;
}

std::array<uint8_t, 32> Unhex32(const std::string& s) {
  std::array<uint8_t, 32> out{};
  std::size_t len = 0;
  if (sodium_hex2bin(out.data(), out.size(), s.data(), s.size(), nullptr, &len, nullptr) != 0 ||
      len != out.size()) {
    throw FormatError("bad digest in transcript");
  }
  return out;
}

bool IsControl(MessageKind kind) {
  return kind == MessageKind::kHello || kind == MessageKind::kParams ||
         kind == MessageKind::kResult || kind == MessageKind::kError;
}

uint64_t FrameBytes(const Message& m) { return kFrameHeaderBytes + m.payload.size(); }

}  // namespace

void Transcript::Append(Direction direction, std::span<const uint8_t> frame) {
  TranscriptEntry e;
  e.direction = direction;
  e.kind = frame.size() > 4 ? static_cast<MessageKind>(frame[4]) : MessageKind::kError;
  e.length = frame.size();
  crypto_hash_sha256(e.sha256.data(), frame.data(), frame.size());
  entries.push_back(e);
}

std::array<uint8_t, 32> Transcript::Digest() const {
  ByteWriter w;
  for (const auto& e : entries) {
    w.U8(static_cast<uint8_t>(e.direction));
    w.U8(static_cast<uint8_t>(e.kind));
    w.U64(e.length);
    w.Bytes(e.sha256);
  }
  std::array<uint8_t, 32> d{};
  crypto_hash_sha256(d.data(), w.buffer().data(), w.size());
  return d;
}

std::string Transcript::ToJson() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : entries) {
    list.push_back({{"direction", e.direction == Direction::kUp ? "up" : "down"},
                    {"kind", static_cast<int>(e.kind)},
                    {"length", e.length},
                    {"sha256", Hex(e.sha256)}});
  }
  return nlohmann::json{{"entries", list}, {"digest", Hex(Digest())}}.dump(1);
}

Transcript Transcript::FromJson(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Transcript t;
    for (const auto& e : j.at("entries")) {
      TranscriptEntry entry;
      entry.direction = e.at("direction").get<std::string>() == "up" ? Direction::kUp : Direction::kDown;
      entry.kind = static_cast<MessageKind>(e.at("kind").get<int>());
      entry.length = e.at("length").get<uint64_t>();
      entry.sha256 = Unhex32(e.at("sha256").get<std::string>());
      t.entries.push_back(entry);
    }
    if (j.contains("digest") && j.at("digest").get<std::string>() != Hex(t.Digest())) {
      throw FormatError("transcript digest mismatch");
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad transcript: ") + e.what());
  }
}

void Transcript::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << ToJson() << "\n";
}

Transcript Transcript::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return FromJson(std::string(std::istreambuf_iterator<char>(in), {}));
}

uint64_t Ledger::online_bytes() const {
  return std::accumulate(layers.begin(), layers.end(), uint64_t{0},
                         [](uint64_t s, const LayerTraffic& l) { return s + l.bytes(); });
}

Ledger PredictLedger(const nn::NetworkSpec& net, const bfv::HEParams& params,
                     const nn::CommOptions& options) {
  const bfv::Context ctx(params);
  const nn::CommReport report = nn::NetworkCommReport(net, params, options);
  Ledger ledger;

  Hello hello;
  hello.network = net.name;
  hello.network_hash = net.Hash();
  hello.params_id = ctx.id();
  ParamsMessage pm;
  pm.params = params.Serialize();
  pm.plan.drop_output_residue = options.drop_output_residue;
  pm.plan.stages = report.stages;
  const uint64_t hello_bytes = FrameBytes(EncodeHello(hello));
  const uint64_t params_bytes = FrameBytes(EncodeParams(pm));
  const uint64_t result_bytes = FrameBytes(EncodeResult(ResultMessage{}));
  const uint64_t key_bytes = kFrameHeaderBytes + bfv::PublicKeyBytes(ctx) + bfv::GaloisKeysBytes(ctx);

  ledger.control_bytes = hello_bytes + params_bytes + result_bytes;
  ledger.offline_bytes = key_bytes;
  ledger.up_bytes = hello_bytes + key_bytes + result_bytes;
  ledger.down_bytes = params_bytes;
  for (const auto& l : report.layers) {
    ledger.layers.push_back({l.name, l.upload_bytes, l.download_bytes});
    ledger.up_bytes += l.upload_bytes;
    ledger.down_bytes += l.download_bytes;
  }
  return ledger;
}

SessionIo::SessionIo(Transport& transport, Session& session, bool is_client, std::size_t n)
    : transport_(transport), session_(session), is_client_(is_client), n_(n) {}

void SessionIo::BindNetwork(const nn::NetworkSpec& net) {
  session_.ledger.layers.clear();
  for (const auto& l : net.layers) session_.ledger.layers.push_back({l.name, 0, 0});
  stage_layers_.clear();
  for (const auto& s : net.Stages()) stage_layers_.push_back(s.linear);
}

void SessionIo::Send(const Message& m) {
  const auto frame = SerializeMessage(m);
  Account(is_client_ ? Direction::kUp : Direction::kDown, frame);
  transport_.Send(frame);
}

Message SessionIo::Receive() {
  const auto frame = transport_.Receive();
  Account(is_client_ ? Direction::kDown : Direction::kUp, frame);
  return DeserializeMessage(frame);
}

void SessionIo::SendError(const std::string& what) noexcept {
  try {
    Send(EncodeError(what));
  } catch (...) {
  }
}

void SessionIo::Account(Direction direction, std::span<const uint8_t> frame) {
  session_.transcript.Append(direction, frame);
  Ledger& ledger = session_.ledger;
  (direction == Direction::kUp ? ledger.up_bytes : ledger.down_bytes) += frame.size();
  const auto kind = static_cast<MessageKind>(frame.size() > 4 ? frame[4] : 0);
  if (kind == MessageKind::kKeys) {
    ledger.offline_bytes += frame.size();
  } else if (IsControl(kind) || !AccountBatch(direction, frame)) {
    ledger.control_bytes += frame.size();
  }
}

// Charges a batch frame to its stage's layers: the upload and any framing
// to the first linear layer, each layer's output ciphertexts to that layer.
// False when the frame cannot be attributed.
bool SessionIo::AccountBatch(Direction direction, std::span<const uint8_t> frame) {
  if (frame.size() < kFrameHeaderBytes + kBatchPrefixBytes) return false;
  try {
    ByteReader r(frame.subspan(kFrameHeaderBytes));
    const uint32_t stage = r.U32();
    const uint32_t count = r.U32();
    if (stage >= stage_layers_.size() || stage >= session_.plan.stages.size()) return false;
    const auto& layers = stage_layers_[stage];
    auto& traffic = session_.ledger.layers;
    if (direction == Direction::kUp) {
      traffic[layers.front()].up_bytes += frame.size();
      return true;
    }
    const auto& per_layer = session_.plan.stages[stage].output_ciphertexts;
    if (per_layer.size() != layers.size()) return false;
    std::vector<uint64_t> charge(layers.size(), 0);
    uint64_t rest = frame.size();
    std::size_t layer = 0, used = 0;
    for (uint32_t i = 0; i < count; ++i) {
      const auto header = r.Bytes(bfv::kCiphertextHeaderBytes);
      const uint64_t bytes = bfv::SerializedCiphertextBytes(n_, header[38], header[39]);
      r.Bytes(bytes - bfv::kCiphertextHeaderBytes);
      while (layer < layers.size() && used == per_layer[layer]) {
        ++layer;
        used = 0;
      }
      if (layer == layers.size()) return false;
      charge[layer] += bytes;
      rest -= bytes;
      ++used;
    }
    charge[0] += rest;
    for (std::size_t i = 0; i < layers.size(); ++i) traffic[layers[i]].down_bytes += charge[i];
    return true;
  } catch (const FormatError&) {
    return false;
  }
}

}  // namespace choco::protocol
