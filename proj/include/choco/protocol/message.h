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

#ifndef CHOCO_PROTOCOL_MESSAGE_H_
#define CHOCO_PROTOCOL_MESSAGE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "choco/bfv/ciphertext.h"
#include "choco/bfv/context.h"
#include "choco/bfv/keys.h"
#include "choco/common/error.h"
#include "choco/nn/linear.h"
#include "choco/nn/network.h"

namespace choco::protocol {

inline constexpr std::array<uint8_t, 4> kFrameMagic = {'C', 'H', 'F', 'R'};
inline constexpr uint16_t kProtocolVersion = 1;
// Frames above this are rejected before any allocation.
inline constexpr uint64_t kMaxPayloadBytes = uint64_t{1} << 32;

enum class MessageKind : uint8_t {
  kHello = 1,
  kParams = 2,
  kKeys = 3,
  kLayerInput = 4,
  kLayerOutput = 5,
  kResult = 6,
  kError = 7,
};

std::string MessageKindName(MessageKind kind);

struct Message {
  MessageKind kind = MessageKind::kError;
  std::vector<uint8_t> payload;

  friend bool operator==(const Message&, const Message&) = default;
};

// magic | kind | u64 LE payload length | payload
std::vector<uint8_t> SerializeMessage(const Message& m);
// Exactly one frame. "short read" on truncation, "bad magic", "bad length"
// on a length that disagrees with the buffer, "unknown message kind".
Message DeserializeMessage(std::span<const uint8_t> frame);
// Payload length from a frame header (first kFrameHeaderBytes bytes).
uint64_t PayloadLength(std::span<const uint8_t> header);

// --- payloads ------------------------------------------------------------

struct Hello {
  uint16_t version = kProtocolVersion;
  std::string network;
  nn::NetworkHash network_hash{};
  bfv::ParamsId params_id{};
};

// Layouts the server will use; the client checks them against its own plan.
struct SessionPlan {
  bool drop_output_residue = false;
  std::vector<nn::StageLayout> stages;

  std::string ToJson() const;
  static SessionPlan FromJson(const std::string& text);
  friend bool operator==(const SessionPlan&, const SessionPlan&) = default;
};

struct ParamsMessage {
  std::vector<uint8_t> params;  // HEParams::Serialize()
  SessionPlan plan;
};

struct Batch {
  uint32_t stage = 0;
  std::vector<bfv::Ciphertext> ciphertexts;
};

struct ResultMessage {
  std::array<uint8_t, 32> transcript_hash{};
  uint64_t up_bytes = 0;
  uint64_t down_bytes = 0;
};

Message EncodeHello(const Hello& h);
Hello DecodeHello(const Message& m);
Message EncodeParams(const ParamsMessage& p);
ParamsMessage DecodeParams(const Message& m);
Message EncodeKeys(const bfv::Context& ctx, const bfv::PublicKey& pk, const bfv::GaloisKeys& gk);
void DecodeKeys(const Message& m, const bfv::Context& ctx, bfv::PublicKey& pk, bfv::GaloisKeys& gk);
Message EncodeBatch(MessageKind kind, const Batch& b);
Batch DecodeBatch(const Message& m, const bfv::Context& ctx);
Message EncodeResult(const ResultMessage& r);
ResultMessage DecodeResult(const Message& m);
Message EncodeError(const std::string& what);
std::string DecodeError(const Message& m);

// Throws FormatError unless m.kind == want; an ERROR message surfaces as a
// PeerError carrying the peer's text.
void Expect(const Message& m, MessageKind want);

class PeerError : public Error {
 public:
  using Error::Error;
};

}  // namespace choco::protocol

#endif  // CHOCO_PROTOCOL_MESSAGE_H_
