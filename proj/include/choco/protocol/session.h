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

#ifndef CHOCO_PROTOCOL_SESSION_H_
#define CHOCO_PROTOCOL_SESSION_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "choco/bfv/params.h"
#include "choco/nn/cost.h"
#include "choco/nn/network.h"
#include "choco/protocol/message.h"
#include "choco/protocol/transport.h"

namespace choco::protocol {

// Always from the client's point of view: up is client -> server.
enum class Direction : uint8_t { kUp = 0, kDown = 1 };

struct TranscriptEntry {
  Direction direction = Direction::kUp;
  MessageKind kind = MessageKind::kError;
  uint64_t length = 0;  // whole frame
  std::array<uint8_t, 32> sha256{};

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

// Ordered frame log. Both parties keep one; for a clean session they are
// identical, whatever the transport.
struct Transcript {
  std::vector<TranscriptEntry> entries;

  void Append(Direction direction, std::span<const uint8_t> frame);
  // SHA-256 over the entries in order.
  std::array<uint8_t, 32> Digest() const;
  std::string ToJson() const;
  static Transcript FromJson(const std::string& text);
  void Save(const std::string& path) const;
  static Transcript Load(const std::string& path);

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

struct LayerTraffic {
  std::string name;
  uint64_t up_bytes = 0;
  uint64_t down_bytes = 0;

  uint64_t bytes() const { return up_bytes + down_bytes; }
  friend bool operator==(const LayerTraffic&, const LayerTraffic&) = default;
};

// Bytes on the wire, by frame. control + offline + online = up + down.
struct Ledger {
  uint64_t up_bytes = 0;
  uint64_t down_bytes = 0;
  uint64_t control_bytes = 0;  // HELLO, PARAMS, RESULT, ERROR
  uint64_t offline_bytes = 0;  // KEYS
  std::vector<LayerTraffic> layers;  // every network layer, in order

  uint64_t online_bytes() const;
  uint64_t total_bytes() const { return up_bytes + down_bytes; }
  friend bool operator==(const Ledger&, const Ledger&) = default;
};

struct Session {
  bfv::ParamsId params_id{};
  std::string network;
  nn::NetworkHash network_hash{};
  SessionPlan plan;
  Transcript transcript;
  Ledger ledger;
  bool completed = false;
  std::string error;  // empty unless aborted
};

// The ledger a clean session of `net` will produce, byte for byte.
Ledger PredictLedger(const nn::NetworkSpec& net, const bfv::HEParams& params,
                     const nn::CommOptions& options = {});

// Frame I/O for one party: every frame is logged in the transcript and
// charged to the ledger before it is interpreted.
class SessionIo {
 public:
  SessionIo(Transport& transport, Session& session, bool is_client, std::size_t n);

  // Sets up per-layer accounting once the network is known.
  void BindNetwork(const nn::NetworkSpec& net);

  void Send(const Message& m);
  Message Receive();
  // Best effort; a dead transport is not worth a second error.
  void SendError(const std::string& what) noexcept;

 private:
  void Account(Direction direction, std::span<const uint8_t> frame);
  bool AccountBatch(Direction direction, std::span<const uint8_t> frame);

  Transport& transport_;
  Session& session_;
  bool is_client_;
  std::size_t n_;
  // Index in net.layers of each stage's linear layers.
  std::vector<std::vector<std::size_t>> stage_layers_;
};

}  // namespace choco::protocol

#endif  // CHOCO_PROTOCOL_SESSION_H_
