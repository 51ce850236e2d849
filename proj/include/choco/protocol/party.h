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

#ifndef CHOCO_PROTOCOL_PARTY_H_
#define CHOCO_PROTOCOL_PARTY_H_

#include <map>
#include <memory>
#include <vector>

#include "choco/bfv/context.h"
#include "choco/bfv/op_log.h"
#include "choco/nn/network.h"
#include "choco/nn/tensor.h"
#include "choco/protocol/session.h"
#include "choco/protocol/transport.h"
#include "choco/ring/sampler.h"

namespace choco::protocol {

struct ClientConfig {
  std::shared_ptr<const bfv::Context> context;
  ring::Seed seed{};
  // Diagnostics only: measures budgets with a second, unlogged decryptor.
  bool measure_noise = false;
};

struct ClientResult {
  nn::IntTensor scores;  // empty unless the session completed
  Session session;
  // Encrypt and decrypt only; everything else the client does is plaintext.
  bfv::OpLog ops;
  std::vector<int> sent_budgets;      // with measure_noise
  std::vector<int> returned_budgets;  // with measure_noise

  bool ok() const { return session.completed; }
};

// Runs one inference over `transport`. The network needs no weights.
// Protocol and transport failures end the session (session.error, partial
// ledger) rather than throwing.
ClientResult RunClient(const nn::NetworkSpec& net, const nn::QTensor& image, Transport& transport,
                       const ClientConfig& config);

// Read-only after setup; shared by concurrent sessions.
class ModelStore {
 public:
  // Throws InvalidArgument unless every linear layer has weights.
  void Add(nn::NetworkSpec net);
  std::shared_ptr<const nn::NetworkSpec> Find(const nn::NetworkHash& hash) const;
  std::size_t size() const { return models_.size(); }

 private:
  std::map<nn::NetworkHash, std::shared_ptr<const nn::NetworkSpec>> models_;
};

struct ServerConfig {
  std::shared_ptr<const bfv::Context> context;
  bool drop_output_residue = false;
};

struct ServerResult {
  Session session;
  // The server holds no secret key; it never decrypts.
  bfv::OpLog ops;

  bool ok() const { return session.completed; }
};

// Serves one session. Bad requests are answered with ERROR.
ServerResult RunServer(Transport& transport, const ModelStore& models, const ServerConfig& config);

}  // namespace choco::protocol

#endif  // CHOCO_PROTOCOL_PARTY_H_
