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

#include "choco/protocol/party.h"

#include <utility>

#include "choco/bfv/decryptor.h"
#include "choco/bfv/encryptor.h"
#include "choco/bfv/evaluator.h"
#include "choco/bfv/keys.h"
#include "choco/nn/linear.h"
#include "choco/nn/reference.h"

namespace choco::protocol {
namespace {

// An error this party detected; the peer is told before the session ends.
class LocalError : public Error {
 public:
  using Error::Error;
};

SessionPlan PlanFor(const nn::NetworkSpec& net, std::size_t n, bool drop) {
  SessionPlan plan;
  plan.drop_output_residue = drop;
  for (const auto& stage : net.Stages()) plan.stages.push_back(nn::PlanStage(net, stage, n));
  return plan;
}

void RunClientSession(const nn::NetworkSpec& net, const nn::QTensor& image, SessionIo& io,
                      const ClientConfig& config, ClientResult& result) {
  const auto& ctx = config.context;
  const std::size_t n = ctx->n();
  const uint64_t t = ctx->params().t();
  Session& session = result.session;

  session.network = net.name;
  session.network_hash = net.Hash();
  session.params_id = ctx->id();
  const auto stages = net.Stages();
  const SessionPlan own_plan = PlanFor(net, n, false);
  io.BindNetwork(net);

  Hello hello;
  hello.network = net.name;
  hello.network_hash = session.network_hash;
  hello.params_id = session.params_id;
  io.Send(EncodeHello(hello));

  Message m = io.Receive();
  Expect(m, MessageKind::kParams);
  ParamsMessage pm = DecodeParams(m);
  if (pm.params != ctx->params().Serialize()) throw LocalError("params mismatch");
  if (pm.plan.stages != own_plan.stages) throw LocalError("layout mismatch");
  session.plan = pm.plan;

  const bfv::KeyMaterial keys = bfv::GenerateKeys(*ctx, ring::DeriveSeed(config.seed, "keys"));
  bfv::Encryptor encryptor(ctx, keys.pub, ring::DeriveSeed(config.seed, "encrypt"), &result.ops);
  bfv::Decryptor decryptor(ctx, keys.secret, &result.ops);
  bfv::Decryptor meter(ctx, keys.secret);
  io.Send(EncodeKeys(*ctx, keys.pub, keys.galois));

  nn::IntTensor x = nn::Widen(image);
  if (!stages.empty()) x.shape = net.layers[stages.front().linear.front()].in_shape;
  for (std::size_t s = 0; s < stages.size(); ++s) {
    const auto& stage = stages[s];
    const auto& layout = own_plan.stages[s];
    Batch up;
    up.stage = static_cast<uint32_t>(s);
    for (const auto& slots : nn::PackStageInput(x, net, stage, layout, n, t)) {
      up.ciphertexts.push_back(encryptor.Encrypt(bfv::Plaintext{slots, bfv::Encoding::kSlot}));
      if (config.measure_noise) {
        result.sent_budgets.push_back(meter.NoiseBudget(up.ciphertexts.back()).budget_bits);
      }
    }
    io.Send(EncodeBatch(MessageKind::kLayerInput, up));

    m = io.Receive();
    Expect(m, MessageKind::kLayerOutput);
    const Batch down = DecodeBatch(m, *ctx);
    if (down.stage != s || down.ciphertexts.size() != layout.total_output_ciphertexts()) {
      throw LocalError("unexpected layer output");
    }
    nn::IntTensor y;
    y.shape = stage.linear_out_shape;
    std::size_t next = 0;
    for (std::size_t i = 0; i < stage.linear.size(); ++i) {
      std::vector<std::vector<uint64_t>> slots;
      for (std::size_t c = 0; c < layout.output_ciphertexts[i]; ++c, ++next) {
        const auto& ct = down.ciphertexts[next];
        if (config.measure_noise) result.returned_budgets.push_back(meter.NoiseBudget(ct).budget_bits);
        slots.push_back(decryptor.Decrypt(ct).values);
      }
      const auto part = nn::UnpackLayerOutput(slots, net.layers[stage.linear[i]], layout.outputs[i], t);
      y.data.insert(y.data.end(), part.data.begin(), part.data.end());
    }
    y = nn::ApplyNonlinear(std::move(y), net, stage);
    if (s + 1 == stages.size()) {
      result.scores = std::move(y);
    } else {
      x = nn::NextStageInput(y, net, stages[s + 1]);
    }
  }
  if (stages.empty()) result.scores = x;

  ResultMessage done;
  done.transcript_hash = session.transcript.Digest();
  done.up_bytes = session.ledger.up_bytes;
  done.down_bytes = session.ledger.down_bytes;
  io.Send(EncodeResult(done));
  session.completed = true;
}

void RunServerSession(SessionIo& io, const ModelStore& models, const ServerConfig& config,
                      ServerResult& result) {
  const auto& ctx = config.context;
  Session& session = result.session;

  const Hello hello = DecodeHello(io.Receive());
  if (hello.version != kProtocolVersion) throw LocalError("unsupported protocol version");
  const auto net = models.Find(hello.network_hash);
  if (!net) throw LocalError("unknown network");
  if (hello.params_id != ctx->id()) throw LocalError("params mismatch");
  session.network = net->name;
  session.network_hash = hello.network_hash;
  session.params_id = hello.params_id;
  const auto stages = net->Stages();
  session.plan = PlanFor(*net, ctx->n(), config.drop_output_residue);
  for (const auto& stage : stages) {
    for (std::size_t idx : stage.linear) nn::CheckAccumulator(net->layers[idx], ctx->params().t());
  }
  io.BindNetwork(*net);

  ParamsMessage pm;
  pm.params = ctx->params().Serialize();
  pm.plan = session.plan;
  io.Send(EncodeParams(pm));

  Message m = io.Receive();
  Expect(m, MessageKind::kKeys);
  bfv::PublicKey pk;
  bfv::GaloisKeys galois;
  DecodeKeys(m, *ctx, pk, galois);

  const bfv::Evaluator evaluator(ctx, &result.ops);
  for (std::size_t s = 0; s < stages.size(); ++s) {
    const auto& layout = session.plan.stages[s];
    m = io.Receive();
    Expect(m, MessageKind::kLayerInput);
    const Batch in = DecodeBatch(m, *ctx);
    if (in.stage != s || in.ciphertexts.size() != layout.input_ciphertexts) {
      throw LocalError("unexpected layer input");
    }
    Batch out;
    out.stage = in.stage;
    out.ciphertexts = nn::EvaluateStage(in.ciphertexts, *net, stages[s], layout, evaluator, galois);
    for (auto& ct : out.ciphertexts) {
      ct = config.drop_output_residue ? evaluator.DropResidue(ct) : evaluator.FromNtt(std::move(ct));
    }
    io.Send(EncodeBatch(MessageKind::kLayerOutput, out));
  }

  const auto digest = session.transcript.Digest();
  const uint64_t up = session.ledger.up_bytes, down = session.ledger.down_bytes;
  m = io.Receive();
  Expect(m, MessageKind::kResult);
  const ResultMessage done = DecodeResult(m);
  if (done.transcript_hash != digest || done.up_bytes != up || done.down_bytes != down) {
    // The client has finished; there is nobody left to tell.
    session.error = "transcript mismatch";
    return;
  }
  session.completed = true;
}

// Runs `body`, turning every failure into session.error. Errors found
// locally or in the peer's bytes are reported to the peer first.
template <typename Body>
void Guard(SessionIo& io, Session& session, Body body) {
  try {
    body();
  } catch (const TransportError& e) {
    session.error = e.what();
  } catch (const PeerError& e) {
    session.error = std::string("peer: ") + e.what();
  } catch (const std::exception& e) {
    session.error = e.what();
    io.SendError(e.what());
  }
}

}  // namespace

ClientResult RunClient(const nn::NetworkSpec& net, const nn::QTensor& image, Transport& transport,
                       const ClientConfig& config) {
  ClientResult result;
  SessionIo io(transport, result.session, true, config.context->n());
  Guard(io, result.session, [&] { RunClientSession(net, image, io, config, result); });
  if (!result.session.completed) result.scores = {};
  return result;
}

void ModelStore::Add(nn::NetworkSpec net) {
  if (!net.has_weights()) throw InvalidArgument("network " + net.name + " has no weights");
  const auto hash = net.Hash();
  models_[hash] = std::make_shared<const nn::NetworkSpec>(std::move(net));
}

std::shared_ptr<const nn::NetworkSpec> ModelStore::Find(const nn::NetworkHash& hash) const {
  const auto it = models_.find(hash);
  return it == models_.end() ? nullptr : it->second;
}

ServerResult RunServer(Transport& transport, const ModelStore& models, const ServerConfig& config) {
  ServerResult result;
  SessionIo io(transport, result.session, false, config.context->n());
  Guard(io, result.session, [&] { RunServerSession(io, models, config, result); });
  return result;
}

}  // namespace choco::protocol
