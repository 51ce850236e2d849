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

#include <algorithm>
#include <filesystem>
#include <future>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "choco/bfv/context.h"
#include "choco/bfv/keys.h"
#include "choco/common/frame.h"
#include "choco/nn/cost.h"
#include "choco/nn/network.h"
#include "choco/nn/reference.h"
#include "choco/protocol/message.h"
#include "choco/protocol/party.h"
#include "choco/protocol/report.h"
#include "choco/protocol/session.h"
#include "choco/protocol/transport.h"
#include "testing/bfv_fixture.h"

namespace choco::protocol {
namespace {

using nn::NetworkSpec;
using nn::QTensor;
using nn::Shape;

const std::string kNetDir = CHOCO_SOURCE_DIR "/data/networks/";

std::shared_ptr<const bfv::Context> PresetA() {
  static const auto ctx = bfv::Context::Create(bfv::HEParams::PresetA());
  return ctx;
}

std::shared_ptr<const bfv::Context> PresetB() {
  static const auto ctx = bfv::Context::Create(bfv::HEParams::PresetB());
  return ctx;
}

struct Loopback {
  ClientResult client;
  ServerResult server;
  std::vector<std::vector<uint8_t>> up_frames;
  std::vector<std::vector<uint8_t>> down_frames;
};

// Runs both parties over `client_end` / `server_end`, the server on a thread.
Loopback RunOver(Transport& client_end, Transport& server_end, const NetworkSpec& net,
                 const QTensor& image, std::shared_ptr<const bfv::Context> ctx, bool drop = false,
                 uint64_t seed = 42, bool measure = false) {
  ModelStore store;
  store.Add(net);
  ServerConfig sc{ctx, drop};
  RecordingTransport rec(client_end);
  auto server = std::async(std::launch::async, [&] {
    ServerResult r = RunServer(server_end, store, sc);
    server_end.Close();
    return r;
  });
  ClientConfig cc{ctx, ring::SeedFromInteger(seed), measure};
  Loopback out;
  out.client = RunClient(net, image, rec, cc);
  out.server = server.get();
  out.up_frames = rec.sent();
  out.down_frames = rec.received();
  return out;
}

Loopback RunPipe(const NetworkSpec& net, const QTensor& image,
                 std::shared_ptr<const bfv::Context> ctx, bool drop = false, uint64_t seed = 42,
                 bool measure = false) {
  auto [a, b] = MakePipe();
  return RunOver(*a, *b, net, image, std::move(ctx), drop, seed, measure);
}

QTensor Image(Shape s, uint64_t seed) {
  std::mt19937_64 rng(seed);
  QTensor q;
  q.dims = {s.h, s.w, s.c};
  q.bits = 4;
  q.scale = 1.0 / 7;
  for (std::size_t i = 0; i < s.size(); ++i) q.data.push_back(static_cast<int32_t>(rng() % 15) - 7);
  return q;
}

NetworkSpec OneConv() {
  NetworkSpec net{"oneconv", {nn::Conv("conv1", {8, 8, 2}, 3, 4, 1, 1)}};
  nn::RandomizeWeights(net, 5);
  return net;
}

// Frames exchanged by a completed client, by kind, in order.
std::vector<MessageKind> Kinds(const Session& s) {
  std::vector<MessageKind> k;
  for (const auto& e : s.transcript.entries) k.push_back(e.kind);
  return k;
}

// --- messages ----------------------------------------------------------------

TEST(MessageTest, FrameLayout) {
  const Message m{MessageKind::kResult, {1, 2, 3}};
  const auto frame = SerializeMessage(m);
  ASSERT_EQ(frame.size(), kFrameHeaderBytes + 3);
  EXPECT_EQ(std::string(frame.begin(), frame.begin() + 4), "CHFR");
  EXPECT_EQ(frame[4], 6);
  EXPECT_EQ(frame[5], 3);
  for (int i = 6; i < 13; ++i) EXPECT_EQ(frame[i], 0);
  EXPECT_EQ(DeserializeMessage(frame), m);
}

TEST(MessageTest, KeysRoundTripIsByteExact) {
  testing::BfvParty party(bfv::HEParams::PresetB());
  const Message m = EncodeKeys(*party.ctx, party.keys.pub, party.keys.galois);
  const auto frame = SerializeMessage(m);
  EXPECT_EQ(frame.size(), kFrameHeaderBytes + bfv::PublicKeyBytes(*party.ctx) +
                              bfv::GaloisKeysBytes(*party.ctx));
  const Message back = DeserializeMessage(frame);
  bfv::PublicKey pk;
  bfv::GaloisKeys gk;
  DecodeKeys(back, *party.ctx, pk, gk);
  EXPECT_EQ(pk, party.keys.pub);
  EXPECT_EQ(gk, party.keys.galois);
  EXPECT_EQ(SerializeMessage(EncodeKeys(*party.ctx, pk, gk)), frame);
}

TEST(MessageTest, LayerInputCarriesOnePresetACiphertext) {
  testing::BfvParty party(bfv::HEParams::PresetA());
  std::mt19937_64 rng(1);
  Batch b{3, {party.Encrypt(party.RandomSlots(rng))}};
  const Message m = EncodeBatch(MessageKind::kLayerInput, b);
  EXPECT_EQ(m.payload.size(), kBatchPrefixBytes + 262144 + bfv::kCiphertextHeaderBytes);
  const Batch back = DecodeBatch(DeserializeMessage(SerializeMessage(m)), *party.ctx);
  EXPECT_EQ(back.stage, 3u);
  ASSERT_EQ(back.ciphertexts.size(), 1u);
  EXPECT_EQ(back.ciphertexts[0], b.ciphertexts[0]);
}

TEST(MessageTest, SmallPayloadsRoundTrip) {
  Hello h;
  h.network = "toy";
  h.network_hash[0] = 9;
  h.params_id[31] = 4;
  const Hello h2 = DecodeHello(DeserializeMessage(SerializeMessage(EncodeHello(h))));
  EXPECT_EQ(h2.network, "toy");
  EXPECT_EQ(h2.network_hash, h.network_hash);
  EXPECT_EQ(h2.params_id, h.params_id);

  ResultMessage r;
  r.transcript_hash[5] = 1;
  r.up_bytes = 123456789012;
  r.down_bytes = 7;
  const ResultMessage r2 = DecodeResult(EncodeResult(r));
  EXPECT_EQ(r2.transcript_hash, r.transcript_hash);
  EXPECT_EQ(r2.up_bytes, r.up_bytes);
  EXPECT_EQ(r2.down_bytes, r.down_bytes);

  EXPECT_EQ(DecodeError(EncodeError("unknown network")), "unknown network");

  const NetworkSpec net = OneConv();
  ParamsMessage pm;
  pm.params = bfv::HEParams::PresetB().Serialize();
  pm.plan.drop_output_residue = true;
  pm.plan.stages.push_back(nn::PlanStage(net, net.Stages()[0], 4096));
  const ParamsMessage pm2 = DecodeParams(EncodeParams(pm));
  EXPECT_EQ(pm2.params, pm.params);
  EXPECT_EQ(pm2.plan, pm.plan);
}

TEST(MessageTest, RejectsMalformedFrames) {
  auto what = [](std::vector<uint8_t> bytes) {
    try {
      DeserializeMessage(bytes);
    } catch (const FormatError& e) {
      return std::string(e.what());
    }
    return std::string("accepted");
  };
  EXPECT_EQ(what({0x42}), "short read");
  auto frame = SerializeMessage(EncodeError("x"));
  EXPECT_EQ(what({frame.begin(), frame.end() - 1}), "short read");
  auto bad_magic = frame;
  bad_magic[0] = 'X';
  EXPECT_EQ(what(bad_magic), "bad magic");
  auto long_frame = frame;
  long_frame.push_back(0);
  EXPECT_EQ(what(long_frame), "bad length");
  auto huge = frame;
  huge[12] = 0x7f;
  EXPECT_EQ(what(huge), "bad length");
  auto bad_kind = frame;
  bad_kind[4] = 0;
  EXPECT_EQ(what(bad_kind), "unknown message kind");
}

TEST(MessageTest, ErrorSurfacesAsPeerError) {
  EXPECT_THROW(Expect(EncodeError("no"), MessageKind::kParams), PeerError);
  EXPECT_THROW(Expect(EncodeResult({}), MessageKind::kParams), FormatError);
  EXPECT_NO_THROW(Expect(EncodeResult({}), MessageKind::kResult));
}

// --- transports --------------------------------------------------------------

TEST(TransportTest, PipeCarriesFramesBothWays) {
  auto [a, b] = MakePipe();
  const auto f1 = SerializeMessage(EncodeError("one"));
  const auto f2 = SerializeMessage(EncodeError("two"));
  a->Send(f1);
  a->Send(f2);
  EXPECT_EQ(b->Receive(), f1);
  EXPECT_EQ(b->Receive(), f2);
  b->Send(f1);
  EXPECT_EQ(a->Receive(), f1);
  a->Close();
  EXPECT_THROW(b->Receive(), TransportError);
  EXPECT_THROW(b->Send(f1), TransportError);
}

TEST(TransportTest, TruncatedStreamIsShortRead) {
  auto [a, b] = MakePipe();
  const uint8_t garbage = 0x42;
  a->Send({&garbage, 1});
  a->Close();
  try {
    b->Receive();
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_STREQ(e.what(), "short read");
  }
}

TEST(TransportTest, PipeTimesOut) {
  auto [a, b] = MakePipe();
  b->set_timeout(std::chrono::milliseconds(20));
  EXPECT_THROW(b->Receive(), TransportError);
}

TEST(TransportTest, TcpCarriesFrames) {
  TcpListener listener("127.0.0.1", 0);
  ASSERT_NE(listener.port(), 0);
  EXPECT_EQ(listener.Accept(std::chrono::milliseconds(10)), nullptr);
  auto client = TcpConnect("127.0.0.1", listener.port());
  auto server = listener.Accept(std::chrono::seconds(5));
  ASSERT_NE(server, nullptr);
  std::vector<uint8_t> big(3 << 20, 7);
  const auto frame = SerializeMessage(Message{MessageKind::kKeys, big});
  std::thread sender([&] { client->Send(frame); });
  EXPECT_EQ(server->Receive(), frame);
  sender.join();
  client->Close();
  EXPECT_THROW(server->Receive(), TransportError);
}

// --- sessions ----------------------------------------------------------------

TEST(SessionTest, IdentityNetworkReturnsTheInput) {
  NetworkSpec net{"identity", {nn::Conv("id", {4, 4, 1}, 1, 1)}};
  net.layers[0].weights = std::make_shared<const QTensor>(QTensor{{1}, {1, 1, 1, 1}, 1.0, 0, 4});
  const QTensor image = Image({4, 4, 1}, 3);
  const Loopback run = RunPipe(net, image, PresetB());
  ASSERT_TRUE(run.client.ok()) << run.client.session.error;
  ASSERT_TRUE(run.server.ok()) << run.server.session.error;
  EXPECT_EQ(run.client.scores.data, nn::Widen(image).data);
}

TEST(SessionTest, ToyCnnMatchesReferenceBitExactly) {
  const NetworkSpec net = nn::LoadNetwork(kNetDir + "toycnn.json");
  const QTensor image = nn::ReadTensorFile(kNetDir + "toycnn_image.q");
  ASSERT_GE(net.Stages().size(), 3u);
  const Loopback run = RunPipe(net, image, PresetA());
  ASSERT_TRUE(run.client.ok()) << run.client.session.error;
  ASSERT_TRUE(run.server.ok()) << run.server.session.error;
  EXPECT_EQ(run.client.scores, nn::ReferenceInference(net, image));

  // Only encryption and decryption on the client; no decryption on the server.
  for (int op = 0; op < static_cast<int>(bfv::Op::kCount); ++op) {
    const auto o = static_cast<bfv::Op>(op);
    if (o != bfv::Op::kEncrypt && o != bfv::Op::kDecrypt) {
      EXPECT_EQ(run.client.ops.count(o), 0u) << bfv::OpName(o);
    }
  }
  EXPECT_GT(run.client.ops.count(bfv::Op::kEncrypt), 0u);
  EXPECT_EQ(run.server.ops.count(bfv::Op::kDecrypt), 0u);
  EXPECT_EQ(run.server.ops.count(bfv::Op::kNoiseBudget), 0u);
  EXPECT_GT(run.server.ops.count(bfv::Op::kMulPt), 0u);
  EXPECT_EQ(run.server.ops.count(bfv::Op::kMulPtOnProduct), 0u);

  // Both parties saw the same frames and charged the same bytes.
  EXPECT_EQ(run.client.session.transcript, run.server.session.transcript);
  EXPECT_EQ(run.client.session.ledger, run.server.session.ledger);
}

TEST(SessionTest, LedgerEqualsPrediction) {
  const NetworkSpec net = nn::LoadNetwork(kNetDir + "toycnn.json");
  const QTensor image = nn::ReadTensorFile(kNetDir + "toycnn_image.q");
  const Loopback run = RunPipe(net, image, PresetA());
  ASSERT_TRUE(run.client.ok()) << run.client.session.error;
  const Ledger& ledger = run.client.session.ledger;
  EXPECT_EQ(ledger, PredictLedger(net, bfv::HEParams::PresetA()));

  uint64_t up = 0, down = 0;
  for (const auto& f : run.up_frames) up += f.size();
  for (const auto& f : run.down_frames) down += f.size();
  EXPECT_EQ(ledger.up_bytes, up);
  EXPECT_EQ(ledger.down_bytes, down);
  EXPECT_EQ(ledger.control_bytes + ledger.offline_bytes + ledger.online_bytes(), ledger.total_bytes());

  const nn::CommReport report = nn::NetworkCommReport(net, bfv::HEParams::PresetA());
  EXPECT_EQ(ledger.online_bytes(), report.total_bytes());
  ASSERT_EQ(ledger.layers.size(), report.layers.size());
  for (std::size_t i = 0; i < report.layers.size(); ++i) {
    EXPECT_EQ(ledger.layers[i].up_bytes, report.layers[i].upload_bytes) << report.layers[i].name;
    EXPECT_EQ(ledger.layers[i].down_bytes, report.layers[i].download_bytes) << report.layers[i].name;
  }
  const auto* ctx = PresetA().get();
  EXPECT_EQ(ledger.offline_bytes, kFrameHeaderBytes + bfv::PublicKeyBytes(*ctx) + bfv::GaloisKeysBytes(*ctx));
}

TEST(SessionTest, OneConvLedgerArithmetic) {
  // keys + one input frame + one output frame + control frames.
  const NetworkSpec net = OneConv();
  const Ledger predicted = PredictLedger(net, bfv::HEParams::PresetA());
  const uint64_t frame = kFrameHeaderBytes + kBatchPrefixBytes + 41 + 262144;
  EXPECT_EQ(predicted.online_bytes(), 2 * frame);
  EXPECT_EQ(predicted.layers[0].up_bytes, frame);
  EXPECT_EQ(predicted.layers[0].down_bytes, frame);
  const Loopback run = RunPipe(net, Image({8, 8, 2}, 4), PresetA());
  ASSERT_TRUE(run.client.ok()) << run.client.session.error;
  EXPECT_EQ(run.client.session.ledger, predicted);
  EXPECT_EQ(Kinds(run.client.session),
            (std::vector<MessageKind>{MessageKind::kHello, MessageKind::kParams, MessageKind::kKeys,
                                      MessageKind::kLayerInput, MessageKind::kLayerOutput,
                                      MessageKind::kResult}));
}

TEST(SessionTest, ServerFramesAndClientUploadsHoldNoSecretKey) {
  const NetworkSpec net = OneConv();
  const Loopback run = RunPipe(net, Image({8, 8, 2}, 6), PresetB(), false, 77);
  ASSERT_TRUE(run.client.ok());
  // Reconstruct the client's secret key from its seed.
  const auto ctx = PresetB();
  const auto keys = bfv::GenerateKeys(*ctx, ring::DeriveSeed(ring::SeedFromInteger(77), "keys"));
  const auto sk = bfv::SerializeSecretKey(*ctx, keys.secret);
  // Probe with 64-byte windows of the key body from every residue.
  std::vector<std::vector<uint8_t>> probes;
  for (std::size_t off = 40; off + 64 <= sk.size(); off += sk.size() / 16) {
    probes.emplace_back(sk.begin() + off, sk.begin() + off + 64);
  }
  ASSERT_GE(probes.size(), 8u);
  auto frames = run.up_frames;
  frames.insert(frames.end(), run.down_frames.begin(), run.down_frames.end());
  for (const auto& f : frames) {
    for (const auto& p : probes) {
      EXPECT_EQ(std::search(f.begin(), f.end(), p.begin(), p.end()), f.end());
    }
  }
  // The scan does find the key where it is.
  EXPECT_NE(std::search(sk.begin(), sk.end(), probes[0].begin(), probes[0].end()), sk.end());
}

TEST(SessionTest, ReencryptionRefreshesNoise) {
  const NetworkSpec net = nn::LoadNetwork(kNetDir + "toycnn.json");
  const QTensor image = nn::ReadTensorFile(kNetDir + "toycnn_image.q");
  const Loopback run = RunPipe(net, image, PresetA(), false, 42, true);
  ASSERT_TRUE(run.client.ok()) << run.client.session.error;
  testing::BfvParty fresh(bfv::HEParams::PresetA(), 9);
  std::mt19937_64 rng(2);
  const int fresh_budget = fresh.Budget(fresh.Encrypt(fresh.RandomSlots(rng)));
  ASSERT_EQ(run.client.sent_budgets.size(), 3u);  // one per stage
  for (int b : run.client.sent_budgets) EXPECT_LE(std::abs(b - fresh_budget), 1);
  ASSERT_FALSE(run.client.returned_budgets.empty());
  for (int b : run.client.returned_budgets) {
    EXPECT_GT(b, 0);
    EXPECT_LT(b, fresh_budget);
  }
}

TEST(SessionTest, PipeAndTcpTranscriptsAgree) {
  const NetworkSpec net = OneConv();
  const QTensor image = Image({8, 8, 2}, 8);
  const Loopback pipe = RunPipe(net, image, PresetB(), false, 5);

  TcpListener listener("127.0.0.1", 0);
  auto accepted = std::async(std::launch::async, [&] { return listener.Accept(std::chrono::seconds(10)); });
  auto client_end = TcpConnect("127.0.0.1", listener.port());
  auto server_end = accepted.get();
  ASSERT_NE(server_end, nullptr);
  const Loopback tcp = RunOver(*client_end, *server_end, net, image, PresetB(), false, 5);
  ASSERT_TRUE(pipe.client.ok() && tcp.client.ok()) << tcp.client.session.error;
  EXPECT_EQ(pipe.client.session.transcript, tcp.client.session.transcript);
  EXPECT_EQ(pipe.up_frames, tcp.up_frames);
  EXPECT_EQ(pipe.down_frames, tcp.down_frames);
  EXPECT_EQ(pipe.client.scores, tcp.client.scores);

  // Replay from a dumped transcript.
  const auto path = std::filesystem::temp_directory_path() / "choco_transcript.json";
  pipe.client.session.transcript.Save(path.string());
  EXPECT_EQ(Transcript::Load(path.string()), tcp.server.session.transcript);
  std::filesystem::remove(path);

  // A different seed gives a different transcript but the same scores.
  const Loopback other = RunPipe(net, image, PresetB(), false, 6);
  EXPECT_NE(other.client.session.transcript, pipe.client.session.transcript);
  EXPECT_EQ(other.client.scores, pipe.client.scores);
}

TEST(SessionTest, DroppedResidueRepliesStayExact) {
  const NetworkSpec net = nn::LoadNetwork(kNetDir + "toycnn.json");
  const QTensor image = nn::ReadTensorFile(kNetDir + "toycnn_image.q");
  const Loopback run = RunPipe(net, image, PresetA(), true);
  ASSERT_TRUE(run.client.ok()) << run.client.session.error;
  EXPECT_EQ(run.client.scores, nn::ReferenceInference(net, image));
  EXPECT_EQ(run.client.session.ledger, PredictLedger(net, bfv::HEParams::PresetA(), {true}));
  EXPECT_LT(run.client.session.ledger.online_bytes(),
            PredictLedger(net, bfv::HEParams::PresetA()).online_bytes());
}

TEST(SessionTest, UnknownNetworkGetsError) {
  const NetworkSpec served = OneConv();
  NetworkSpec asked{"other", {nn::Conv("conv1", {8, 8, 2}, 3, 8, 1, 1)}};
  ModelStore store;
  store.Add(served);
  auto [a, b] = MakePipe();
  auto server = std::async(std::launch::async, [&] { return RunServer(*b, store, {PresetB()}); });
  const ClientResult client = RunClient(asked, Image({8, 8, 2}, 1), *a, {PresetB(), {}});
  const ServerResult sr = server.get();
  EXPECT_FALSE(client.ok());
  EXPECT_EQ(client.session.error, "peer: unknown network");
  EXPECT_EQ(sr.session.error, "unknown network");
  EXPECT_EQ(Kinds(client.session), (std::vector<MessageKind>{MessageKind::kHello, MessageKind::kError}));
  // The partial ledger still adds up.
  EXPECT_EQ(client.session.ledger.up_bytes, sr.session.ledger.up_bytes);
  EXPECT_EQ(client.session.ledger.down_bytes, sr.session.ledger.down_bytes);
  EXPECT_EQ(client.session.ledger.control_bytes, client.session.ledger.total_bytes());
}

TEST(SessionTest, ParamsMismatchGetsError) {
  const NetworkSpec net = OneConv();
  ModelStore store;
  store.Add(net);
  auto [a, b] = MakePipe();
  auto server = std::async(std::launch::async, [&] { return RunServer(*b, store, {PresetA()}); });
  const ClientResult client = RunClient(net, Image({8, 8, 2}, 1), *a, {PresetB(), {}});
  EXPECT_EQ(server.get().session.error, "params mismatch");
  EXPECT_EQ(client.session.error, "peer: params mismatch");
  EXPECT_TRUE(client.scores.data.empty());
}

TEST(SessionTest, MalformedFrameGetsErrorNotCrash) {
  ModelStore store;
  store.Add(OneConv());
  for (const std::vector<uint8_t>& junk :
       {std::vector<uint8_t>{0x42}, std::vector<uint8_t>(20, 0xff),
        SerializeMessage(Message{MessageKind::kHello, {1, 2, 3}}),
        SerializeMessage(EncodeResult({}))}) {
    auto [a, b] = MakePipe();
    auto server = std::async(std::launch::async, [&] { return RunServer(*b, store, {PresetB()}); });
    a->Send(junk);
    if (junk.size() < kFrameHeaderBytes) a->Close();
    const ServerResult sr = server.get();
    EXPECT_FALSE(sr.ok());
    EXPECT_FALSE(sr.session.error.empty());
    if (junk.size() >= kFrameHeaderBytes) {
      const Message reply = DeserializeMessage(a->Receive());
      EXPECT_EQ(reply.kind, MessageKind::kError);
      EXPECT_EQ(DecodeError(reply), sr.session.error);
    }
  }
}

TEST(SessionTest, TransportFailureKeepsPartialLedger) {
  const NetworkSpec net = OneConv();
  auto [a, b] = MakePipe();
  // A "server" that reads HELLO and hangs up.
  std::thread peer([&, &b = b] {
    b->Receive();
    b->Close();
  });
  const ClientResult client = RunClient(net, Image({8, 8, 2}, 1), *a, {PresetB(), {}});
  peer.join();
  EXPECT_FALSE(client.ok());
  EXPECT_EQ(client.session.error, "connection closed");
  EXPECT_EQ(client.session.transcript.entries.size(), 1u);
  EXPECT_GT(client.session.ledger.up_bytes, 0u);
  EXPECT_EQ(client.session.ledger.down_bytes, 0u);
}

TEST(SessionTest, LenetSmMatchesReference) {
  const NetworkSpec net = nn::LoadNetwork(kNetDir + "lenetsm.json");
  const QTensor image = nn::ReadTensorFile(kNetDir + "lenetsm_image.q");
  const Loopback run = RunPipe(net, image, PresetA());
  ASSERT_TRUE(run.client.ok()) << run.client.session.error;
  EXPECT_EQ(run.client.scores, nn::ReferenceInference(net, image));
  EXPECT_EQ(run.client.session.ledger, PredictLedger(net, bfv::HEParams::PresetA()));
  EXPECT_EQ(run.client.session.ledger.online_bytes(), 1835421u);
}

// --- report ------------------------------------------------------------------

TEST(ReportTest, EmptyLedgerIsZero) {
  const Ledger empty;
  EXPECT_EQ(empty.total_bytes(), 0u);
  EXPECT_EQ(empty.online_bytes(), 0u);
  EXPECT_NE(LedgerReport(empty, "none").find("total   0"), std::string::npos);
}

TEST(ReportTest, BaselinesAndLink) {
  const auto baselines = ParseBaselinesCsv("system,network,mb\n# comment\nOther, toy, 10\nOther,x,1\n");
  ASSERT_EQ(baselines.size(), 2u);
  EXPECT_EQ(baselines[0].system, "Other");
  EXPECT_DOUBLE_EQ(baselines[0].bytes, 10e6);
  EXPECT_THROW(ParseBaselinesCsv("a,b\n"), FormatError);
  EXPECT_THROW(ParseBaselinesCsv("system,network,mb\nA,b,zz\n"), FormatError);

  const LinkModel bt = LinkModel::Parse("bluetooth");
  EXPECT_DOUBLE_EQ(bt.Seconds(2'750'000), 1.0);
  EXPECT_DOUBLE_EQ(bt.Joules(2'750'000), 0.01);
  EXPECT_DOUBLE_EQ(LinkModel::Parse("custom:8e6,2").Joules(1'000'000), 2.0);
  EXPECT_THROW(LinkModel::Parse("wifi"), InvalidArgument);
  EXPECT_THROW(LinkModel::Parse("custom:0,1"), InvalidArgument);

  Ledger l;
  l.up_bytes = 4'000'000;
  l.down_bytes = 1'000'000;
  l.control_bytes = 5'000'000;
  const std::string text = LedgerReport(l, "toy", {baselines, bt});
  EXPECT_NE(text.find("vs Other: 10.000 MB, ratio 2.000x"), std::string::npos) << text;
  EXPECT_EQ(text.find("1.000 MB"), std::string::npos);  // other network's baseline
  EXPECT_NE(text.find("analytic"), std::string::npos);
}

}  // namespace
}  // namespace choco::protocol
