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

// choco: command-line front end.
//
// Exit codes: 0 success, 1 mismatch or infeasible, 2 usage.

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "choco/accel/dse.h"
#include "choco/accel/model.h"
#include "choco/bfv/ciphertext.h"
#include "choco/bfv/context.h"
#include "choco/bfv/decryptor.h"
#include "choco/bfv/encryptor.h"
#include "choco/bfv/keys.h"
#include "choco/common/error.h"
#include "choco/nn/cost.h"
#include "choco/nn/linear.h"
#include "choco/nn/network.h"
#include "choco/nn/reference.h"
#include "choco/nn/tensor.h"
#include "choco/packing/noise_probe.h"
#include "choco/protocol/party.h"
#include "choco/protocol/report.h"
#include "choco/protocol/session.h"
#include "choco/protocol/transport.h"

namespace fs = std::filesystem;
using namespace choco;

namespace {

// Bad input from the user; exits 2.
class UsageError : public Error {
 public:
  using Error::Error;
};


std::atomic<bool> g_stop{false};

extern "C" void OnSignal(int) { g_stop = true; }

bfv::HEParams ParseParams(const std::string& spec) {
  if (spec == "A") return bfv::HEParams::PresetA();
  if (spec == "B") return bfv::HEParams::PresetB();
  // custom:<N>:<bits>/<bits>/...:<t bits>
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 4 || parts[0] != "custom") {
    throw UsageError("--params must be A, B or custom:<N>:<q bits/...>:<t bits>");
  }
  try {
    std::vector<int> bits;
    std::stringstream bs(parts[2]);
    for (std::string b; std::getline(bs, b, '/');) bits.push_back(std::stoi(b));
    return bfv::HEParams::FromBits(std::stoul(parts[1]), bits, std::stoi(parts[3]));
  } catch (const std::logic_error&) {
    throw UsageError("bad custom params: " + spec);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("bad params: ") + e.what());
  }
}

std::vector<uint8_t> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

void WriteFile(const std::string& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

// A JSON array of integers, or whitespace-separated integers.
std::vector<int64_t> ReadVector(const std::string& path) {
  const auto bytes = ReadFile(path);
  const std::string text(bytes.begin(), bytes.end());
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      return nlohmann::json::parse(text).get<std::vector<int64_t>>();
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(path + ": " + e.what());
    }
  }
  std::vector<int64_t> out;
  std::istringstream in(text);
  for (std::string tok; in >> tok;) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw UsageError(path + ": not an integer: " + tok);
    }
  }
  return out;
}

struct KeyDir {
  std::string dir;
  std::string params() const { return dir + "/params.bin"; }
  std::string secret() const { return dir + "/secret.key"; }
  std::string pub() const { return dir + "/public.key"; }
  std::string galois() const { return dir + "/galois.key"; }

  std::shared_ptr<const bfv::Context> Context() const {
    try {
      return bfv::Context::Create(bfv::HEParams::Deserialize(ReadFile(params())));
    } catch (const FormatError& e) {
      throw UsageError(params() + ": " + e.what());
    }
  }
};

ring::Seed Seed(uint64_t seed, const char* label) {
  return ring::DeriveSeed(ring::SeedFromInteger(seed), label);
}

// --- keygen / encrypt / decrypt ----------------------------------------------

int Keygen(const std::string& params_spec, uint64_t seed, const std::string& out) {
  const auto params = ParseParams(params_spec);
  const auto ctx = bfv::Context::Create(params);
  fs::create_directories(out);
  const KeyDir dir{out};
  const auto keys = bfv::GenerateKeys(*ctx, ring::SeedFromInteger(seed));
  WriteFile(dir.params(), params.Serialize());
  const auto sk = bfv::SerializeSecretKey(*ctx, keys.secret);
  const auto pk = bfv::SerializePublicKey(*ctx, keys.pub);
  const auto gk = bfv::SerializeGaloisKeys(*ctx, keys.galois);
  WriteFile(dir.secret(), sk);
  WriteFile(dir.pub(), pk);
  WriteFile(dir.galois(), gk);
  std::cout << "params  N=" << params.n() << " k=" << params.k() << " t=" << params.t() << "\n"
            << "secret  " << sk.size() << " B\npublic  " << pk.size() << " B\ngalois  "
            << gk.size() << " B (" << keys.galois.keys.size() << " keys)\n";
  return 0;
}

int Encrypt(const std::string& keys, const std::string& in, const std::string& out, uint64_t seed) {
  const KeyDir dir{keys};
  const auto ctx = dir.Context();
  const auto pk = bfv::DeserializePublicKey(ReadFile(dir.pub()), *ctx);
  const auto values = ReadVector(in);
  if (values.size() > ctx->n()) throw UsageError("more than N values");
  std::vector<uint64_t> slots;
  for (int64_t v : values) slots.push_back(nn::ToResidue(v, ctx->params().t()));
  bfv::Encryptor encryptor(ctx, pk, Seed(seed, "encrypt"));
  const auto bytes = bfv::SerializeCiphertext(encryptor.Encrypt({slots, bfv::Encoding::kSlot}));
  WriteFile(out, bytes);
  std::cout << "ciphertext payload " << bytes.size() - bfv::kCiphertextHeaderBytes
            << " B + header " << bfv::kCiphertextHeaderBytes << " B = " << bytes.size() << " B\n";
  return 0;
}

int Decrypt(const std::string& keys, const std::string& in, const std::string& out,
            std::size_t count, bool is_signed) {
  const KeyDir dir{keys};
  const auto ctx = dir.Context();
  const auto sk = bfv::DeserializeSecretKey(ReadFile(dir.secret()), *ctx);
  const auto ct = bfv::DeserializeCiphertext(ReadFile(in), *ctx);
  const bfv::Decryptor decryptor(ctx, sk);
  const auto noise = decryptor.NoiseBudget(ct);
  const auto values = decryptor.Decrypt(ct).values;
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < std::min(count, values.size()); ++i) {
    if (is_signed) {
      arr.push_back(nn::FromResidue(values[i], ctx->params().t()));
    } else {
      arr.push_back(values[i]);
    }
  }
  WriteText(out, arr.dump() + "\n");
  std::cerr << "noise budget " << noise.budget_bits << " bits\n";
  return noise.exhausted ? 1 : 0;
}

// --- noise report ------------------------------------------------------------

int NoiseReport(const std::string& params_spec, const std::string& scenario, uint64_t seed) {
  const auto params = ParseParams(params_spec);
  const auto r = packing::MeasureRotationNoise(params, seed);
  const int t_bits = static_cast<int>(std::bit_width(params.t()));
  std::cout << "N      t_bits";
  if (scenario == "all" || scenario == "fresh") std::cout << "  initial";
  if (scenario == "all" || scenario == "rotate") std::cout << "  after_rotate";
  if (scenario == "all" || scenario == "permute") std::cout << "  after_permute";
  std::cout << "\n" << std::left << std::setw(7) << params.n() << std::setw(6) << t_bits;
  if (scenario == "all" || scenario == "fresh") std::cout << std::right << std::setw(9) << r.fresh;
  if (scenario == "all" || scenario == "rotate") std::cout << std::right << std::setw(14) << r.rotate;
  if (scenario == "all" || scenario == "permute") std::cout << std::right << std::setw(15) << r.permute;
  std::cout << "\n";
  return 0;
}

// --- inference ---------------------------------------------------------------

std::pair<std::string, uint16_t> ParseEndpoint(const std::string& endpoint) {
  const auto colon = endpoint.rfind(':');
  if (colon == std::string::npos) throw UsageError("--endpoint must be host:port");
  try {
    const int port = std::stoi(endpoint.substr(colon + 1));
    if (port < 0 || port > 65535) throw std::out_of_range("port");
    return {endpoint.substr(0, colon), static_cast<uint16_t>(port)};
  } catch (const std::logic_error&) {
    throw UsageError("bad port in " + endpoint);
  }
}

nn::NetworkSpec LoadNet(const std::string& path, bool weights) {
  try {
    return nn::LoadNetwork(path, weights);
  } catch (const Error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string Scores(const nn::IntTensor& s) {
  std::ostringstream out;
  out << "scores";
  for (int64_t v : s.data) out << " " << v;
  if (!s.data.empty()) {
    out << "\nclass " << std::distance(s.data.begin(), std::max_element(s.data.begin(), s.data.end()));
  }
  return out.str();
}

struct InferOptions {
  std::string role = "loopback";
  std::vector<std::string> nets;
  std::string image;
  std::string endpoint = "127.0.0.1:7878";
  std::string params = "A";
  uint64_t seed = 1;
  bool drop_residue = false;
  std::string transcript;
  std::string link;
  std::string baselines;
  int max_sessions = 0;
  double timeout_s = 600;
};

protocol::ReportOptions ReportOptionsFrom(const std::string& link, const std::string& baselines) {
  protocol::ReportOptions o;
  try {
    if (!link.empty()) o.link = protocol::LinkModel::Parse(link);
    if (!baselines.empty()) o.baselines = protocol::LoadBaselinesCsv(baselines);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return o;
}

// Prints the client's view; returns the exit code.
int FinishClient(const protocol::ClientResult& r, const nn::NetworkSpec& net,
                 const nn::QTensor& image, const bfv::HEParams& params, const InferOptions& o,
                 bool check_reference) {
  if (!o.transcript.empty()) r.session.transcript.Save(o.transcript);
  std::cout << protocol::LedgerReport(r.session.ledger, net.name, ReportOptionsFrom(o.link, o.baselines));
  if (!r.ok()) {
    std::cout << "session failed: " << r.session.error << "\n";
    return 1;
  }
  std::cout << Scores(r.scores) << "\n";
  int code = 0;
  const auto predicted = protocol::PredictLedger(net, params, {o.drop_residue});
  if (predicted == r.session.ledger) {
    std::cout << "ledger matches prediction (" << predicted.total_bytes() << " B)\n";
  } else {
    std::cout << "ledger differs from prediction (" << predicted.total_bytes() << " B predicted)\n";
    code = 1;
  }
  if (check_reference) {
    const bool match = nn::ReferenceInference(net, image) == r.scores;
    std::cout << (match ? "MATCH" : "MISMATCH") << " local reference\n";
    if (!match) code = 1;
  }
  return code;
}

int Infer(const InferOptions& o) {
  if (o.nets.empty()) throw UsageError("--net is required");
  const auto params = ParseParams(o.params);
  const auto ctx = bfv::Context::Create(params);
  const auto timeout = std::chrono::milliseconds(static_cast<int64_t>(o.timeout_s * 1000));

  if (o.role == "loopback" || o.role == "client") {
    if (o.image.empty()) throw UsageError("--image is required");
    const bool loopback = o.role == "loopback";
    const auto net = LoadNet(o.nets.front(), loopback);
    nn::QTensor image;
    try {
      image = nn::ReadTensorFile(o.image);
    } catch (const Error& e) {
      throw UsageError(o.image + ": " + e.what());
    }
    protocol::ClientConfig cc{ctx, ring::SeedFromInteger(o.seed), false};
    if (loopback) {
      protocol::ModelStore store;
      store.Add(net);
      auto [client_end, server_end] = protocol::MakePipe();
      client_end->set_timeout(timeout);
      server_end->set_timeout(timeout);
      protocol::ServerResult sr;
      std::thread server([&, &server_end = server_end] {
        sr = protocol::RunServer(*server_end, store, {ctx, o.drop_residue});
        server_end->Close();
      });
      const auto cr = protocol::RunClient(net, image, *client_end, cc);
      server.join();
      std::cout << "server decrypt calls " << sr.ops.count(bfv::Op::kDecrypt) << "\n";
      return FinishClient(cr, net, image, params, o, true);
    }
    const auto [host, port] = ParseEndpoint(o.endpoint);
    auto transport = protocol::TcpConnect(host, port, timeout);
    transport->set_timeout(timeout);
    const auto cr = protocol::RunClient(net, image, *transport, cc);
    // With weights on hand the client can check itself.
    const bool have_weights = [&] {
      try {
        return LoadNet(o.nets.front(), true).has_weights();
      } catch (const Error&) {
        return false;
      }
    }();
    return FinishClient(cr, have_weights ? LoadNet(o.nets.front(), true) : net, image, params, o,
                        have_weights);
  }

  if (o.role != "server") throw UsageError("--role must be client, server or loopback");
  protocol::ModelStore store;
  for (const auto& path : o.nets) store.Add(LoadNet(path, true));
  const auto [host, port] = ParseEndpoint(o.endpoint);
  protocol::TcpListener listener(host, port);
  struct sigaction sa {};
  sa.sa_handler = OnSignal;
  sigaction(SIGINT, &sa, nullptr);
  sigaction(SIGTERM, &sa, nullptr);
  std::cout << "listening on " << host << ":" << listener.port() << std::endl;

  std::mutex print_mu;
  std::vector<std::thread> sessions;
  int accepted = 0;
  // Sessions share only the read-only model store.
  while (!g_stop && (o.max_sessions == 0 || accepted < o.max_sessions)) {
    auto conn = listener.Accept(std::chrono::milliseconds(200));
    if (!conn) continue;
    const int id = ++accepted;
    sessions.emplace_back([&, id, conn = std::shared_ptr<protocol::Transport>(std::move(conn))] {
      conn->set_timeout(timeout);
      const auto r = protocol::RunServer(*conn, store, {ctx, o.drop_residue});
      conn->Close();
      std::lock_guard lock(print_mu);
      std::cout << "session " << id << " " << (r.ok() ? "ok" : "failed: " + r.session.error)
                << " network " << r.session.network << " bytes " << r.session.ledger.total_bytes()
                << " decrypt calls " << r.ops.count(bfv::Op::kDecrypt) << std::endl;
    });
  }
  listener.Close();
  for (auto& t : sessions) t.join();
  std::cout << "shutdown after " << accepted << " sessions" << std::endl;
  return 0;
}

// --- comm report -------------------------------------------------------------

int CommReport(const std::string& net_path, const std::string& params_spec, bool csv,
               const std::string& sort, const std::string& link, const std::string& baselines,
               bool drop, const std::string& out_path) {
  const auto params = ParseParams(params_spec);
  const auto net = LoadNet(net_path, false);
  nn::CommReport report;
  try {
    report = nn::NetworkCommReport(net, params, {drop});
  } catch (const InvalidArgument& e) {
    std::cerr << "choco: " << e.what() << "\n";
    return 1;
  }
  auto rows = report.layers;
  std::erase_if(rows, [](const nn::LayerCost& l) { return l.macs == 0 && l.bytes() == 0; });
  if (sort == "macs-per-mb") {
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.macs_per_mb() > b.macs_per_mb();
    });
  } else if (sort != "none") {
    throw UsageError("--sort must be none or macs-per-mb");
  }
  const auto session = protocol::PredictLedger(net, params, {drop});
  const auto options = ReportOptionsFrom(link, baselines);

  std::ostringstream text;
  if (csv) {
    text << "layer,kind,macs,upload_bytes,download_bytes,bytes,macs_per_mb\n" << std::setprecision(9);
    for (const auto& l : rows) {
      text << l.name << "," << (l.kind == nn::LayerKind::kConv2d ? "conv" : "fc") << "," << l.macs
           << "," << l.upload_bytes << "," << l.download_bytes << "," << l.bytes() << ","
           << l.macs_per_mb() << "\n";
    }
  } else {
    text << "network " << net.name << " params N=" << params.n() << " k=" << params.k() << "\n";
    text << std::left << std::setw(16) << "layer" << std::right << std::setw(14) << "macs"
         << std::setw(14) << "bytes" << std::setw(14) << "macs/MB" << "\n";
    for (const auto& l : rows) {
      text << std::left << std::setw(16) << l.name << std::right << std::setw(14) << l.macs
           << std::setw(14) << l.bytes() << std::setw(14) << std::fixed << std::setprecision(1)
           << l.macs_per_mb() << "\n";
    }
    text << std::setprecision(2) << "total MACs " << report.macs << " (" << report.macs / 1e6
         << " M)\n";
    text << "online bytes " << report.total_bytes() << " (" << report.total_bytes() / 1e6
         << " MB; up " << report.upload_bytes << ", down " << report.download_bytes << ")\n";
    text << "session bytes " << session.total_bytes() << " (online + keys " << session.offline_bytes
         << " + control " << session.control_bytes << ")\n";
    for (const auto& b : options.baselines) {
      if (b.network != net.name) continue;
      text << std::setprecision(3) << "vs " << b.system << ": " << b.bytes / 1e6 << " MB, ratio "
           << b.bytes / static_cast<double>(session.total_bytes()) << "x (baseline / ours)\n";
    }
    if (options.link) {
      const auto& lm = *options.link;
      text << std::setprecision(4) << "link " << lm.name << " (analytic): online "
           << lm.Seconds(report.total_bytes()) << " s / " << lm.Joules(report.total_bytes()) * 1e3
           << " mJ, session " << lm.Seconds(session.total_bytes()) << " s / "
           << lm.Joules(session.total_bytes()) * 1e3 << " mJ\n";
    }
  }
  if (out_path.empty()) {
    std::cout << text.str();
  } else {
    WriteText(out_path, text.str());
  }
  return 0;
}

// --- design space ------------------------------------------------------------

int Dse(const std::string& grid_path, const std::string& costs_path, double cap, double slack,
        const std::string& params_spec, const std::string& out, unsigned threads) {
  const auto params = ParseParams(params_spec);
  accel::GridSpec grid;
  accel::UnitCostTable costs;
  try {
    grid = grid_path.empty() ? accel::GridSpec{} : accel::GridSpec::Load(grid_path);
    costs = accel::UnitCostTable::Load(costs_path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto points = accel::Sweep(grid, params.n(), params.k(), costs, threads);
  std::vector<accel::CostReport> reports;
  for (const auto& p : points) reports.push_back(p.report);
  const auto frontier = accel::ParetoFrontier(reports);
  std::cout << "configurations " << points.size() << "\nfrontier " << frontier.size() << "\n";
  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream sweep(out + "/sweep.csv"), front(out + "/frontier.csv");
    accel::WriteSweepCsv(sweep, points);
    accel::WriteSweepCsv(front, points, frontier);
  }
  std::size_t chosen;
  try {
    chosen = accel::Select(reports, cap, slack);
  } catch (const accel::Infeasible& e) {
    std::cerr << "choco: " << e.what() << " (" << cap << " W)\n";
    return 1;
  }
  const auto& p = points[chosen];
  std::cout << "selected under " << cap * 1e3 << " mW, slack " << slack << "\n"
            << accel::DescribeSelection(p);
  if (!out.empty()) {
    nlohmann::json j = {{"key", p.config.Key()},
                        {"pes", p.config.pes},
                        {"memory_bytes", p.config.memory_bytes},
                        {"rns_layers", p.config.rns_layers},
                        {"latency_s", p.report.latency_s},
                        {"energy_j", p.report.energy_j},
                        {"area_mm2", p.report.area_mm2},
                        {"power_w", p.report.power_w},
                        {"stalled", p.report.stalled},
                        {"rng_peak_bps", p.report.rng_peak_bps},
                        {"rng_average_bps", p.report.rng_average_bps},
                        {"configurations", points.size()},
                        {"frontier", frontier.size()}};
    WriteText(out + "/selected.json", j.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CHOCO client-aided HE toolkit"};
  app.require_subcommand(1);
  uint64_t seed = 1;
  std::string params = "A";

  auto* keygen = app.add_subcommand("keygen", "generate a key set");
  std::string key_out;
  keygen->add_option("--params", params, "A, B or custom:<N>:<q bits/...>:<t bits>");
  keygen->add_option("--seed", seed);
  keygen->add_option("--out", key_out, "key directory")->required();

  auto* encrypt = app.add_subcommand("encrypt", "encrypt a vector of integers");
  std::string keys_dir, in_path, out_path;
  encrypt->add_option("--keys", keys_dir)->required();
  encrypt->add_option("--in", in_path, "JSON array or whitespace-separated integers")->required();
  encrypt->add_option("--out", out_path)->required();
  encrypt->add_option("--seed", seed);

  auto* decrypt = app.add_subcommand("decrypt", "decrypt a ciphertext");
  std::size_t count = std::numeric_limits<std::size_t>::max();
  bool is_signed = false;
  decrypt->add_option("--keys", keys_dir)->required();
  decrypt->add_option("--in", in_path)->required();
  decrypt->add_option("--out", out_path)->required();
  decrypt->add_option("--count", count, "number of slots to write");
  decrypt->add_flag("--signed", is_signed, "centered values");

  auto* noise = app.add_subcommand("noise-report", "noise budget after rotation and permutation");
  std::string scenario = "all";
  noise->add_option("--params", params);
  noise->add_option("--scenario", scenario)->check(CLI::IsMember({"fresh", "rotate", "permute", "all"}));
  noise->add_option("--seed", seed);

  auto* infer = app.add_subcommand("infer", "client-aided inference");
  InferOptions io;
  infer->add_option("--role", io.role)->check(CLI::IsMember({"client", "server", "loopback"}));
  infer->add_option("--net", io.nets, "network spec (repeatable for a server)")->required();
  infer->add_option("--image", io.image);
  infer->add_option("--endpoint", io.endpoint, "host:port");
  infer->add_option("--params", io.params);
  infer->add_option("--seed", io.seed);
  infer->add_flag("--drop-residue", io.drop_residue, "server: reply with one residue fewer");
  infer->add_option("--transcript", io.transcript, "write the session transcript here");
  infer->add_option("--link", io.link, "bluetooth or custom:<bps>,<watts> (analytic)");
  infer->add_option("--baselines", io.baselines, "CSV system,network,mb");
  infer->add_option("--max-sessions", io.max_sessions, "server: exit after this many");
  infer->add_option("--timeout", io.timeout_s, "seconds per receive");

  auto* comm = app.add_subcommand("comm-report", "per-layer MACs and communication");
  std::string net_path, sort = "none", link, baselines;
  bool csv = false, drop = false;
  comm->add_option("--net", net_path)->required();
  comm->add_option("--params", params);
  comm->add_flag("--csv", csv);
  comm->add_option("--sort", sort, "none or macs-per-mb");
  comm->add_option("--link", link, "bluetooth or custom:<bps>,<watts> (analytic)");
  comm->add_option("--baselines", baselines, "CSV system,network,mb");
  comm->add_flag("--drop-residue", drop);
  comm->add_option("--out", out_path);

  auto* dse = app.add_subcommand("dse", "accelerator design-space sweep");
  std::string grid_path, costs_path;
  double cap = 0.2, slack = 0.01;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  dse->add_option("--grid", grid_path);
  dse->add_option("--costs", costs_path)->required();
  dse->add_option("--power-cap", cap, "watts");
  dse->add_option("--slack", slack, "runtime slack fraction");
  dse->add_option("--params", params);
  dse->add_option("--out", out_path, "directory for sweep.csv, frontier.csv, selected.json");
  dse->add_option("--threads", threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*keygen) return Keygen(params, seed, key_out);
    if (*encrypt) return Encrypt(keys_dir, in_path, out_path, seed);
    if (*decrypt) return Decrypt(keys_dir, in_path, out_path, count, is_signed);
    if (*noise) return NoiseReport(params, scenario, seed);
    if (*infer) return Infer(io);
    if (*comm) return CommReport(net_path, params, csv, sort, link, baselines, drop, out_path);
    if (*dse) return Dse(grid_path, costs_path, cap, slack, params, out_path, threads);
  } catch (const UsageError& e) {
    std::cerr << "choco: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "choco: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "choco: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "choco: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
