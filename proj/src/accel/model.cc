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

#include "choco/accel/model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "choco/common/error.h"

namespace choco::accel {
namespace {

constexpr std::array<const char*, kBlockCount> kNames = {
    "rng", "ntt", "dyadic", "intt", "poly_add", "mod_switch", "encode"};

bool PerResidue(Block b) {
  return b == Block::kNtt || b == Block::kDyadic || b == Block::kIntt || b == Block::kPolyAdd;
}

bool Streaming(Block b) { return b != Block::kNtt && b != Block::kIntt; }

// Accumulates stage times and energy for one operation.
class Timeline {
 public:
  Timeline(const AccelConfig& config, std::size_t n, std::size_t k, const UnitCostTable& costs)
      : config_(config), n_(n), k_(k), costs_(costs) {}

  // Cycles for `work` elements spread over `parts` residues, fill excluded.
  double Cycles(Block b, double work, std::size_t parts) {
    const BlockCost& c = costs_.block(b);
    double rate = config_.pe(b) * c.ops_per_cycle;
    if (Streaming(b)) {
      // A streaming stage holds 2 * depth words per PE in flight; a
      // smaller scratchpad throttles it.
      const double needed = 2.0 * config_.pe(b) * costs_.word_bytes * costs_.pipeline_depth;
      if (needed > config_.memory(b)) {
        rate *= config_.memory(b) / needed;
        stalled_ = true;
      }
    }
    dynamic_j_ += work * (c.energy_per_op_j + c.bytes_per_op * costs_.memory_energy_per_byte_j);
    if (PerResidue(b)) {
      const std::size_t layers = static_cast<std::size_t>(config_.rns_layers);
      const double passes = static_cast<double>((parts + layers - 1) / layers);
      return passes * (work / static_cast<double>(parts)) / rate;
    }
    return work / rate;
  }

  double Stage(Block b, double work, std::size_t parts) { return Cycles(b, work, parts) + Fill(); }
  double Fill() const { return costs_.pipeline_depth; }
  double Rate(Block b) const { return config_.pe(b) * costs_.block(b).ops_per_cycle; }

  CostReport Finish(double cycles, double random_bytes, double rng_peak_per_cycle) const {
    CostReport r;
    r.cycles = static_cast<uint64_t>(std::ceil(cycles));
    r.latency_s = cycles / config_.clock_hz;
    r.stalled = stalled_;
    const double layers = config_.rns_layers;
    const double memory =
        layers * (2.0 * static_cast<double>(n_) * costs_.word_bytes +
                  config_.memory(Block::kRng) + config_.memory(Block::kDyadic) +
                  config_.memory(Block::kPolyAdd) + config_.memory(Block::kModSwitch) +
                  config_.memory(Block::kEncode));
    r.leakage_w = costs_.base_leakage_w + memory * costs_.memory_leakage_w_per_byte;
    r.area_mm2 = costs_.base_area_mm2 + memory * costs_.memory_area_mm2_per_byte;
    for (std::size_t i = 0; i < kBlockCount; ++i) {
      const double replicas = PerResidue(static_cast<Block>(i)) ? layers : 1.0;
      r.leakage_w += replicas * config_.pes[i] * costs_.blocks[i].leakage_w;
      r.area_mm2 += replicas * config_.pes[i] * costs_.blocks[i].area_mm2;
    }
    r.dynamic_energy_j = dynamic_j_;
    r.energy_j = dynamic_j_ + r.leakage_w * r.latency_s;
    r.power_w = r.latency_s > 0 ? r.energy_j / r.latency_s : 0;
    r.rng_peak_bps = rng_peak_per_cycle * config_.clock_hz;
    r.rng_average_bps = r.latency_s > 0 ? random_bytes / r.latency_s : 0;
    return r;
  }

 private:
  const AccelConfig& config_;
  std::size_t n_, k_;
  const UnitCostTable& costs_;
  double dynamic_j_ = 0;
  bool stalled_ = false;
};

CostReport SimulateEncrypt(const AccelConfig& config, std::size_t n, std::size_t k,
                           const UnitCostTable& costs) {
  Timeline tl(config, n, k, costs);
  const double N = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  const double butterflies = N / 2 * std::log2(N);
  // u: one byte per ternary coefficient; e1, e2: one word per coefficient.
  const double u_bytes = N;
  const double e_bytes = 2 * N * costs.word_bytes;

  // u is consumed by every residue as it arrives, but the NTT needs all of it.
  const double rng_u = tl.Stage(Block::kRng, u_bytes, 1);
  const double ntt = tl.Stage(Block::kNtt, dk * butterflies, k);
  const double dyadic = tl.Stage(Block::kDyadic, 2 * dk * N, k);
  const double intt = tl.Stage(Block::kIntt, 2 * dk * butterflies, k);
  // The message path runs alongside the encryption of zero.
  const double encode = tl.Stage(Block::kEncode, butterflies + (dk - 1) * N, 1);

  const double front = std::max(rng_u + ntt + dyadic + intt, encode);

  // e1 and e2 are generated after u, before the tail starts, into the
  // adder's buffer; whatever does not fit streams at the RNG rate.
  const double rng_cycles_e = tl.Cycles(Block::kRng, e_bytes, 1);
  const double rng_rate = e_bytes / rng_cycles_e;
  const double prefill = std::min({e_bytes, rng_rate * (front - rng_u),
                                   static_cast<double>(config.memory(Block::kPolyAdd))});
  const double e_stream = (e_bytes - prefill) / rng_rate;
  const double add = tl.Cycles(Block::kPolyAdd, 2 * dk * N + (dk - 1) * N, k);
  const double mod_switch = tl.Cycles(Block::kModSwitch, 2 * (dk - 1) * N, 1);
  const double tail = std::max({add, mod_switch, e_stream}) + 2 * tl.Fill();

  const double cycles = front + tail;
  const double peak = std::max(u_bytes / rng_u, (e_bytes - prefill) / tail);
  CostReport r = tl.Finish(cycles, u_bytes + e_bytes, peak);
  if (e_stream > std::max(add, mod_switch)) r.stalled = true;
  return r;
}

CostReport SimulateDecrypt(const AccelConfig& config, std::size_t n, std::size_t k,
                           const UnitCostTable& costs) {
  Timeline tl(config, n, k, costs);
  const double N = static_cast<double>(n);
  const std::size_t data = k - 1;
  const double dd = static_cast<double>(data);
  const double butterflies = N / 2 * std::log2(N);
  // c1 * s in NTT form, back, plus c0, then base conversion with the t/q
  // rounding. Decoding to slots is one more transform mod t, run on the
  // INTT unit, so every stage is a subset of the encryption pipeline.
  const double ntt = tl.Stage(Block::kNtt, dd * butterflies, data);
  const double dyadic = tl.Stage(Block::kDyadic, dd * N, data);
  const double intt = tl.Stage(Block::kIntt, dd * butterflies, data) + tl.Cycles(Block::kIntt, butterflies, 1);
  const double add = tl.Cycles(Block::kPolyAdd, dd * N, data);
  const double convert = tl.Cycles(Block::kModSwitch, (dd + 1) * N, 1);
  const double tail = std::max(add, convert) + 2 * tl.Fill();
  return tl.Finish(ntt + dyadic + intt + tail, 0, 0);
}

}  // namespace

std::string BlockName(Block b) { return kNames[static_cast<std::size_t>(b)]; }

Block BlockFromName(const std::string& name) {
  for (std::size_t i = 0; i < kBlockCount; ++i) {
    if (name == kNames[i]) return static_cast<Block>(i);
  }
  throw InvalidArgument("unknown block " + name);
}

std::string AccelConfig::Key() const {
  std::ostringstream s;
  for (std::size_t i = 0; i < kBlockCount; ++i) s << (i ? "-" : "") << pes[i];
  s << "/";
  // NTT/INTT buffers are fixed; only the streaming scratchpads vary.
  bool first = true;
  for (std::size_t i = 0; i < kBlockCount; ++i) {
    if (!Streaming(static_cast<Block>(i))) continue;
    s << (first ? "" : "-") << memory_bytes[i];
    first = false;
  }
  s << "/L" << rns_layers;
  return s.str();
}

void AccelConfig::Validate() const {
  for (std::size_t i = 0; i < kBlockCount; ++i) {
    const int p = pes[i];
    if (p < 1 || p > 16 || (p & (p - 1)) != 0) {
      throw InvalidArgument("pe count for " + std::string(kNames[i]) + " must be a power of two in [1, 16]");
    }
    if (memory_bytes[i] <= 0) throw InvalidArgument("memory must be positive");
  }
  if (rns_layers < 1) throw InvalidArgument("rns_layers must be positive");
  if (!(clock_hz > 0)) throw InvalidArgument("clock must be positive");
}

void UnitCostTable::Validate() const {
  for (std::size_t i = 0; i < kBlockCount; ++i) {
    const BlockCost& c = blocks[i];
    if (!(c.ops_per_cycle > 0)) throw InvalidArgument(std::string(kNames[i]) + ": ops_per_cycle must be positive");
    if (c.energy_per_op_j < 0 || c.leakage_w < 0 || c.area_mm2 < 0 || c.bytes_per_op < 0) {
      throw InvalidArgument(std::string(kNames[i]) + ": costs must be non-negative");
    }
  }
  if (memory_energy_per_byte_j < 0 || memory_leakage_w_per_byte < 0 || memory_area_mm2_per_byte < 0 ||
      base_area_mm2 < 0 || base_leakage_w < 0 || pipeline_depth < 0 || word_bytes <= 0) {
    throw InvalidArgument("costs must be non-negative");
  }
}

nlohmann::json UnitCostTable::ToJson() const {
  nlohmann::json blocks_json;
  for (std::size_t i = 0; i < kBlockCount; ++i) {
    const BlockCost& c = blocks[i];
    blocks_json[kNames[i]] = {{"ops_per_cycle", c.ops_per_cycle},
                              {"energy_per_op_j", c.energy_per_op_j},
                              {"leakage_w", c.leakage_w},
                              {"area_mm2", c.area_mm2},
                              {"bytes_per_op", c.bytes_per_op}};
  }
  return {{"note", note},
          {"pipeline_depth", pipeline_depth},
          {"word_bytes", word_bytes},
          {"base", {{"area_mm2", base_area_mm2}, {"leakage_w", base_leakage_w}}},
          {"memory",
           {{"energy_per_byte_j", memory_energy_per_byte_j},
            {"leakage_w_per_byte", memory_leakage_w_per_byte},
            {"area_mm2_per_byte", memory_area_mm2_per_byte}}},
          {"blocks", blocks_json}};
}

UnitCostTable UnitCostTable::FromJson(const nlohmann::json& j) {
  try {
    UnitCostTable t;
    t.note = j.value("note", "");
    t.pipeline_depth = j.value("pipeline_depth", 3);
    t.word_bytes = j.value("word_bytes", 8);
    const auto& base = j.at("base");
    t.base_area_mm2 = base.at("area_mm2").get<double>();
    t.base_leakage_w = base.at("leakage_w").get<double>();
    const auto& mem = j.at("memory");
    t.memory_energy_per_byte_j = mem.at("energy_per_byte_j").get<double>();
    t.memory_leakage_w_per_byte = mem.at("leakage_w_per_byte").get<double>();
    t.memory_area_mm2_per_byte = mem.at("area_mm2_per_byte").get<double>();
    for (std::size_t i = 0; i < kBlockCount; ++i) {
      const auto& b = j.at("blocks").at(kNames[i]);
      BlockCost& c = t.blocks[i];
      c.ops_per_cycle = b.at("ops_per_cycle").get<double>();
      c.energy_per_op_j = b.at("energy_per_op_j").get<double>();
      c.leakage_w = b.at("leakage_w").get<double>();
      c.area_mm2 = b.at("area_mm2").get<double>();
      c.bytes_per_op = b.value("bytes_per_op", 16.0);
    }
    t.Validate();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad cost table: ") + e.what());
  }
}

UnitCostTable UnitCostTable::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  try {
    return FromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad cost table: ") + e.what());
  }
}

UnitCostTable UnitCostTable::Linear() {
  UnitCostTable t;
  for (auto& c : t.blocks) c = BlockCost{1, 1e-12, 1e-6, 1, 0};
  t.pipeline_depth = 0;
  t.note = "idealized linear table";
  return t;
}

CostReport Simulate(const AccelConfig& config, std::size_t n, std::size_t k,
                    const UnitCostTable& costs, Operation op) {
  config.Validate();
  if (n < 2 || (n & (n - 1)) != 0) throw InvalidArgument("n must be a power of two");
  if (k < 2) throw InvalidArgument("k must be at least 2");
  return op == Operation::kEncrypt ? SimulateEncrypt(config, n, k, costs)
                                   : SimulateDecrypt(config, n, k, costs);
}

}  // namespace choco::accel
