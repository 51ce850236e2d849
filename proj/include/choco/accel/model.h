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

#ifndef CHOCO_ACCEL_MODEL_H_
#define CHOCO_ACCEL_MODEL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

#include <json.hpp>

namespace choco::accel {

// Functional blocks of the encrypt/decrypt datapath.
enum class Block : uint8_t { kRng, kNtt, kDyadic, kIntt, kPolyAdd, kModSwitch, kEncode };
inline constexpr std::size_t kBlockCount = 7;
std::string BlockName(Block b);
Block BlockFromName(const std::string& name);

enum class Operation : uint8_t { kEncrypt, kDecrypt };

struct AccelConfig {
  std::array<int, kBlockCount> pes{1, 1, 1, 1, 1, 1, 1};
  // Scratchpad bytes per RNS layer. NTT/INTT entries are ignored: their
  // buffers always hold one polynomial residue (N * 8 bytes).
  std::array<int, kBlockCount> memory_bytes{1024, 1024, 1024, 1024, 1024, 1024, 1024};
  // Parallel replicas of the per-residue blocks (NTT, dyadic, INTT, add).
  int rns_layers = 3;
  double clock_hz = 100e6;

  int pe(Block b) const { return pes[static_cast<std::size_t>(b)]; }
  int& pe(Block b) { return pes[static_cast<std::size_t>(b)]; }
  int memory(Block b) const { return memory_bytes[static_cast<std::size_t>(b)]; }
  // Stable text key; sweeps sort on it.
  std::string Key() const;
  // Throws InvalidArgument: PE counts must be powers of two in [1, 16].
  void Validate() const;

  friend bool operator==(const AccelConfig&, const AccelConfig&) = default;
};

struct BlockCost {
  double ops_per_cycle = 1;    // per PE
  double energy_per_op_j = 0;  // dynamic
  double leakage_w = 0;        // per PE
  double area_mm2 = 0;         // per PE
  double bytes_per_op = 16;    // scratchpad traffic
};

// Per-element unit costs. Loaded from a calibration file.
struct UnitCostTable {
  std::array<BlockCost, kBlockCount> blocks{};
  double memory_energy_per_byte_j = 0;
  double memory_leakage_w_per_byte = 0;
  double memory_area_mm2_per_byte = 0;
  double base_area_mm2 = 0;
  double base_leakage_w = 0;
  // Pipeline fill of each stage, and in-flight words a streaming stage
  // must buffer per PE (double-buffered).
  int pipeline_depth = 3;
  int word_bytes = 8;
  std::string note;

  const BlockCost& block(Block b) const { return blocks[static_cast<std::size_t>(b)]; }
  BlockCost& block(Block b) { return blocks[static_cast<std::size_t>(b)]; }
  // Throws InvalidArgument on negative entries or a zero rate.
  void Validate() const;
  nlohmann::json ToJson() const;
  static UnitCostTable FromJson(const nlohmann::json& j);
  static UnitCostTable Load(const std::string& path);
  // Every block one op per PE per cycle, unit energy and area, no fill,
  // no memory effects: latency is pure stage arithmetic.
  static UnitCostTable Linear();
};

struct CostReport {
  double latency_s = 0;
  double energy_j = 0;
  double area_mm2 = 0;
  double power_w = 0;  // leakage + average dynamic
  double leakage_w = 0;
  double dynamic_energy_j = 0;
  uint64_t cycles = 0;
  bool stalled = false;
  // Random bytes per second: while the noise stream feeds the adder, and
  // over the whole operation.
  double rng_peak_bps = 0;
  double rng_average_bps = 0;
};

// Analytic estimate for one operation on (n, k): k residues including the
// key prime. Deterministic and pure.
CostReport Simulate(const AccelConfig& config, std::size_t n, std::size_t k,
                    const UnitCostTable& costs, Operation op);

}  // namespace choco::accel

#endif  // CHOCO_ACCEL_MODEL_H_
