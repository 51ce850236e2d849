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

#ifndef CHOCO_ACCEL_DSE_H_
#define CHOCO_ACCEL_DSE_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "choco/accel/model.h"
#include "choco/common/error.h"

namespace choco::accel {

// Which configurations a sweep visits.
struct GridSpec {
  std::vector<int> pe_choices{1, 2, 4, 8, 16};
  std::vector<int> memory_choices{128, 256, 512, 1024};
  // One scratchpad size for every streaming block, or one axis per block.
  bool tie_memory = true;
  // 0 means one layer per residue.
  std::vector<int> rns_layers{0};
  double clock_hz = 100e6;
  // Pruning: the INTT does twice the NTT's work, so a smaller INTT array
  // than NTT array is never useful.
  bool intt_at_least_ntt = true;
  // 0 = unlimited.
  int max_total_pes = 0;

  nlohmann::json ToJson() const;
  static GridSpec FromJson(const nlohmann::json& j);
  static GridSpec Load(const std::string& path);
};

// Every configuration the grid admits, sorted by key, each exactly once.
std::vector<AccelConfig> EnumerateGrid(const GridSpec& grid, std::size_t k);

struct SweepPoint {
  AccelConfig config;
  CostReport report;  // one encryption
};

// Simulates the whole grid; `threads` workers, merged in key order.
std::vector<SweepPoint> Sweep(const GridSpec& grid, std::size_t n, std::size_t k,
                              const UnitCostTable& costs, unsigned threads = 1);

// Indices of the reports no other report dominates in (power, latency,
// area): <= in all three and < in one. Ascending.
std::vector<std::size_t> ParetoFrontier(const std::vector<CostReport>& reports);

class Infeasible : public Error {
 public:
  using Error::Error;
};

// Among reports with power <= cap and latency within (1 + slack) of the
// fastest such report, the smallest; ties go to lower energy, then lower
// latency. Throws Infeasible("infeasible cap") when nothing fits.
std::size_t Select(const std::vector<CostReport>& reports, double power_cap_w, double slack);

void WriteSweepCsv(std::ostream& out, const std::vector<SweepPoint>& points);
void WriteSweepCsv(std::ostream& out, const std::vector<SweepPoint>& points,
                   const std::vector<std::size_t>& rows);
std::string DescribeSelection(const SweepPoint& point);

}  // namespace choco::accel

#endif  // CHOCO_ACCEL_DSE_H_
