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

#ifndef CHOCO_PROTOCOL_REPORT_H_
#define CHOCO_PROTOCOL_REPORT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "choco/protocol/session.h"

namespace choco::protocol {

// A user-supplied comparison point; never a built-in truth.
struct Baseline {
  std::string system;
  std::string network;
  double bytes = 0;
};

// CSV with header "system,network,mb" (10^6 bytes) or "system,network,bytes".
std::vector<Baseline> ParseBaselinesCsv(const std::string& text);
std::vector<Baseline> LoadBaselinesCsv(const std::string& path);

// Analytic radio link: time = bits / rate, energy = power * time.
struct LinkModel {
  std::string name;
  double rate_bps = 0;
  double power_w = 0;

  // "bluetooth" (22 Mbps, 10 mW) or "custom:<bits per second>,<watts>".
  static LinkModel Parse(const std::string& spec);
  double Seconds(uint64_t bytes) const { return 8.0 * static_cast<double>(bytes) / rate_bps; }
  double Joules(uint64_t bytes) const { return power_w * Seconds(bytes); }
};

struct ReportOptions {
  std::vector<Baseline> baselines;
  std::optional<LinkModel> link;
};

// Per-layer and total bytes, the offline/online split, and optional
// baseline ratios and link projections.
std::string LedgerReport(const Ledger& ledger, const std::string& network,
                         const ReportOptions& options = {});

}  // namespace choco::protocol

#endif  // CHOCO_PROTOCOL_REPORT_H_
