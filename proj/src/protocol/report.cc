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

#include "choco/protocol/report.h"

#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

#include <boost/algorithm/string.hpp>

#include "choco/common/error.h"

namespace choco::protocol {

std::vector<Baseline> ParseBaselinesCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Baseline> out;
  double unit = 0;
  while (std::getline(in, line)) {
    boost::trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    boost::split(cells, line, boost::is_any_of(","));
    for (auto& c : cells) boost::trim(c);
    if (cells.size() != 3) throw FormatError("baselines: expected 3 columns: " + line);
    if (unit == 0) {
      if (cells[2] == "mb") unit = 1e6;
      else if (cells[2] == "bytes") unit = 1;
      else throw FormatError("baselines: header must be system,network,mb|bytes");
      continue;
    }
    try {
      out.push_back({cells[0], cells[1], std::stod(cells[2]) * unit});
    } catch (const std::logic_error&) {
      throw FormatError("baselines: bad number: " + cells[2]);
    }
  }
  return out;
}

std::vector<Baseline> LoadBaselinesCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return ParseBaselinesCsv(std::string(std::istreambuf_iterator<char>(in), {}));
}

LinkModel LinkModel::Parse(const std::string& spec) {
  if (spec == "bluetooth") return {"bluetooth", 22e6, 10e-3};
  if (boost::starts_with(spec, "custom:")) {
    std::vector<std::string> parts;
    boost::split(parts, spec.substr(7), boost::is_any_of(","));
    if (parts.size() == 2) {
      try {
        LinkModel m{"custom", std::stod(parts[0]), std::stod(parts[1])};
        if (m.rate_bps > 0 && m.power_w >= 0) return m;
      } catch (const std::logic_error&) {
      }
    }
  }
  throw InvalidArgument("bad link '" + spec + "': use bluetooth or custom:<bps>,<watts>");
}

std::string LedgerReport(const Ledger& ledger, const std::string& network,
                         const ReportOptions& options) {
  std::ostringstream out;
  out << "network " << network << "\n";
  out << std::left << std::setw(20) << "layer" << std::right << std::setw(14) << "up_bytes"
      << std::setw(14) << "down_bytes" << "\n";
  for (const auto& l : ledger.layers) {
    if (l.bytes() == 0) continue;
    out << std::left << std::setw(20) << l.name << std::right << std::setw(14) << l.up_bytes
        << std::setw(14) << l.down_bytes << "\n";
  }
  out << "online  " << ledger.online_bytes() << "\n";
  out << "offline " << ledger.offline_bytes << " (keys)\n";
  out << "control " << ledger.control_bytes << "\n";
  out << "total   " << ledger.total_bytes() << " (up " << ledger.up_bytes << ", down "
      << ledger.down_bytes << ")\n";
  out << std::fixed << std::setprecision(3);
  for (const auto& b : options.baselines) {
    if (b.network != network || b.bytes <= 0) continue;
    out << "vs " << b.system << ": " << b.bytes / 1e6 << " MB, ratio "
        << b.bytes / static_cast<double>(ledger.total_bytes()) << "x (baseline / ours)\n";
  }
  if (options.link) {
    const LinkModel& link = *options.link;
    out << "link " << link.name << " (analytic, " << link.rate_bps / 1e6 << " Mbps, "
        << link.power_w * 1e3 << " mW): " << link.Seconds(ledger.total_bytes()) << " s, "
        << link.Joules(ledger.total_bytes()) * 1e3 << " mJ\n";
  }
  return out.str();
}

}  // namespace choco::protocol
