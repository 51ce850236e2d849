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

#include "choco/accel/dse.h"

#include <algorithm>
#include <fstream>
#include <future>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace choco::accel {
namespace {

constexpr std::array<Block, 5> kStreamingBlocks = {Block::kRng, Block::kDyadic, Block::kPolyAdd,
                                                   Block::kModSwitch, Block::kEncode};

// Calls `visit` with every combination of `choices` over `slots` positions.
template <typename Visit>
void Product(std::size_t slots, std::size_t choices, Visit visit) {
  std::vector<std::size_t> idx(slots, 0);
  for (;;) {
    visit(idx);
    std::size_t i = slots;
    while (i > 0 && ++idx[i - 1] == choices) idx[--i] = 0;
    if (i == 0) return;
  }
}

}  // namespace

nlohmann::json GridSpec::ToJson() const {
  return {{"pe_choices", pe_choices},
          {"memory_choices", memory_choices},
          {"tie_memory", tie_memory},
          {"rns_layers", rns_layers},
          {"clock_hz", clock_hz},
          {"prune", {{"intt_at_least_ntt", intt_at_least_ntt}, {"max_total_pes", max_total_pes}}}};
}

GridSpec GridSpec::FromJson(const nlohmann::json& j) {
  try {
    GridSpec g;
    g.pe_choices = j.at("pe_choices").get<std::vector<int>>();
    g.memory_choices = j.at("memory_choices").get<std::vector<int>>();
    g.tie_memory = j.value("tie_memory", true);
    g.rns_layers = j.value("rns_layers", std::vector<int>{0});
    g.clock_hz = j.value("clock_hz", 100e6);
    if (j.contains("prune")) {
      g.intt_at_least_ntt = j["prune"].value("intt_at_least_ntt", false);
      g.max_total_pes = j["prune"].value("max_total_pes", 0);
    } else {
      g.intt_at_least_ntt = false;
    }
    if (g.pe_choices.empty() || g.memory_choices.empty() || g.rns_layers.empty()) {
      throw InvalidArgument("grid axes must be non-empty");
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad grid: ") + e.what());
  }
}

GridSpec GridSpec::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  try {
    return FromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad grid: ") + e.what());
  }
}

std::vector<AccelConfig> EnumerateGrid(const GridSpec& grid, std::size_t k) {
  std::vector<AccelConfig> out;
  const std::size_t memory_axes = grid.tie_memory ? 1 : kStreamingBlocks.size();
  for (int layers : grid.rns_layers) {
    Product(kBlockCount, grid.pe_choices.size(), [&](const std::vector<std::size_t>& pi) {
      AccelConfig c;
      for (std::size_t b = 0; b < kBlockCount; ++b) c.pes[b] = grid.pe_choices[pi[b]];
      if (grid.intt_at_least_ntt && c.pe(Block::kIntt) < c.pe(Block::kNtt)) return;
      if (grid.max_total_pes > 0 &&
          std::accumulate(c.pes.begin(), c.pes.end(), 0) > grid.max_total_pes) {
        return;
      }
      c.rns_layers = layers == 0 ? static_cast<int>(k) : layers;
      c.clock_hz = grid.clock_hz;
      Product(memory_axes, grid.memory_choices.size(), [&](const std::vector<std::size_t>& mi) {
        for (std::size_t s = 0; s < kStreamingBlocks.size(); ++s) {
          c.memory_bytes[static_cast<std::size_t>(kStreamingBlocks[s])] =
              grid.memory_choices[mi[grid.tie_memory ? 0 : s]];
        }
        out.push_back(c);
      });
    });
  }
  std::sort(out.begin(), out.end(), [](const AccelConfig& a, const AccelConfig& b) {
    return std::tie(a.rns_layers, a.pes, a.memory_bytes) < std::tie(b.rns_layers, b.pes, b.memory_bytes);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<SweepPoint> Sweep(const GridSpec& grid, std::size_t n, std::size_t k,
                              const UnitCostTable& costs, unsigned threads) {
  costs.Validate();
  const auto configs = EnumerateGrid(grid, k);
  std::vector<SweepPoint> out(configs.size());
  // Workers fill disjoint slices, so the merge is the enumeration order.
  const std::size_t workers = std::max(1u, threads);
  const std::size_t chunk = (configs.size() + workers - 1) / workers;
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk, hi = std::min(configs.size(), lo + chunk);
    if (lo >= hi) break;
    jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) {
        out[i] = {configs[i], Simulate(configs[i], n, k, costs, Operation::kEncrypt)};
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

// Sweep in (power, latency, area) order over a staircase of the points seen
// so far: latency -> least area at or below it, with the power of the
// first point that reached it.
std::vector<std::size_t> ParetoFrontier(const std::vector<CostReport>& reports) {
  std::vector<std::size_t> order(reports.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t i) {
    return std::make_tuple(reports[i].power_w, reports[i].latency_s, reports[i].area_mm2);
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

  struct Step {
    double area;
    double power;
  };
  std::map<double, Step> stairs;  // latency ascending, area strictly descending
  std::vector<std::size_t> frontier;
  for (std::size_t i : order) {
    const auto& r = reports[i];
    bool dominated = false;
    auto it = stairs.upper_bound(r.latency_s);
    if (it != stairs.begin()) {
      const auto& [lat, step] = *std::prev(it);
      // Best area among earlier points no slower than r; those are no more
      // power-hungry either. Only an exact twin fails to dominate.
      dominated = step.area < r.area_mm2 ||
                  (step.area == r.area_mm2 && (lat < r.latency_s || step.power < r.power_w));
    }
    if (dominated) continue;
    frontier.push_back(i);
    auto at = stairs.find(r.latency_s);
    if (at != stairs.end() && at->second.area <= r.area_mm2) continue;  // exact twin
    stairs[r.latency_s] = {r.area_mm2, r.power_w};
    // Drop slower steps that are no smaller.
    auto next = std::next(stairs.find(r.latency_s));
    while (next != stairs.end() && next->second.area >= r.area_mm2) next = stairs.erase(next);
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

std::size_t Select(const std::vector<CostReport>& reports, double power_cap_w, double slack) {
  double fastest = -1;
  for (const auto& r : reports) {
    if (r.power_w <= power_cap_w && (fastest < 0 || r.latency_s < fastest)) fastest = r.latency_s;
  }
  if (fastest < 0) throw Infeasible("infeasible cap");
  const double bound = (1 + slack) * fastest;
  std::size_t best = reports.size();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    if (r.power_w > power_cap_w || r.latency_s > bound) continue;
    if (best == reports.size() ||
        std::make_tuple(r.area_mm2, r.energy_j, r.latency_s) <
            std::make_tuple(reports[best].area_mm2, reports[best].energy_j, reports[best].latency_s)) {
      best = i;
    }
  }
  return best;
}

void WriteSweepCsv(std::ostream& out, const std::vector<SweepPoint>& points,
                   const std::vector<std::size_t>& rows) {
  for (std::size_t b = 0; b < kBlockCount; ++b) out << "pe_" << BlockName(static_cast<Block>(b)) << ",";
  for (Block b : kStreamingBlocks) out << "mem_" << BlockName(b) << ",";
  out << "rns_layers,clock_hz,latency_s,energy_j,area_mm2,power_w,leakage_w,stalled,"
         "rng_peak_bps,rng_average_bps\n";
  out << std::setprecision(9);
  for (std::size_t i : rows) {
    const auto& [c, r] = points[i];
    for (int p : c.pes) out << p << ",";
    for (Block b : kStreamingBlocks) out << c.memory(b) << ",";
    out << c.rns_layers << "," << c.clock_hz << "," << r.latency_s << "," << r.energy_j << ","
        << r.area_mm2 << "," << r.power_w << "," << r.leakage_w << "," << (r.stalled ? 1 : 0) << ","
        << r.rng_peak_bps << "," << r.rng_average_bps << "\n";
  }
}

void WriteSweepCsv(std::ostream& out, const std::vector<SweepPoint>& points) {
  std::vector<std::size_t> rows(points.size());
  std::iota(rows.begin(), rows.end(), 0);
  WriteSweepCsv(out, points, rows);
}

std::string DescribeSelection(const SweepPoint& point) {
  const auto& [c, r] = point;
  std::ostringstream s;
  s << "config " << c.Key() << "\n";
  for (std::size_t b = 0; b < kBlockCount; ++b) {
    s << "  " << std::left << std::setw(11) << BlockName(static_cast<Block>(b)) << " pes " << c.pes[b];
    if (b != static_cast<std::size_t>(Block::kNtt) && b != static_cast<std::size_t>(Block::kIntt)) {
      s << ", " << c.memory_bytes[b] << " B";
    }
    s << "\n";
  }
  s << std::fixed << std::setprecision(4);
  s << "latency " << r.latency_s * 1e3 << " ms, energy " << r.energy_j * 1e3 << " mJ, area "
    << r.area_mm2 << " mm2, power " << r.power_w * 1e3 << " mW" << (r.stalled ? " (stalled)" : "")
    << "\n";
  s << std::setprecision(1) << "rng " << r.rng_peak_bps / 1e6 << " MB/s peak, "
    << r.rng_average_bps / 1e6 << " MB/s average\n";
  return s.str();
}

}  // namespace choco::accel
