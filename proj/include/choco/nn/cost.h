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

#ifndef CHOCO_NN_COST_H_
#define CHOCO_NN_COST_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "choco/bfv/params.h"
#include "choco/nn/linear.h"
#include "choco/nn/network.h"

namespace choco::nn {

struct CommOptions {
  // Server modulus-switches each output down one residue before replying.
  bool drop_output_residue = false;
};

// Residues on the way back from the server.
std::size_t OutputResidues(const bfv::HEParams& params, const CommOptions& options);

// Traffic for one layer. Bytes are whole protocol frames: header, batch
// prefix, and serialized ciphertexts. Client-side layers cost nothing; a
// concat branch shares its group's upload, which is charged to the first.
struct LayerCost {
  std::string name;
  LayerKind kind = LayerKind::kRelu;
  uint64_t macs = 0;
  uint64_t upload_bytes = 0;
  uint64_t download_bytes = 0;
  std::size_t ciphertexts_in = 0;
  std::size_t ciphertexts_out = 0;

  uint64_t bytes() const { return upload_bytes + download_bytes; }
  // Multiply-accumulates per 10^6 bytes moved; 0 when nothing moves.
  double macs_per_mb() const;
};

// One frame carrying `count` ciphertexts of `residues` residues.
uint64_t BatchFrameBytes(const bfv::HEParams& params, std::size_t count, std::size_t residues);

// `first_in_group` charges the upload; `output_ciphertexts` is this layer's.
LayerCost LayerCostFor(const LayerSpec& layer, const bfv::HEParams& params,
                       const StageLayout& layout, std::size_t index_in_stage,
                       const CommOptions& options = {});

struct CommReport {
  std::string network;
  std::vector<LayerCost> layers;
  uint64_t macs = 0;
  uint64_t upload_bytes = 0;
  uint64_t download_bytes = 0;
  std::vector<StageLayout> stages;

  uint64_t total_bytes() const { return upload_bytes + download_bytes; }
};

// Throws InvalidArgument naming the first layer without a feasible layout.
CommReport NetworkCommReport(const NetworkSpec& net, const bfv::HEParams& params,
                             const CommOptions& options = {});

}  // namespace choco::nn

#endif  // CHOCO_NN_COST_H_
