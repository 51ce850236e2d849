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

#include "choco/nn/cost.h"

#include "choco/bfv/ciphertext.h"
#include "choco/common/frame.h"

namespace choco::nn {

double LayerCost::macs_per_mb() const {
  if (bytes() == 0) return 0;
  return static_cast<double>(macs) / (static_cast<double>(bytes()) / 1e6);
}

std::size_t OutputResidues(const bfv::HEParams& params, const CommOptions& options) {
  const std::size_t fresh = params.k() - 1;
  return options.drop_output_residue && fresh > 1 ? fresh - 1 : fresh;
}

uint64_t BatchFrameBytes(const bfv::HEParams& params, std::size_t count, std::size_t residues) {
  return kFrameHeaderBytes + kBatchPrefixBytes +
         count * bfv::SerializedCiphertextBytes(params.n(), 2, residues);
}

LayerCost LayerCostFor(const LayerSpec& layer, const bfv::HEParams& params,
                       const StageLayout& layout, std::size_t index_in_stage,
                       const CommOptions& options) {
  LayerCost c;
  c.name = layer.name;
  c.kind = layer.kind;
  c.macs = layer.macs();
  if (!layer.linear()) return c;
  if (index_in_stage == 0) {
    c.ciphertexts_in = layout.input_ciphertexts;
    c.upload_bytes = BatchFrameBytes(params, c.ciphertexts_in, params.k() - 1);
  }
  c.ciphertexts_out = layout.output_ciphertexts.at(index_in_stage);
  // A stage's outputs travel in one frame, whose fixed overhead is
  // charged to the stage's first layer.
  const std::size_t residues = OutputResidues(params, options);
  c.download_bytes = c.ciphertexts_out * bfv::SerializedCiphertextBytes(params.n(), 2, residues);
  if (index_in_stage == 0) c.download_bytes += kFrameHeaderBytes + kBatchPrefixBytes;
  return c;
}

CommReport NetworkCommReport(const NetworkSpec& net, const bfv::HEParams& params,
                             const CommOptions& options) {
  CommReport r;
  r.network = net.name;
  net.Validate();
  const auto stages = net.Stages();
  r.layers.resize(net.layers.size());
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    r.layers[i].name = net.layers[i].name;
    r.layers[i].kind = net.layers[i].kind;
  }
  for (const Stage& stage : stages) {
    StageLayout layout = PlanStage(net, stage, params.n());
    for (std::size_t j = 0; j < stage.linear.size(); ++j) {
      const std::size_t idx = stage.linear[j];
      r.layers[idx] = LayerCostFor(net.layers[idx], params, layout, j, options);
    }
    r.stages.push_back(std::move(layout));
  }
  for (const LayerCost& c : r.layers) {
    r.macs += c.macs;
    r.upload_bytes += c.upload_bytes;
    r.download_bytes += c.download_bytes;
  }
  return r;
}

}  // namespace choco::nn
