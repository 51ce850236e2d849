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

#ifndef CHOCO_NN_LINEAR_H_
#define CHOCO_NN_LINEAR_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "choco/bfv/ciphertext.h"
#include "choco/bfv/evaluator.h"
#include "choco/bfv/keys.h"
#include "choco/nn/network.h"
#include "choco/nn/tensor.h"
#include "choco/packing/layout.h"

namespace choco::nn {

// Largest |dy * W + dx| over the kernel taps: how far any rotation reaches.
std::size_t ConvMargin(const LayerSpec& layer);

// Worst case |acc| <= 2^(in_bits-1) * 2^(w_bits-1) * fan_in must stay below
// t/2 so signed results decode unambiguously. Throws "t too small for layer".
void CheckAccumulator(const LayerSpec& layer, uint64_t t, int input_bits = 4);

// How one linear stage is laid out in slots.
//
// Conv: each input ciphertext carries `input.channel_count` (a power of two)
// channels, tiled across the row; each output ciphertext carries row/slot
// output channels on the same input-grid positions.
// Fc: the flattened input is zero-padded to a power of two P and tiled with
// period P; output j sits in slot j.
struct StageLayout {
  packing::PackingLayout input;
  std::size_t input_ciphertexts = 0;
  std::vector<packing::PackingLayout> outputs;  // one per linear layer
  std::vector<std::size_t> output_ciphertexts;

  std::size_t total_output_ciphertexts() const;
  nlohmann::json ToJson() const;
  static StageLayout FromJson(const nlohmann::json& j);
  friend bool operator==(const StageLayout&, const StageLayout&) = default;
};

// Throws InvalidArgument naming the layer when it cannot be packed in N/2.
StageLayout PlanStage(const NetworkSpec& net, const Stage& stage, std::size_t n);

// Client side: slot vectors (one row each) for the stage's input ciphertexts.
std::vector<std::vector<uint64_t>> PackStageInput(const IntTensor& x, const NetworkSpec& net,
                                                  const Stage& stage, const StageLayout& layout,
                                                  std::size_t n, uint64_t t);

// Client side: the linear layer's accumulators from its decrypted slots.
IntTensor UnpackLayerOutput(const std::vector<std::vector<uint64_t>>& slots,
                            const LayerSpec& layer, const packing::PackingLayout& out,
                            uint64_t t);

// Server side. Every plaintext multiply acts on a rotated input ciphertext,
// so the layer has multiplicative depth one.
std::vector<bfv::Ciphertext> Conv2dEncrypted(const std::vector<bfv::Ciphertext>& in,
                                             const LayerSpec& layer,
                                             const packing::PackingLayout& layout,
                                             const bfv::Evaluator& evaluator,
                                             const bfv::GaloisKeys& keys);

// Diagonal method with baby-step/giant-step rotations.
std::vector<bfv::Ciphertext> FcEncrypted(const std::vector<bfv::Ciphertext>& in,
                                         const LayerSpec& layer,
                                         const packing::PackingLayout& layout,
                                         const bfv::Evaluator& evaluator,
                                         const bfv::GaloisKeys& keys);

// All linear layers of a stage, outputs in layer order.
std::vector<bfv::Ciphertext> EvaluateStage(const std::vector<bfv::Ciphertext>& in,
                                           const NetworkSpec& net, const Stage& stage,
                                           const StageLayout& layout,
                                           const bfv::Evaluator& evaluator,
                                           const bfv::GaloisKeys& keys);

// Signed value <-> residue mod t.
uint64_t ToResidue(int64_t v, uint64_t t);
int64_t FromResidue(uint64_t v, uint64_t t);

}  // namespace choco::nn

#endif  // CHOCO_NN_LINEAR_H_
