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

#ifndef CHOCO_NN_NETWORK_H_
#define CHOCO_NN_NETWORK_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "choco/nn/tensor.h"

namespace choco::nn {

enum class LayerKind { kConv2d, kFc, kRelu, kPool };
enum class PoolKind { kMax, kAvg };

std::string LayerKindName(LayerKind kind);

struct Kernel {
  std::size_t kh = 1;
  std::size_t kw = 1;
  std::size_t cin = 1;
  std::size_t cout = 1;
  friend bool operator==(const Kernel&, const Kernel&) = default;
};

struct LayerSpec {
  std::string name;
  LayerKind kind = LayerKind::kConv2d;
  Shape in_shape;
  Shape out_shape;
  // Linear layers. A pool uses kh x kw as its window.
  Kernel kernel;
  std::size_t stride = 1;
  // Zero padding on every side; conv only.
  std::size_t padding = 0;
  PoolKind pool = PoolKind::kMax;
  // Conv only: reads the same input as the conv before it and appends its
  // output channels to that conv's (fire-module expand branches).
  bool concat = false;
  // Relative to the spec file; empty when the spec carries no weights.
  std::string weights_file;
  // (cout, cin, kh, kw) for conv, (cout, cin) for fc.
  std::shared_ptr<const QTensor> weights;

  bool linear() const { return kind == LayerKind::kConv2d || kind == LayerKind::kFc; }
  uint64_t macs() const;
  // Inputs summed into one output value.
  std::size_t fan_in() const;
};

// A linear group (one layer, or a conv plus its concat branches) and the
// client-side layers that follow it, up to the next linear layer.
struct Stage {
  std::vector<std::size_t> linear;
  std::vector<std::size_t> nonlinear;
  Shape in_shape;
  Shape linear_out_shape;
  Shape out_shape;
};

using NetworkHash = std::array<uint8_t, 32>;

struct NetworkSpec {
  std::string name;
  std::vector<LayerSpec> layers;

  // Shape arithmetic, chaining, and weight dims. Throws InvalidArgument
  // naming the offending layer.
  void Validate() const;
  std::vector<Stage> Stages() const;
  Shape input_shape() const;
  Shape output_shape() const;
  uint64_t macs() const;
  bool has_weights() const;

  // Architecture only; weights never enter the JSON or the hash.
  std::string ToJson() const;
  static NetworkSpec FromJson(const std::string& json);
  NetworkHash Hash() const;
};

// Reads the spec; weights are resolved relative to its directory when
// `load_weights` is set and the layer names a file.
NetworkSpec LoadNetwork(const std::string& path, bool load_weights = true);
// Writes the spec JSON and, for layers with weights, `<name>.w` next to it.
void SaveNetwork(const std::string& path, const NetworkSpec& net);

// Deterministic uniform weights over the full signed range of `bits`.
void RandomizeWeights(NetworkSpec& net, uint64_t seed, int bits = 4);

// Spec builders that fill in out_shape from in_shape.
LayerSpec Conv(std::string name, Shape in, std::size_t k, std::size_t cout, std::size_t stride = 1,
               std::size_t padding = 0);
LayerSpec Fc(std::string name, Shape in, std::size_t cout);
LayerSpec Relu(std::string name, Shape in);
LayerSpec Pool(std::string name, Shape in, std::size_t window, std::size_t stride,
               PoolKind kind = PoolKind::kMax);

}  // namespace choco::nn

#endif  // CHOCO_NN_NETWORK_H_
