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

#include "choco/nn/network.h"

#include <sodium.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "choco/common/error.h"

namespace choco::nn {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(const LayerSpec& layer, const std::string& what) {
  throw InvalidArgument("layer " + layer.name + ": " + what);
}

json ShapeJson(const Shape& s) { return json::array({s.h, s.w, s.c}); }

Shape ShapeFrom(const json& j) {
  const auto v = j.get<std::vector<std::size_t>>();
  if (v.size() != 3) throw FormatError("shape needs 3 entries");
  return Shape{v[0], v[1], v[2]};
}

LayerKind KindFrom(const std::string& s) {
  if (s == "conv2d") return LayerKind::kConv2d;
  if (s == "fc") return LayerKind::kFc;
  if (s == "relu") return LayerKind::kRelu;
  if (s == "pool") return LayerKind::kPool;
  throw FormatError("unknown layer kind " + s);
}

std::size_t PoolOut(std::size_t in, std::size_t window, std::size_t stride) {
  return in < window ? 0 : (in - window) / stride + 1;
}

Shape ExpectedOut(const LayerSpec& l) {
  const Shape& in = l.in_shape;
  const Kernel& k = l.kernel;
  switch (l.kind) {
    case LayerKind::kConv2d:
      if (in.h + 2 * l.padding < k.kh || in.w + 2 * l.padding < k.kw) Fail(l, "kernel larger than input");
      return Shape{(in.h + 2 * l.padding - k.kh) / l.stride + 1,
                   (in.w + 2 * l.padding - k.kw) / l.stride + 1, k.cout};
    case LayerKind::kFc:
      return Shape{1, 1, k.cout};
    case LayerKind::kRelu:
      return in;
    case LayerKind::kPool:
      return Shape{PoolOut(in.h, k.kh, l.stride), PoolOut(in.w, k.kw, l.stride), in.c};
  }
  return in;
}

void ValidateLayer(const LayerSpec& l) {
  if (l.stride == 0) Fail(l, "zero stride");
  if (l.in_shape.size() == 0) Fail(l, "empty input");
  const Kernel& k = l.kernel;
  if (l.kind == LayerKind::kConv2d) {
    if (k.cin != l.in_shape.c) Fail(l, "kernel cin does not match input channels");
    if (k.kh == 0 || k.kw == 0 || k.cout == 0) Fail(l, "empty kernel");
    // Outputs are computed on the input grid, so padding may not push an
    // output position past the image.
    if (2 * l.padding > k.kh - 1 || 2 * l.padding > k.kw - 1) Fail(l, "padding wider than half the kernel");
  }
  if (l.kind == LayerKind::kFc) {
    if (k.cin != l.in_shape.size()) Fail(l, "fc cin does not match flattened input");
    if (k.cout == 0) Fail(l, "empty fc");
  }
  if (l.kind == LayerKind::kPool && (k.kh == 0 || k.kw == 0)) Fail(l, "empty pool window");
  if (l.concat && l.kind != LayerKind::kConv2d) Fail(l, "only conv layers concatenate");
  const Shape want = ExpectedOut(l);
  if (want.size() == 0) Fail(l, "empty output");
  if (!(want == l.out_shape)) {
    Fail(l, "out_shape " + l.out_shape.ToString() + " but shape arithmetic gives " + want.ToString());
  }
  if (l.weights) {
    const std::vector<std::size_t> dims =
        l.kind == LayerKind::kConv2d ? std::vector<std::size_t>{k.cout, k.cin, k.kh, k.kw}
                                     : std::vector<std::size_t>{k.cout, k.cin};
    if (!l.linear()) Fail(l, "weights on a non-linear layer");
    if (l.weights->dims != dims) Fail(l, "weight dims do not match kernel");
    if (!l.weights->InRange()) Fail(l, "weights outside their bit range");
  }
}

}  // namespace

std::string LayerKindName(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv2d: return "conv2d";
    case LayerKind::kFc: return "fc";
    case LayerKind::kRelu: return "relu";
    case LayerKind::kPool: return "pool";
  }
  return "?";
}

uint64_t LayerSpec::macs() const {
  if (kind == LayerKind::kConv2d) {
    return uint64_t{out_shape.h} * out_shape.w * kernel.cout * kernel.kh * kernel.kw * kernel.cin;
  }
  if (kind == LayerKind::kFc) return uint64_t{kernel.cin} * kernel.cout;
  return 0;
}

std::size_t LayerSpec::fan_in() const {
  if (kind == LayerKind::kConv2d) return kernel.kh * kernel.kw * kernel.cin;
  if (kind == LayerKind::kFc) return kernel.cin;
  return 0;
}

std::vector<Stage> NetworkSpec::Stages() const {
  std::vector<Stage> stages;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    if (l.linear() && !l.concat) {
      Stage s;
      s.linear = {i};
      s.in_shape = l.in_shape;
      s.linear_out_shape = l.out_shape;
      s.out_shape = l.out_shape;
      stages.push_back(s);
      continue;
    }
    if (stages.empty()) Fail(l, "network must start with a linear layer");
    Stage& s = stages.back();
    if (l.concat) {
      if (!s.nonlinear.empty() || layers[s.linear.front()].kind != LayerKind::kConv2d) {
        Fail(l, "concat must directly follow a conv");
      }
      if (!(l.in_shape == s.in_shape)) Fail(l, "concat branch reads a different input");
      if (l.out_shape.h != s.linear_out_shape.h || l.out_shape.w != s.linear_out_shape.w) {
        Fail(l, "concat branch output grid differs");
      }
      s.linear.push_back(i);
      s.linear_out_shape.c += l.out_shape.c;
      s.out_shape = s.linear_out_shape;
      continue;
    }
    if (!(l.in_shape == s.out_shape)) {
      Fail(l, "in_shape " + l.in_shape.ToString() + " does not chain from " + s.out_shape.ToString());
    }
    s.nonlinear.push_back(i);
    s.out_shape = l.out_shape;
  }
  for (std::size_t i = 1; i < stages.size(); ++i) {
    const LayerSpec& first = layers[stages[i].linear.front()];
    const Shape& prev = stages[i - 1].out_shape;
    const bool ok = first.kind == LayerKind::kFc ? first.in_shape.size() == prev.size()
                                                 : first.in_shape == prev;
    if (!ok) {
      Fail(first, "in_shape " + first.in_shape.ToString() + " does not chain from " + prev.ToString());
    }
  }
  return stages;
}

void NetworkSpec::Validate() const {
  for (const LayerSpec& l : layers) ValidateLayer(l);
  Stages();
}

Shape NetworkSpec::input_shape() const {
  if (layers.empty()) return Shape{0, 0, 0};
  return layers.front().in_shape;
}

Shape NetworkSpec::output_shape() const {
  const auto stages = Stages();
  if (stages.empty()) return Shape{0, 0, 0};
  return stages.back().out_shape;
}

uint64_t NetworkSpec::macs() const {
  uint64_t total = 0;
  for (const LayerSpec& l : layers) total += l.macs();
  return total;
}

bool NetworkSpec::has_weights() const {
  for (const LayerSpec& l : layers) {
    if (l.linear() && !l.weights) return false;
  }
  return true;
}

std::string NetworkSpec::ToJson() const {
  json layers_json = json::array();
  for (const LayerSpec& l : layers) {
    json j = {{"name", l.name},
              {"kind", LayerKindName(l.kind)},
              {"in_shape", ShapeJson(l.in_shape)},
              {"out_shape", ShapeJson(l.out_shape)}};
    if (l.linear()) {
      j["kernel"] = {l.kernel.kh, l.kernel.kw, l.kernel.cin, l.kernel.cout};
      j["stride"] = l.stride;
      if (l.kind == LayerKind::kConv2d) j["padding"] = l.padding;
      if (l.concat) j["concat"] = true;
      if (!l.weights_file.empty()) j["weights"] = l.weights_file;
    }
    if (l.kind == LayerKind::kPool) {
      j["pool"] = l.pool == PoolKind::kMax ? "max" : "avg";
      j["window"] = {l.kernel.kh, l.kernel.kw};
      j["stride"] = l.stride;
    }
    layers_json.push_back(j);
  }
  return json{{"name", name}, {"layers", layers_json}}.dump(2);
}

NetworkSpec NetworkSpec::FromJson(const std::string& text) {
  NetworkSpec net;
  try {
    const json root = json::parse(text);
    net.name = root.at("name").get<std::string>();
    for (const json& j : root.at("layers")) {
      LayerSpec l;
      l.name = j.at("name").get<std::string>();
      l.kind = KindFrom(j.at("kind").get<std::string>());
      l.in_shape = ShapeFrom(j.at("in_shape"));
      l.out_shape = ShapeFrom(j.at("out_shape"));
      l.stride = j.value("stride", std::size_t{1});
      if (l.linear()) {
        const auto k = j.at("kernel").get<std::vector<std::size_t>>();
        if (k.size() != 4) throw FormatError("kernel needs 4 entries");
        l.kernel = Kernel{k[0], k[1], k[2], k[3]};
        l.padding = j.value("padding", std::size_t{0});
        l.concat = j.value("concat", false);
        l.weights_file = j.value("weights", std::string());
      }
      if (l.kind == LayerKind::kPool) {
        const std::string p = j.at("pool").get<std::string>();
        if (p != "max" && p != "avg") throw FormatError("unknown pool " + p);
        l.pool = p == "max" ? PoolKind::kMax : PoolKind::kAvg;
        const auto w = j.at("window").get<std::vector<std::size_t>>();
        if (w.size() != 2) throw FormatError("window needs 2 entries");
        l.kernel.kh = w[0];
        l.kernel.kw = w[1];
      }
      net.layers.push_back(std::move(l));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad network json: ") + e.what());
  }
  net.Validate();
  return net;
}

NetworkHash NetworkSpec::Hash() const {
  NetworkSpec arch = *this;
  for (LayerSpec& l : arch.layers) l.weights_file.clear();
  const std::string text = arch.ToJson();
  NetworkHash h{};
  crypto_hash_sha256(h.data(), reinterpret_cast<const unsigned char*>(text.data()), text.size());
  return h;
}

NetworkSpec LoadNetwork(const std::string& path, bool load_weights) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  NetworkSpec net = NetworkSpec::FromJson(ss.str());
  if (load_weights) {
    const auto dir = std::filesystem::path(path).parent_path();
    for (LayerSpec& l : net.layers) {
      if (l.weights_file.empty()) continue;
      l.weights = std::make_shared<const QTensor>(ReadTensorFile((dir / l.weights_file).string()));
    }
    net.Validate();
  }
  return net;
}

void SaveNetwork(const std::string& path, const NetworkSpec& net) {
  NetworkSpec copy = net;
  const auto dir = std::filesystem::path(path).parent_path();
  for (LayerSpec& l : copy.layers) {
    if (!l.weights) continue;
    if (l.weights_file.empty()) l.weights_file = l.name + ".w";
    WriteTensorFile((dir / l.weights_file).string(), *l.weights);
  }
  std::ofstream out(path);
  out << copy.ToJson() << "\n";
  if (!out) throw Error("cannot write " + path);
}

void RandomizeWeights(NetworkSpec& net, uint64_t seed, int bits) {
  std::mt19937_64 rng(seed);
  const uint64_t span = uint64_t{1} << bits;
  for (LayerSpec& l : net.layers) {
    if (!l.linear()) continue;
    auto w = std::make_shared<QTensor>();
    w->bits = bits;
    w->scale = 1.0 / static_cast<double>(span / 2 - 1);
    w->dims = l.kind == LayerKind::kConv2d
                  ? std::vector<std::size_t>{l.kernel.cout, l.kernel.cin, l.kernel.kh, l.kernel.kw}
                  : std::vector<std::size_t>{l.kernel.cout, l.kernel.cin};
    std::size_t count = 1;
    for (std::size_t d : w->dims) count *= d;
    w->data.resize(count);
    // mt19937_64 output is fixed by the standard; the modulo keeps the
    // mapping identical across standard libraries.
    for (int32_t& v : w->data) v = static_cast<int32_t>(rng() % span) + w->min_value();
    l.weights = std::move(w);
  }
}

LayerSpec Conv(std::string name, Shape in, std::size_t k, std::size_t cout, std::size_t stride,
               std::size_t padding) {
  LayerSpec l;
  l.name = std::move(name);
  l.kind = LayerKind::kConv2d;
  l.in_shape = in;
  l.kernel = Kernel{k, k, in.c, cout};
  l.stride = stride;
  l.padding = padding;
  l.out_shape = ExpectedOut(l);
  return l;
}

LayerSpec Fc(std::string name, Shape in, std::size_t cout) {
  LayerSpec l;
  l.name = std::move(name);
  l.kind = LayerKind::kFc;
  l.in_shape = in;
  l.kernel = Kernel{1, 1, in.size(), cout};
  l.out_shape = ExpectedOut(l);
  return l;
}

LayerSpec Relu(std::string name, Shape in) {
  LayerSpec l;
  l.name = std::move(name);
  l.kind = LayerKind::kRelu;
  l.in_shape = in;
  l.out_shape = in;
  return l;
}

LayerSpec Pool(std::string name, Shape in, std::size_t window, std::size_t stride, PoolKind kind) {
  LayerSpec l;
  l.name = std::move(name);
  l.kind = LayerKind::kPool;
  l.in_shape = in;
  l.kernel.kh = window;
  l.kernel.kw = window;
  l.stride = stride;
  l.pool = kind;
  l.out_shape = ExpectedOut(l);
  return l;
}

}  // namespace choco::nn
