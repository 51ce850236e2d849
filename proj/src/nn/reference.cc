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

#include "choco/nn/reference.h"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "choco/common/error.h"

namespace choco::nn {
namespace {

void NeedWeights(const LayerSpec& layer) {
  if (!layer.weights) throw InvalidArgument("layer " + layer.name + " has no weights");
}

int64_t RoundedMean(int64_t sum, int64_t count) {
  const int64_t mag = (2 * std::llabs(sum) + count) / (2 * count);
  return sum < 0 ? -mag : mag;
}

}  // namespace

IntTensor Conv2dReference(const IntTensor& x, const LayerSpec& layer) {
  NeedWeights(layer);
  if (!(x.shape == layer.in_shape)) throw InvalidArgument("conv input shape mismatch");
  const Shape& in = layer.in_shape;
  const Shape& out = layer.out_shape;
  const Kernel& k = layer.kernel;
  const auto& w = layer.weights->data;
  const int64_t pad = static_cast<int64_t>(layer.padding);
  IntTensor y;
  y.shape = out;
  y.scale = x.scale * layer.weights->scale;
  y.data.assign(out.size(), 0);
  for (std::size_t co = 0; co < out.c; ++co) {
    for (std::size_t oy = 0; oy < out.h; ++oy) {
      for (std::size_t ox = 0; ox < out.w; ++ox) {
        int64_t acc = 0;
        for (std::size_t ci = 0; ci < k.cin; ++ci) {
          for (std::size_t ky = 0; ky < k.kh; ++ky) {
            const int64_t iy = static_cast<int64_t>(oy * layer.stride + ky) - pad;
            if (iy < 0 || iy >= static_cast<int64_t>(in.h)) continue;
            for (std::size_t kx = 0; kx < k.kw; ++kx) {
              const int64_t ix = static_cast<int64_t>(ox * layer.stride + kx) - pad;
              if (ix < 0 || ix >= static_cast<int64_t>(in.w)) continue;
              acc += w[((co * k.cin + ci) * k.kh + ky) * k.kw + kx] *
                     x.data[in.index(ci, static_cast<std::size_t>(iy), static_cast<std::size_t>(ix))];
            }
          }
        }
        y.data[out.index(co, oy, ox)] = acc;
      }
    }
  }
  return y;
}

IntTensor FcReference(const IntTensor& x, const LayerSpec& layer) {
  NeedWeights(layer);
  if (x.data.size() != layer.kernel.cin) throw InvalidArgument("fc input length mismatch");
  const auto& w = layer.weights->data;
  IntTensor y;
  y.shape = layer.out_shape;
  y.scale = x.scale * layer.weights->scale;
  y.data.assign(layer.kernel.cout, 0);
  for (std::size_t o = 0; o < layer.kernel.cout; ++o) {
    int64_t acc = 0;
    for (std::size_t i = 0; i < layer.kernel.cin; ++i) acc += w[o * layer.kernel.cin + i] * x.data[i];
    y.data[o] = acc;
  }
  return y;
}

IntTensor LinearStageReference(const IntTensor& x, const NetworkSpec& net, const Stage& stage) {
  IntTensor out;
  out.shape = stage.linear_out_shape;
  for (std::size_t idx : stage.linear) {
    const LayerSpec& l = net.layers[idx];
    IntTensor part = l.kind == LayerKind::kConv2d ? Conv2dReference(x, l) : FcReference(x, l);
    out.scale = part.scale;
    // Channel-major storage makes concatenation an append.
    out.data.insert(out.data.end(), part.data.begin(), part.data.end());
  }
  return out;
}

IntTensor ApplyNonlinear(const IntTensor& x, const LayerSpec& layer) {
  if (!(x.shape == layer.in_shape)) throw InvalidArgument("layer " + layer.name + ": input shape mismatch");
  if (layer.kind == LayerKind::kRelu) {
    IntTensor y = x;
    for (int64_t& v : y.data) v = std::max<int64_t>(v, 0);
    return y;
  }
  if (layer.kind != LayerKind::kPool) throw InvalidArgument("layer " + layer.name + " is linear");
  const Shape& out = layer.out_shape;
  const std::size_t kh = layer.kernel.kh, kw = layer.kernel.kw;
  IntTensor y;
  y.shape = out;
  y.scale = x.scale;
  y.data.assign(out.size(), 0);
  for (std::size_t c = 0; c < out.c; ++c) {
    for (std::size_t oy = 0; oy < out.h; ++oy) {
      for (std::size_t ox = 0; ox < out.w; ++ox) {
        int64_t best = std::numeric_limits<int64_t>::min();
        int64_t sum = 0;
        for (std::size_t dy = 0; dy < kh; ++dy) {
          for (std::size_t dx = 0; dx < kw; ++dx) {
            const int64_t v = x.data[x.shape.index(c, oy * layer.stride + dy, ox * layer.stride + dx)];
            best = std::max(best, v);
            sum += v;
          }
        }
        y.data[out.index(c, oy, ox)] =
            layer.pool == PoolKind::kMax ? best : RoundedMean(sum, static_cast<int64_t>(kh * kw));
      }
    }
  }
  return y;
}

IntTensor ApplyNonlinear(IntTensor x, const NetworkSpec& net, const Stage& stage) {
  for (std::size_t idx : stage.nonlinear) x = ApplyNonlinear(x, net.layers[idx]);
  return x;
}

QTensor ReluPoolRequantize(const IntTensor& x, const std::vector<LayerSpec>& layers, int bits) {
  IntTensor y = x;
  for (const LayerSpec& l : layers) y = ApplyNonlinear(y, l);
  return Requantize(y, bits);
}

IntTensor ReferenceInference(const NetworkSpec& net, const QTensor& image) {
  const auto stages = net.Stages();
  if (stages.empty()) return Widen(image);
  IntTensor x = Widen(image);
  for (std::size_t s = 0; s < stages.size(); ++s) {
    IntTensor y = ApplyNonlinear(LinearStageReference(x, net, stages[s]), net, stages[s]);
    if (s + 1 == stages.size()) return y;
    x = NextStageInput(y, net, stages[s + 1]);
  }
  return x;
}

IntTensor NextStageInput(const IntTensor& y, const NetworkSpec& net, const Stage& next) {
  IntTensor x = Widen(Requantize(y));
  // An fc stage reads the tensor flattened; keep its recorded shape.
  x.shape = net.layers[next.linear.front()].in_shape;
  return x;
}

}  // namespace choco::nn
